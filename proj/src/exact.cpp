#include "k3lat/exact.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace k3lat {

IntMatrix diagonal(const IntVector &d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

IntMatrix direct_sum(const IntMatrix &a, const IntMatrix &b) {
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

RatMatrix to_rational(const IntMatrix &a) {
    RatMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j);
    return r;
}

bool is_integral(const RatMatrix &a) {
    for (const auto &x : a.data())
        if (x.get_den() != 1)
            return false;
    return true;
}

IntMatrix to_integer(const RatMatrix &a) {
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).get_den() != 1)
                throw InputError("matrix entry " + to_string(a(i, j)) + " is not an integer");
            r(i, j) = a(i, j).get_num();
        }
    return r;
}

IntVector mat_vec(const IntMatrix &a, const IntVector &v) {
    if (a.cols() != v.size())
        throw InputError("matrix-vector product: dimension mismatch");
    IntVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (v[j] != 0)
                out[i] += a(i, j) * v[j];
    return out;
}

RatVector mat_vec(const RatMatrix &a, const RatVector &v) {
    if (a.cols() != v.size())
        throw InputError("matrix-vector product: dimension mismatch");
    RatVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (v[j] != 0)
                out[i] += a(i, j) * v[j];
    return out;
}

Integer dot(const IntVector &a, const IntVector &b) {
    if (a.size() != b.size())
        throw InputError("dot product: length mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Integer bilinear(const IntMatrix &g, const IntVector &a, const IntVector &b) {
    return dot(a, mat_vec(g, b));
}

Rational bilinear(const RatMatrix &g, const RatVector &a, const RatVector &b) {
    RatVector gb = mat_vec(g, b);
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * gb[i];
    return s;
}

bool is_zero(const IntVector &v) {
    return std::all_of(v.begin(), v.end(), [](const Integer &x) { return x == 0; });
}

Integer determinant(const IntMatrix &a) {
    if (!a.square())
        throw InputError("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    // Bareiss fraction-free elimination.
    IntMatrix m = a;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

RatMatrix inverse(const RatMatrix &a) {
    if (!a.square())
        throw InputError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    RatMatrix m = a;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0)
            ++p;
        if (p == n)
            throw InputError("inverse of a singular matrix");
        m.swap_rows(c, p);
        inv.swap_rows(c, p);
        const Rational piv = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c) == 0)
                continue;
            const Rational f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

std::size_t rank(const IntMatrix &a) { return hermite_normal_form(a).rank; }

namespace {

void row_axpy(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &q) {
    // row_dst -= q * row_src
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(src, j) != 0)
            m(dst, j) -= q * m(src, j);
}

void col_axpy(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &q) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m(i, src) != 0)
            m(i, dst) -= q * m(i, src);
}

Integer fdiv(const Integer &a, const Integer &b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

SmithForm smith_normal_form(const IntMatrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    SmithForm f{a, IntMatrix::identity(m), IntMatrix::identity(n)};
    IntMatrix &S = f.S;
    const std::size_t d = std::min(m, n);

    for (std::size_t t = 0; t < d; ++t) {
        // Global minimum-absolute-value pivot over the active block.
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (S(i, j) != 0 && (pi == m || abs(S(i, j)) < abs(S(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi == m)
            break;
        S.swap_rows(t, pi);
        f.U.swap_rows(t, pi);
        S.swap_cols(t, pj);
        f.V.swap_cols(t, pj);

        while (true) {
            // Smallest nonzero in row t / column t becomes the pivot.
            std::size_t bi = t, bj = t;
            for (std::size_t i = t + 1; i < m; ++i)
                if (S(i, t) != 0 && abs(S(i, t)) < abs(S(bi, bj))) {
                    bi = i;
                    bj = t;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (S(t, j) != 0 && abs(S(t, j)) < abs(S(bi, bj))) {
                    bi = t;
                    bj = j;
                }
            if (bi != t) {
                S.swap_rows(t, bi);
                f.U.swap_rows(t, bi);
            }
            if (bj != t) {
                S.swap_cols(t, bj);
                f.V.swap_cols(t, bj);
            }

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (S(i, t) == 0)
                    continue;
                const Integer q = fdiv(S(i, t), S(t, t));
                row_axpy(S, i, t, q);
                row_axpy(f.U, i, t, q);
                if (S(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S(t, j) == 0)
                    continue;
                const Integer q = fdiv(S(t, j), S(t, t));
                col_axpy(S, j, t, q);
                col_axpy(f.V, j, t, q);
                if (S(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        // Pull the offending row into row t and redo.
                        for (std::size_t c = 0; c < n; ++c)
                            S(t, c) += S(i, c);
                        for (std::size_t c = 0; c < m; ++c)
                            f.U(t, c) += f.U(i, c);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (S(t, t) < 0) {
            for (std::size_t c = 0; c < n; ++c)
                S(t, c) = -S(t, c);
            for (std::size_t c = 0; c < m; ++c)
                f.U(t, c) = -f.U(t, c);
        }
    }
    return f;
}

IntVector invariant_factors(const IntMatrix &a) {
    SmithForm f = smith_normal_form(a);
    IntVector d(std::min(a.rows(), a.cols()));
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = f.S(i, i);
    return d;
}

HermiteForm hermite_normal_form(const IntMatrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    HermiteForm h{a, IntMatrix::identity(m), 0};
    IntMatrix &H = h.H;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        while (true) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (H(i, c) != 0 && (best == m || abs(H(i, c)) < abs(H(best, c))))
                    best = i;
            if (best == m)
                break;
            H.swap_rows(r, best);
            h.T.swap_rows(r, best);
            bool done = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H(i, c) == 0)
                    continue;
                const Integer q = fdiv(H(i, c), H(r, c));
                row_axpy(H, i, r, q);
                row_axpy(h.T, i, r, q);
                if (H(i, c) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (H(r, c) == 0)
            continue;
        if (H(r, c) < 0) {
            for (std::size_t j = 0; j < n; ++j)
                H(r, j) = -H(r, j);
            for (std::size_t j = 0; j < m; ++j)
                h.T(r, j) = -h.T(r, j);
        }
        for (std::size_t i = 0; i < r; ++i) {
            const Integer q = fdiv(H(i, c), H(r, c));
            if (q != 0) {
                row_axpy(H, i, r, q);
                row_axpy(h.T, i, r, q);
            }
        }
        ++r;
    }
    h.rank = r;
    return h;
}

IntMatrix row_basis(const IntMatrix &a) {
    HermiteForm h = hermite_normal_form(a);
    return h.H.block(0, 0, h.rank, a.cols());
}

IntMatrix integer_kernel(const IntMatrix &a) {
    if (a.cols() == 0)
        return IntMatrix::identity(a.rows());
    HermiteForm h = hermite_normal_form(a);
    IntMatrix k = h.T.block(h.rank, 0, a.rows() - h.rank, a.rows());
    // Tidy the basis; HNF of a saturated basis is still a basis of the same module.
    return row_basis(k);
}

IntMatrix saturate(const IntMatrix &a) {
    const std::size_t n = a.cols();
    if (a.rows() == 0)
        return IntMatrix(0, n);
    IntMatrix perp = integer_kernel(a.transpose());
    if (perp.rows() == 0)
        return IntMatrix::identity(n);
    return integer_kernel(perp.transpose());
}

Signature signature(const IntMatrix &g) {
    if (!g.is_symmetric())
        throw InputError("signature: Gram matrix is not symmetric");
    const std::size_t n = g.rows();
    RatMatrix a = to_rational(g);
    Signature s;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, p) == 0)
                ++p;
            if (p < n) {
                a.swap_rows(k, p);
                a.swap_cols(k, p);
            } else {
                std::size_t j = k + 1;
                while (j < n && a(k, j) == 0)
                    ++j;
                if (j == n)
                    throw InputError("signature: degenerate Gram matrix");
                // x_k ↦ x_k + x_j makes the pivot 2·a(k,j) ≠ 0.
                for (std::size_t c = 0; c < n; ++c)
                    a(k, c) += a(j, c);
                for (std::size_t r = 0; r < n; ++r)
                    a(r, k) += a(r, j);
            }
        }
        const Rational piv = a(k, k);
        if (piv > 0)
            ++s.pos;
        else
            ++s.neg;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0)
                continue;
            const Rational f = a(i, k) / piv;
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
            for (std::size_t j = k; j < n; ++j)
                a(j, i) = a(i, j);
        }
    }
    return s;
}

Integer floor_q(const Rational &r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer ceil_q(const Rational &r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer isqrt_floor(const Rational &r) {
    if (r < 0)
        throw InputError("isqrt of a negative number");
    Integer f = floor_q(r);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
    return s;
}

Rational make_rational(const Integer &num, const Integer &den) {
    if (den == 0)
        throw InputError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational mod_q(const Rational &r, const Rational &m) {
    Rational q = r / m;
    Rational out = r - m * Rational(floor_q(q));
    out.canonicalize();
    return out;
}

std::string to_string(const Integer &x) { return x.get_str(); }
std::string to_string(const Rational &x) { return x.get_str(); }

std::string to_string(const IntMatrix &a) {
    std::ostringstream os;
    os << a;
    return os.str();
}

Rational parse_rational(const std::string &s) {
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw InputError("malformed rational literal '" + s + "'");
    if (r.get_den() == 0)
        throw InputError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::ostream &operator<<(std::ostream &os, const IntMatrix &a) {
    os << '[';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < a.cols(); ++j)
            os << (j ? "," : "") << a(i, j);
        os << ']';
    }
    return os << ']';
}

} // namespace k3lat

namespace k3lat {

namespace {

Integer round_q(const Rational &r) {
    // Nearest integer, halves rounded down.
    return floor_q(r + Rational(1, 2));
}

} // namespace

LllResult lll_reduce(const IntMatrix &gram) {
    if (!gram.is_symmetric())
        throw InputError("LLL: Gram matrix is not symmetric");
    const std::size_t n = gram.rows();
    LllResult res{gram, IntMatrix::identity(n)};
    if (n < 2)
        return res;
    IntMatrix &g = res.gram;
    IntMatrix &b = res.basis;
    std::vector<RatVector> mu(n, RatVector(n));
    RatVector bstar(n);
    const Rational delta(3, 4);

    auto gso_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rational s = g(i, j);
            for (std::size_t l = 0; l < j; ++l)
                s -= mu[j][l] * mu[i][l] * bstar[l];
            mu[i][j] = s / bstar[j];
        }
        Rational s = g(i, i);
        for (std::size_t l = 0; l < i; ++l)
            s -= mu[i][l] * mu[i][l] * bstar[l];
        if (s <= 0)
            throw InputError("LLL: Gram matrix is not positive definite");
        bstar[i] = s;
    };
    auto sub_row = [&](std::size_t k, std::size_t j, const Integer &q) {
        // b_k -= q b_j, with the Gram matrix updated congruently.
        for (std::size_t c = 0; c < n; ++c)
            b(k, c) -= q * b(j, c);
        const Integer gkk = g(k, k) - 2 * q * g(k, j) + q * q * g(j, j);
        for (std::size_t c = 0; c < n; ++c)
            if (c != k) {
                g(k, c) -= q * g(j, c);
                g(c, k) = g(k, c);
            }
        g(k, k) = gkk;
    };

    gso_row(0);
    gso_row(1);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            const Integer q = round_q(mu[k][jj]);
            if (q == 0)
                continue;
            sub_row(k, jj, q);
            gso_row(k);
        }
        if (bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
            if (k < n)
                gso_row(k);
        } else {
            b.swap_rows(k, k - 1);
            g.swap_rows(k, k - 1);
            g.swap_cols(k, k - 1);
            gso_row(k - 1);
            gso_row(k);
            if (k > 1)
                --k;
        }
    }
    return res;
}

} // namespace k3lat
