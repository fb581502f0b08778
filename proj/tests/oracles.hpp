#pragma once

// Brute-force reference implementations used to cross-check the library.
// Deliberately naive: cofactor determinants, box enumeration, exhaustive
// backtracking over basis images.

#include "k3lat/exact.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using k3lat::Integer;
using k3lat::IntMatrix;
using k3lat::IntVector;
using k3lat::Rational;

inline Integer cofactor_det(const IntMatrix &a) {
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return a(0, 0);
    Integer d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j) == 0)
            continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j)
                    minor(r - 1, cc++) = a(r, c);
        const Integer term = a(0, j) * cofactor_det(minor);
        d += (j % 2 == 0) ? term : Integer(-term);
    }
    return d;
}

/// Gauss-Jordan over Q, kept separate from the library's inverse.
inline std::vector<std::vector<Rational>> rational_inverse(const IntMatrix &a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = Rational(a(i, j));
        m[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (m[p][c] == 0)
            ++p;
        std::swap(m[p], m[c]);
        const Rational inv = 1 / m[c][c];
        for (auto &x : m[c])
            x *= inv;
        for (std::size_t r = 0; r < n; ++r)
            if (r != c && m[r][c] != 0) {
                const Rational f = m[r][c];
                for (std::size_t k = 0; k < 2 * n; ++k)
                    m[r][k] -= f * m[c][k];
            }
    }
    std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i][j] = m[i][n + j];
    return out;
}

inline Integer form(const IntMatrix &g, const IntVector &u, const IntVector &v) {
    Integer s = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            s += u[i] * g(i, j) * v[j];
    return s;
}

inline bool positive_definite(const IntMatrix &g) {
    for (std::size_t k = 1; k <= g.rows(); ++k)
        if (cofactor_det(g.block(0, 0, k, k)) <= 0)
            return false;
    return true;
}

/// Every nonzero x in the box |x_i| ≤ sqrt(bound·(G⁻¹)_ii) with x² ≤ bound.
inline std::vector<IntVector> box_short_vectors(const IntMatrix &g, const Integer &bound) {
    const std::size_t n = g.rows();
    const auto inv = rational_inverse(g);
    std::vector<long> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational x = inv[i][i] * bound;
        Integer s;
        mpz_fdiv_q(s.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
        r[i] = s.get_si();
    }
    std::vector<IntVector> out;
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = -r[i];
    while (true) {
        bool zero = std::all_of(x.begin(), x.end(), [](const Integer &v) { return v == 0; });
        if (!zero && form(g, x, x) <= bound)
            out.push_back(x);
        std::size_t i = 0;
        while (i < n && x[i] == r[i]) {
            x[i] = -r[i];
            ++i;
        }
        if (i == n)
            break;
        ++x[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every Q (columns = images of the basis of L1 in L2) with QᵀG₂Q = G₁, by
/// backtracking over box-enumerated candidates. Both must be positive
/// definite of the same rank.
inline std::vector<IntMatrix> brute_isometries(const IntMatrix &g1, const IntMatrix &g2,
                                               bool first_only = false) {
    const std::size_t n = g1.rows();
    Integer maxd = 0;
    for (std::size_t i = 0; i < n; ++i)
        maxd = std::max(maxd, Integer(g1(i, i)));
    const auto pool = box_short_vectors(g2, maxd);
    std::vector<std::vector<IntVector>> cand(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto &v : pool)
            if (form(g2, v, v) == g1(i, i))
                cand[i].push_back(v);
    std::vector<IntMatrix> out;
    std::vector<IntVector> img(n);
    auto rec = [&](auto &&self, std::size_t k) -> void {
        if (first_only && !out.empty())
            return;
        if (k == n) {
            IntMatrix q(n, n);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i)
                    q(i, j) = img[j][i];
            const Integer d = cofactor_det(q);
            if (d == 1 || d == -1)
                out.push_back(q);
            return;
        }
        for (const auto &v : cand[k]) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j)
                ok = form(g2, img[j], v) == g1(j, k);
            if (!ok)
                continue;
            img[k] = v;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<IntMatrix> brute_automorphisms(const IntMatrix &g) {
    return brute_isometries(g, g);
}

/// Histogram of (element order, q mod 2) over L^∨/L, built by reducing G⁻¹w
/// for w in a box modulo Z^n.
inline std::map<std::pair<long, Rational>, long> discriminant_histogram(const IntMatrix &g) {
    const std::size_t n = g.rows();
    const auto inv = rational_inverse(g);
    Integer det = cofactor_det(g);
    if (det < 0)
        det = -det;
    const long d = det.get_si();
    std::set<std::vector<Rational>> classes;
    std::vector<long> w(n, 0);
    while (true) {
        std::vector<Rational> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < n; ++j)
                s += inv[i][j] * w[j];
            Integer fl;
            mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
            v[i] = s - fl;
        }
        classes.insert(v);
        std::size_t i = 0;
        while (i < n && w[i] == d - 1) {
            w[i] = 0;
            ++i;
        }
        if (i == n)
            break;
        ++w[i];
    }
    std::map<std::pair<long, Rational>, long> hist;
    for (const auto &v : classes) {
        Rational q = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                q += v[i] * Rational(g(i, j)) * v[j];
        while (q >= 2)
            q -= 2;
        while (q < 0)
            q += 2;
        Integer den = 1;
        for (const auto &x : v)
            den = lcm(den, Integer(x.get_den()));
        hist[{den.get_si(), q}]++;
    }
    return hist;
}

/// Random even symmetric matrix, entries bounded, optionally positive
/// definite.
inline IntMatrix random_even_gram(std::mt19937_64 &rng, std::size_t n, long max_entry,
                                  bool definite) {
    std::uniform_int_distribution<long> off(-max_entry / 2, max_entry / 2);
    std::uniform_int_distribution<long> diag(definite ? 1 : -max_entry / 2, max_entry / 2);
    while (true) {
        IntMatrix g(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            long d = diag(rng);
            if (d == 0)
                d = 1;
            g(i, i) = 2 * d;
            for (std::size_t j = i + 1; j < n; ++j)
                g(i, j) = g(j, i) = off(rng);
        }
        if (definite ? positive_definite(g) : cofactor_det(g) != 0)
            return g;
    }
}

/// Product of random elementary matrices.
inline IntMatrix random_unimodular(std::mt19937_64 &rng, std::size_t n, int steps = 8) {
    IntMatrix p = IntMatrix::identity(n);
    if (n < 2)
        return p;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j)
            continue;
        const long c = coef(rng);
        for (std::size_t k = 0; k < n; ++k)
            p(i, k) += c * p(j, k);
    }
    return p;
}

} // namespace oracle
