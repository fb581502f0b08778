#include "k3lat/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

namespace k3lat {

Lattice::Lattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.square())
        throw InputError("Gram matrix is not square");
    if (!gram_.is_symmetric())
        throw InputError("Gram matrix fails the symmetry check");
    det_ = determinant(gram_);
    if (det_ == 0)
        throw InputError("Gram matrix is degenerate (det = 0)");
}

bool Lattice::is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (gram_(i, i) % 2 != 0)
            return false;
    return true;
}

bool Lattice::is_positive_definite() const { return signature().pos == rank(); }
bool Lattice::is_negative_definite() const { return signature().neg == rank(); }

bool is_isometry_of(const Lattice &l, const IntMatrix &q) {
    if (q.rows() != l.rank() || q.cols() != l.rank())
        return false;
    return q.transpose() * l.gram() * q == l.gram();
}

std::optional<long> matrix_order(const IntMatrix &q, long limit) {
    if (!q.square())
        throw InputError("order of a non-square matrix");
    const IntMatrix id = IntMatrix::identity(q.rows());
    IntMatrix p = q;
    for (long k = 1; k <= limit; ++k) {
        if (p == id)
            return k;
        p = p * q;
    }
    return std::nullopt;
}

Isometry make_isometry(const Lattice &l, const IntMatrix &q) {
    if (!is_isometry_of(l, q))
        throw InputError("matrix is not an isometry of the lattice");
    return {q, matrix_order(q)};
}

Integer trace(const IntMatrix &q) {
    Integer t = 0;
    for (std::size_t i = 0; i < std::min(q.rows(), q.cols()); ++i)
        t += q(i, i);
    return t;
}

IntMatrix matrix_power(const IntMatrix &q, long k) {
    if (k < 0)
        throw InputError("negative matrix power");
    IntMatrix result = IntMatrix::identity(q.rows());
    IntMatrix base = q;
    while (k > 0) {
        if (k & 1)
            result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

IntMatrix SublatticeBasis::induced_gram() const {
    return rows * ambient.gram() * rows.transpose();
}

SublatticeBasis primitive_closure(const Lattice &ambient, const IntMatrix &rows) {
    if (rows.cols() != ambient.rank())
        throw InputError("sublattice rows have the wrong length");
    return {ambient, saturate(rows), true};
}

FqmElement Discriminant::project(const RatVector &dual_vector) const {
    RatVector y = mat_vec(to_rational(gram), dual_vector);
    IntVector yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i].get_den() != 1)
            throw InputError("vector is not in the dual lattice");
        yi[i] = y[i].get_num();
    }
    IntVector c = mat_vec(u, yi);
    FqmElement x(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        Integer r;
        const Integer d = form.orders()[i];
        mpz_fdiv_r(r.get_mpz_t(), c[index[i]].get_mpz_t(), d.get_mpz_t());
        x[i] = r.get_si();
    }
    return x;
}

RatVector Discriminant::lift(const FqmElement &x) const {
    const FqmElement r = form.reduce(x);
    RatVector v(gram.rows());
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] != 0)
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] += Rational(static_cast<long>(r[i])) * lifts(i, j);
    return v;
}

Discriminant discriminant(const Lattice &l) {
    if (!l.is_even())
        throw InputError("discriminant form requires an even lattice");
    const std::size_t n = l.rank();
    const SmithForm snf = smith_normal_form(l.gram());
    Discriminant d;
    d.gram = l.gram();
    d.u = snf.U;
    std::vector<std::int64_t> orders;
    for (std::size_t i = 0; i < n; ++i) {
        const Integer &di = snf.S(i, i);
        if (di == 0)
            throw InputError("discriminant of a degenerate lattice");
        if (di == 1)
            continue;
        if (di > std::numeric_limits<std::int32_t>::max())
            throw InputError("discriminant group has an invariant factor beyond 2^31");
        orders.push_back(di.get_si());
        d.index.push_back(i);
    }
    const std::size_t r = orders.size();
    d.lifts = RatMatrix(r, n);
    for (std::size_t a = 0; a < r; ++a) {
        const std::size_t i = d.index[a];
        for (std::size_t j = 0; j < n; ++j)
            d.lifts(a, j) = make_rational(snf.V(j, i), snf.S(i, i));
    }
    const RatMatrix g = to_rational(l.gram());
    std::vector<Rational> q(r);
    RatMatrix b(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        const RatVector va = d.lifts.row(a);
        q[a] = bilinear(g, va, va);
        for (std::size_t c = 0; c < r; ++c)
            b(a, c) = bilinear(g, va, d.lifts.row(c));
    }
    d.form = Fqm(std::move(orders), std::move(q), std::move(b));
    return d;
}

FqmHom induced_map(const Lattice &l, const Discriminant &d, const IntMatrix &f) {
    if (!is_isometry_of(l, f))
        throw InputError("induced map of a non-isometry");
    const RatMatrix fr = to_rational(f);
    std::vector<FqmElement> images;
    for (std::size_t i = 0; i < d.form.num_generators(); ++i)
        images.push_back(d.project(mat_vec(fr, d.lifts.row(i))));
    return FqmHom(d.form, d.form, std::move(images));
}

FqmHom induced_map(const Lattice &l, const Isometry &f) {
    return induced_map(l, discriminant(l), f.matrix);
}

Integer divisibility(const Lattice &l, const IntVector &v) {
    if (v.size() != l.rank())
        throw InputError("vector has the wrong length");
    if (is_zero(v))
        throw InputError("divisibility of the zero vector");
    Integer g = 0;
    for (const auto &x : mat_vec(l.gram(), v))
        g = gcd(g, x);
    return g;
}

SublatticeBasis orthogonal_complement(const SublatticeBasis &s) {
    const std::size_t n = s.ambient.rank();
    if (s.rows.cols() != n)
        throw InputError("sublattice rows have the wrong length");
    if (s.rows.rows() == 0)
        return {s.ambient, IntMatrix::identity(n), true};
    const IntMatrix a = s.ambient.gram() * s.rows.transpose();
    return {s.ambient, integer_kernel(a), true};
}

InvariantPair invariant_and_coinvariant(const Lattice &l, const std::vector<Isometry> &gens) {
    const std::size_t n = l.rank();
    IntMatrix stacked(n, n * gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
        if (!is_isometry_of(l, gens[g].matrix))
            throw InputError("generator " + std::to_string(g) + " is not an isometry");
        const IntMatrix d = (gens[g].matrix - IntMatrix::identity(n)).transpose();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                stacked(i, g * n + j) = d(i, j);
    }
    SublatticeBasis inv{l, gens.empty() ? IntMatrix::identity(n) : integer_kernel(stacked), true};
    SublatticeBasis coinv = orthogonal_complement(inv);
    return {inv, coinv};
}

IntVector reflection_compose(const Lattice &l, const IntVector &h, const IntVector &v) {
    if (l.norm(h) != 2)
        throw InputError("reflection requires h^2 = 2");
    const Integer hv = l.inner(h, v);
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = -v[i] + hv * h[i];
    return out;
}

Isometry reflection(const Lattice &l, const IntVector &h) {
    const std::size_t n = l.rank();
    IntMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        IntVector e(n);
        e[j] = 1;
        q.set_col(j, reflection_compose(l, h, e));
    }
    return {q, n == 1 ? 1 : 2};
}

namespace lattices {

Lattice hyperbolic_plane() { return Lattice(IntMatrix{{0, 1}, {1, 0}}); }

Lattice e8(int sign) {
    if (sign != 1 && sign != -1)
        throw InputError("E8 sign must be +1 or -1");
    IntMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        g(i, i) = 2;
    const std::pair<int, int> edges[] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
    for (auto [a, b] : edges) {
        g(a, b) = -1;
        g(b, a) = -1;
    }
    return Lattice(Integer(sign) * g);
}

Lattice a2(int sign) {
    if (sign != 1 && sign != -1)
        throw InputError("A2 sign must be +1 or -1");
    return Lattice(Integer(sign) * IntMatrix{{2, 1}, {1, 2}});
}

Lattice rank_one(const Integer &k) {
    if (k == 0)
        throw InputError("<k> requires k != 0");
    return Lattice(IntMatrix{{k}});
}

Lattice rescale(const Lattice &l, const Integer &m) {
    if (m == 0)
        throw InputError("rescaling factor must be nonzero");
    return Lattice(m * l.gram());
}

Lattice direct_sum(const Lattice &a, const Lattice &b) {
    return Lattice(k3lat::direct_sum(a.gram(), b.gram()));
}

Lattice k3() {
    Lattice l = direct_sum(e8(-1), e8(-1));
    for (int i = 0; i < 3; ++i)
        l = direct_sum(l, hyperbolic_plane());
    return l;
}

Lattice k3_hilbert_square() { return direct_sum(k3(), rank_one(-2)); }

std::vector<std::vector<int>> golay_code() {
    // Cyclic code of length 23 with generator 1+x^2+x^4+x^5+x^6+x^10+x^11.
    const int poly[] = {0, 2, 4, 5, 6, 10, 11};
    std::vector<std::uint32_t> basis;
    for (int s = 0; s < 12; ++s) {
        std::uint32_t w = 0;
        for (int e : poly)
            w |= 1u << ((e + s) % 23);
        basis.push_back(w);
    }
    std::vector<std::vector<int>> words;
    words.reserve(4096);
    for (std::uint32_t mask = 0; mask < 4096; ++mask) {
        std::uint32_t w = 0;
        for (int i = 0; i < 12; ++i)
            if (mask >> i & 1)
                w ^= basis[i];
        std::vector<int> word(24);
        int parity = 0;
        for (int i = 0; i < 23; ++i) {
            word[i] = static_cast<int>(w >> i & 1);
            parity ^= word[i];
        }
        word[23] = parity;
        words.push_back(std::move(word));
    }
    return words;
}

Lattice leech() {
    // Coordinates scaled by sqrt(8): 2·octads, 4e₀±4eⱼ, and (−3, 1²³) span.
    std::vector<IntVector> gens;
    for (const auto &w : golay_code()) {
        if (std::count(w.begin(), w.end(), 1) != 8)
            continue;
        IntVector v(24);
        for (int i = 0; i < 24; ++i)
            v[i] = 2 * w[i];
        gens.push_back(v);
    }
    IntVector v(24);
    v[0] = 8;
    gens.push_back(v);
    for (int j = 1; j < 24; ++j) {
        IntVector u(24);
        u[0] = 4;
        u[j] = 4;
        gens.push_back(u);
    }
    IntVector odd(24, Integer(1));
    odd[0] = -3;
    gens.push_back(odd);
    const IntMatrix b = row_basis(IntMatrix::from_rows(gens, 24));
    IntMatrix g = b * b.transpose();
    for (std::size_t i = 0; i < 24; ++i)
        for (std::size_t j = 0; j < 24; ++j) {
            if (g(i, j) % 8 != 0)
                throw InvariantError("Leech construction produced a non-integral Gram entry");
            g(i, j) /= 8;
        }
    return Lattice(lll_reduce(g).gram);
}

namespace {

std::string strip(const std::string &s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

} // namespace

Lattice by_name(const std::string &raw) {
    const std::string name = strip(raw);
    if (name == "U")
        return hyperbolic_plane();
    if (name == "E8")
        return e8(1);
    if (name == "E8(-1)")
        return e8(-1);
    if (name == "A2")
        return a2(1);
    if (name == "A2(-1)")
        return a2(-1);
    if (name == "K3")
        return k3();
    if (name == "K3[2]" || name == "K3^[2]")
        return k3_hilbert_square();
    if (name == "Leech")
        return leech();
    if (name.size() >= 3 && name.front() == '<' && name.back() == '>') {
        Integer k;
        if (k.set_str(name.substr(1, name.size() - 2), 10) != 0)
            throw InputError("cannot parse rank-one lattice '" + raw + "'");
        return rank_one(k);
    }
    throw InputError("unknown lattice name '" + raw + "'");
}

} // namespace lattices

} // namespace k3lat
