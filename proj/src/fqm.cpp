#include "k3lat/fqm.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace k3lat {

namespace {

const Rational kTwo(2);
const Rational kOne(1);

std::int64_t pos_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

bool is_integer(const Rational &r) { return r.get_den() == 1; }

} // namespace

Fqm::Fqm(std::vector<std::int64_t> orders, std::vector<Rational> q, RatMatrix b)
    : orders_(std::move(orders)), q_(std::move(q)), b_(std::move(b)) {
    const std::size_t r = orders_.size();
    if (q_.size() != r || b_.rows() != r || b_.cols() != r)
        throw InputError("finite quadratic module: inconsistent number of generators");
    for (auto d : orders_)
        if (d <= 1 || d > (std::int64_t{1} << 31))
            throw InputError("finite quadratic module: generator order " + std::to_string(d) +
                             " outside (1, 2^31]");
    for (auto &x : q_)
        x = mod_q(x, kTwo);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            b_(i, j) = mod_q(b_(i, j), kOne);
    if (!b_.is_symmetric())
        throw InputError("finite quadratic module: pairing matrix is not symmetric");
    for (std::size_t i = 0; i < r; ++i) {
        if (mod_q(q_[i] - b_(i, i), kOne) != 0)
            throw InputError("finite quadratic module: b(g,g) != q(g) mod 1 for generator " +
                             std::to_string(i));
        const Rational dq = Rational(orders_[i]) * Rational(orders_[i]) * q_[i];
        if (!is_integer(dq) || dq.get_num() % 2 != 0)
            throw InputError("finite quadratic module: q not well defined on generator " +
                             std::to_string(i));
        for (std::size_t j = 0; j < r; ++j)
            if (!is_integer(Rational(orders_[i]) * b_(i, j)))
                throw InputError("finite quadratic module: pairing not compatible with orders");
    }
}

Integer Fqm::order() const {
    Integer n = 1;
    for (auto d : orders_)
        n *= d;
    return n;
}

std::int64_t Fqm::order_bounded(std::int64_t bound) const {
    std::int64_t n = 1;
    for (auto d : orders_) {
        if (n > bound / d)
            throw InputError("finite quadratic module of order " + order().get_str() +
                             " exceeds the enumeration bound " + std::to_string(bound));
        n *= d;
    }
    return n;
}

FqmElement Fqm::generator(std::size_t i) const {
    FqmElement g = zero();
    g.at(i) = 1;
    return g;
}

FqmElement Fqm::reduce(const FqmElement &x) const {
    if (x.size() != orders_.size())
        throw InputError("element has wrong number of coordinates");
    FqmElement out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = pos_mod(x[i], orders_[i]);
    return out;
}

FqmElement Fqm::add(const FqmElement &x, const FqmElement &y) const {
    FqmElement out(orders_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = pos_mod(x[i] + y[i], orders_[i]);
    return out;
}

FqmElement Fqm::neg(const FqmElement &x) const {
    FqmElement out(orders_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = pos_mod(-x[i], orders_[i]);
    return out;
}

FqmElement Fqm::scale(std::int64_t k, const FqmElement &x) const {
    FqmElement out(orders_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::int64_t kk = pos_mod(k, orders_[i]);
        out[i] = static_cast<std::int64_t>((static_cast<__int128>(kk) * x[i]) % orders_[i]);
    }
    return out;
}

bool Fqm::is_zero(const FqmElement &x) const {
    return std::all_of(x.begin(), x.end(), [](std::int64_t c) { return c == 0; });
}

std::int64_t Fqm::element_order(const FqmElement &x) const {
    std::int64_t n = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::int64_t oi = orders_[i] / std::gcd(orders_[i], x[i]);
        n = std::lcm(n, oi);
    }
    return n;
}

bool Fqm::contains(const FqmElement &x) const {
    if (x.size() != orders_.size())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0 || x[i] >= orders_[i])
            return false;
    return true;
}

Rational Fqm::q(const FqmElement &x) const {
    Rational s = 0;
    const std::size_t r = orders_.size();
    for (std::size_t i = 0; i < r; ++i) {
        if (x[i] == 0)
            continue;
        s += Rational(x[i] * x[i]) * q_[i];
        for (std::size_t j = i + 1; j < r; ++j)
            if (x[j] != 0)
                s += Rational(2 * x[i] * x[j]) * b_(i, j);
    }
    return mod_q(s, kTwo);
}

Rational Fqm::b(const FqmElement &x, const FqmElement &y) const {
    Rational s = 0;
    const std::size_t r = orders_.size();
    for (std::size_t i = 0; i < r; ++i) {
        if (x[i] == 0)
            continue;
        for (std::size_t j = 0; j < r; ++j)
            if (y[j] != 0)
                s += Rational(x[i] * y[j]) * b_(i, j);
    }
    return mod_q(s, kOne);
}

std::int64_t Fqm::index_of(const FqmElement &x) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        idx = idx * orders_[i] + x[i];
    return idx;
}

FqmElement Fqm::element_at(std::int64_t index) const {
    FqmElement x(orders_.size());
    for (std::size_t i = orders_.size(); i-- > 0;) {
        x[i] = index % orders_[i];
        index /= orders_[i];
    }
    return x;
}

std::vector<FqmElement> Fqm::elements(std::int64_t bound) const {
    const std::int64_t n = order_bounded(bound);
    std::vector<FqmElement> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        out.push_back(element_at(i));
    return out;
}

Fqm Fqm::negated() const {
    std::vector<Rational> q(q_.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = -q_[i];
    return Fqm(orders_, q, Rational(-1) * b_);
}

Fqm direct_sum(const Fqm &a, const Fqm &b) {
    std::vector<std::int64_t> orders = a.orders();
    orders.insert(orders.end(), b.orders().begin(), b.orders().end());
    std::vector<Rational> q = a.q_gen();
    q.insert(q.end(), b.q_gen().begin(), b.q_gen().end());
    const std::size_t ra = a.num_generators();
    const std::size_t r = orders.size();
    RatMatrix m(r, r);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            m(i, j) = a.b_gen()(i, j);
    for (std::size_t i = ra; i < r; ++i)
        for (std::size_t j = ra; j < r; ++j)
            m(i, j) = b.b_gen()(i - ra, j - ra);
    return Fqm(orders, q, m);
}

// ---------------------------------------------------------------------------

FqmHom::FqmHom(Fqm source, Fqm target, std::vector<FqmElement> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.num_generators())
        throw InputError("homomorphism: one image per source generator required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!target_.contains(images_[i]))
            images_[i] = target_.reduce(images_[i]);
        if (!target_.is_zero(target_.scale(source_.orders()[i], images_[i])))
            throw InputError("homomorphism not well defined: order of generator " +
                             std::to_string(i) + " does not kill its image");
    }
}

FqmHom FqmHom::identity(const Fqm &m) {
    std::vector<FqmElement> imgs;
    for (std::size_t i = 0; i < m.num_generators(); ++i)
        imgs.push_back(m.generator(i));
    return FqmHom(m, m, imgs);
}

FqmHom FqmHom::negation(const Fqm &m) {
    std::vector<FqmElement> imgs;
    for (std::size_t i = 0; i < m.num_generators(); ++i)
        imgs.push_back(m.neg(m.generator(i)));
    return FqmHom(m, m, imgs);
}

FqmElement FqmHom::apply(const FqmElement &x) const {
    FqmElement out = target_.zero();
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (x[i] != 0)
            out = target_.add(out, target_.scale(x[i], images_[i]));
    return out;
}

FqmHom FqmHom::compose(const FqmHom &other) const {
    if (!(other.target_ == source_))
        throw InputError("composition of incompatible homomorphisms");
    std::vector<FqmElement> imgs;
    for (const auto &y : other.images_)
        imgs.push_back(apply(y));
    return FqmHom(other.source_, target_, imgs);
}

bool FqmHom::is_injective(std::int64_t bound) const {
    const std::int64_t n = source_.order_bounded(bound);
    for (std::int64_t i = 1; i < n; ++i)
        if (target_.is_zero(apply(source_.element_at(i))))
            return false;
    return true;
}

bool FqmHom::scales_form(int sign) const {
    const std::size_t r = images_.size();
    for (std::size_t i = 0; i < r; ++i) {
        if (target_.q(images_[i]) != mod_q(Rational(sign) * source_.q_gen()[i], kTwo))
            return false;
        for (std::size_t j = i + 1; j < r; ++j)
            if (target_.b(images_[i], images_[j]) !=
                mod_q(Rational(sign) * source_.b_gen()(i, j), kOne))
                return false;
    }
    return true;
}

bool FqmHom::preserves_form() const { return scales_form(1); }
bool FqmHom::negates_form() const { return scales_form(-1); }

bool FqmHom::is_automorphism(std::int64_t bound) const {
    return source_ == target_ && is_injective(bound);
}

// ---------------------------------------------------------------------------

Subgroup::Subgroup(Fqm ambient, std::vector<FqmElement> generators, std::int64_t bound)
    : ambient_(std::move(ambient)), generators_(std::move(generators)) {
    const std::int64_t n = ambient_.order_bounded(bound);
    member_.assign(static_cast<std::size_t>(n), 0);
    for (auto &g : generators_) {
        if (g.size() != ambient_.num_generators())
            throw InputError("subgroup generator has the wrong number of coordinates");
        g = ambient_.reduce(g);
    }
    std::deque<FqmElement> queue{ambient_.zero()};
    member_[0] = 1;
    while (!queue.empty()) {
        FqmElement x = queue.front();
        queue.pop_front();
        for (const auto &g : generators_) {
            FqmElement y = ambient_.add(x, g);
            const auto idx = static_cast<std::size_t>(ambient_.index_of(y));
            if (!member_[idx]) {
                member_[idx] = 1;
                queue.push_back(std::move(y));
            }
        }
    }
    for (std::int64_t i = 0; i < n; ++i)
        if (member_[static_cast<std::size_t>(i)])
            elements_.push_back(ambient_.element_at(i));
}

bool Subgroup::contains(const FqmElement &x) const {
    if (!ambient_.contains(x))
        return false;
    return member_[static_cast<std::size_t>(ambient_.index_of(x))] != 0;
}

Subgroup orthogonal_subgroup(const Subgroup &s, std::int64_t bound) {
    const Fqm &m = s.ambient();
    std::vector<FqmElement> perp;
    for (const auto &x : m.elements(bound)) {
        bool ok = true;
        for (const auto &g : s.generators())
            if (m.b(x, g) != 0) {
                ok = false;
                break;
            }
        if (ok)
            perp.push_back(x);
    }
    return Subgroup(m, perp, bound);
}

Subgroup image(const FqmHom &h, std::int64_t bound) {
    return Subgroup(h.target(), h.images(), bound);
}

FqmElement preimage(const FqmHom &h, const FqmElement &y, std::int64_t bound) {
    const Fqm &src = h.source();
    const std::int64_t n = src.order_bounded(bound);
    const FqmElement target = h.target().reduce(y);
    for (std::int64_t i = 0; i < n; ++i) {
        FqmElement x = src.element_at(i);
        if (h.apply(x) == target)
            return x;
    }
    throw InputError("preimage requested for an element outside the image");
}

SubgroupForm restrict_form(const Subgroup &s) {
    const Fqm &m = s.ambient();
    const std::size_t r = m.num_generators();
    // Λ = span(generators) + ⊕ dᵢZeᵢ ⊂ Zʳ; H ≅ Λ / ⊕ dᵢZeᵢ.
    IntMatrix gens(s.generators().size() + r, r);
    for (std::size_t k = 0; k < s.generators().size(); ++k)
        for (std::size_t j = 0; j < r; ++j)
            gens(k, j) = s.generators()[k][j];
    for (std::size_t i = 0; i < r; ++i)
        gens(s.generators().size() + i, i) = m.orders()[i];
    const IntMatrix basis = row_basis(gens);
    IntVector d(r);
    for (std::size_t i = 0; i < r; ++i)
        d[i] = m.orders()[i];
    const RatMatrix basis_inv = inverse(to_rational(basis));
    const IntMatrix relations = to_integer(to_rational(diagonal(d)) * basis_inv);
    const SmithForm f = smith_normal_form(relations);
    const IntMatrix new_gens = to_integer(inverse(to_rational(f.V)) * to_rational(basis));

    std::vector<std::int64_t> orders;
    std::vector<FqmElement> lifts;
    for (std::size_t j = 0; j < r; ++j) {
        if (f.S(j, j) == 1)
            continue;
        orders.push_back(f.S(j, j).get_si());
        FqmElement x(r);
        for (std::size_t c = 0; c < r; ++c) {
            Integer v = new_gens(j, c) % m.orders()[c];
            if (v < 0)
                v += m.orders()[c];
            x[c] = v.get_si();
        }
        lifts.push_back(x);
    }
    std::vector<Rational> q;
    RatMatrix b(lifts.size(), lifts.size());
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        q.push_back(m.q(lifts[i]));
        for (std::size_t j = 0; j < lifts.size(); ++j)
            b(i, j) = m.b(lifts[i], lifts[j]);
    }
    Fqm form(orders, q, b);
    return {form, FqmHom(form, m, lifts)};
}

// ---------------------------------------------------------------------------

namespace {

/// Backtracking over generator images. `visit` returns false to stop early.
void search_form_maps(const Fqm &a, const Fqm &b, int sign, std::int64_t bound,
                      const std::function<bool(const FqmHom &)> &visit) {
    const std::size_t r = a.num_generators();
    const auto all = b.elements(bound);
    a.order_bounded(bound);
    std::vector<Rational> qb(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        qb[i] = b.q(all[i]);

    std::vector<std::vector<std::size_t>> candidates(r);
    for (std::size_t i = 0; i < r; ++i) {
        const Rational want = mod_q(Rational(sign) * a.q_gen()[i], kTwo);
        for (std::size_t k = 0; k < all.size(); ++k)
            if (qb[k] == want && b.element_order(all[k]) == a.orders()[i])
                candidates[i].push_back(k);
    }

    std::vector<FqmElement> images(r);
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        if (stop)
            return;
        if (level == r) {
            FqmHom h(a, b, images);
            if (h.is_injective(bound) && !visit(h))
                stop = true;
            return;
        }
        for (std::size_t k : candidates[level]) {
            const FqmElement &x = all[k];
            bool ok = true;
            for (std::size_t j = 0; j < level; ++j)
                if (b.b(x, images[j]) != mod_q(Rational(sign) * a.b_gen()(level, j), kOne)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            images[level] = x;
            rec(level + 1);
            if (stop)
                return;
        }
    };
    rec(0);
}

} // namespace

std::vector<FqmHom> form_embeddings(const Fqm &a, const Fqm &b, int sign, std::int64_t bound) {
    if (a.order() > b.order())
        return {};
    std::vector<FqmHom> out;
    search_form_maps(a, b, sign, bound, [&](const FqmHom &h) {
        out.push_back(h);
        return true;
    });
    return out;
}

std::optional<FqmHom> fqm_isometry(const Fqm &a, const Fqm &b, std::int64_t bound) {
    if (a.order() != b.order())
        return std::nullopt;
    std::optional<FqmHom> found;
    search_form_maps(a, b, 1, bound, [&](const FqmHom &h) {
        found = h;
        return false;
    });
    return found;
}

std::vector<FqmHom> orthogonal_group_elements(const Fqm &m, std::int64_t bound) {
    return form_embeddings(m, m, 1, bound);
}

std::vector<FqmHom> closure(const std::vector<FqmHom> &gens, const Fqm &m, std::size_t bound) {
    std::set<FqmHom> seen;
    std::deque<FqmHom> queue;
    const FqmHom id = FqmHom::identity(m);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        FqmHom x = queue.front();
        queue.pop_front();
        for (const auto &g : gens) {
            FqmHom y = g.compose(x);
            if (seen.insert(y).second) {
                if (seen.size() > bound)
                    throw InputError("group closure exceeds the bound of " +
                                     std::to_string(bound) + " elements");
                queue.push_back(std::move(y));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

FqmGroup orthogonal_group(const Fqm &m, std::int64_t bound) {
    const auto elems = orthogonal_group_elements(m, bound);
    FqmGroup g;
    g.order = static_cast<long>(elems.size());
    std::set<FqmHom> generated{FqmHom::identity(m)};
    for (const auto &e : elems) {
        if (generated.count(e))
            continue;
        g.generators.push_back(e);
        auto c = closure(g.generators, m, elems.size() + 1);
        generated = std::set<FqmHom>(c.begin(), c.end());
    }
    return g;
}

bool k3sq_glue_admissible(const Fqm &dn, const Subgroup &image) {
    if (!(image.ambient() == dn))
        throw InputError("glue image is not a subgroup of the given discriminant form");
    const Rational three_halves(3, 2);
    for (const auto &x : dn.elements()) {
        if (image.contains(x))
            continue;
        bool orthogonal = true;
        for (const auto &y : image.generators())
            if (dn.b(x, y) != 0) {
                orthogonal = false;
                break;
            }
        if (orthogonal && dn.q(x) == three_halves)
            return true;
    }
    return false;
}

} // namespace k3lat
