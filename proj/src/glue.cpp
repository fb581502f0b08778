#include "k3lat/glue.hpp"

#include "k3lat/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace k3lat {

namespace {

Rational rational_det(const RatMatrix &a) {
    const std::size_t n = a.rows();
    RatMatrix m = a;
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0)
                continue;
            const Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j)
                m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

RatVector concat(const RatVector &a, const RatVector &b) {
    RatVector out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

IntMatrix isometry_inverse(const Lattice &l, const IntMatrix &g) {
    // g⁻¹ = G⁻¹ gᵀ G for an isometry.
    return to_integer(inverse(to_rational(l.gram())) * to_rational(g.transpose() * l.gram()));
}

} // namespace

GlueMap make_glue_map(const Lattice &n, const FqmHom &gamma, std::optional<Lattice> m_gram) {
    const Fqm dn = discriminant_group(n);
    if (!(gamma.target() == dn))
        throw InputError("glue map does not land in the discriminant form of N");
    if (!gamma.is_injective())
        throw InputError("glue map is not injective");
    if (!gamma.negates_form())
        throw InputError("glue map does not negate the quadratic form");
    if (m_gram && !fqm_isometry(discriminant_group(*m_gram), gamma.source()))
        throw InputError("declared discriminant form of M does not match its Gram matrix");
    return {gamma, n, gamma.source(), std::move(m_gram)};
}

Overlattice overlattice_from_pairs(const Lattice &n, const Lattice &m,
                                   const std::vector<std::pair<FqmElement, FqmElement>> &pairs) {
    const Discriminant dn = discriminant(n);
    const Discriminant dm = discriminant(m);
    const std::size_t r = n.rank() + m.rank();
    std::vector<RatVector> gens;
    for (std::size_t i = 0; i < r; ++i) {
        RatVector e(r);
        e[i] = 1;
        gens.push_back(e);
    }
    for (const auto &[y, x] : pairs)
        gens.push_back(concat(dn.lift(y), dm.lift(x)));

    Integer denom = 1;
    for (const auto &g : gens)
        for (const auto &c : g)
            denom = lcm(denom, Integer(c.get_den()));
    IntMatrix scaled(gens.size(), r);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < r; ++j)
            scaled(i, j) = Rational(gens[i][j] * denom).get_num();
    const IntMatrix hb = row_basis(scaled);
    if (hb.rows() != r)
        throw InvariantError("overlattice basis has the wrong rank");
    RatMatrix basis = to_rational(hb);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            basis(i, j) /= denom;

    const RatMatrix gsum = to_rational(k3lat::direct_sum(n.gram(), m.gram()));
    const RatMatrix g = basis * gsum * basis.transpose();
    if (!is_integral(g))
        throw InputError("glue vectors have non-integral pairings");
    IntMatrix gi = to_integer(g);
    Lattice lat(gi);
    if (!lat.is_even())
        throw InputError("glue vectors have odd square");
    const Rational idx = 1 / abs(rational_det(basis));
    if (idx.get_den() != 1)
        throw InvariantError("overlattice index is not an integer");
    return {lat, basis, idx.get_num()};
}

Overlattice overlattice(const Lattice &n, const Lattice &m, const GlueMap &glue) {
    const Fqm dm = discriminant_group(m);
    std::vector<std::pair<FqmElement, FqmElement>> pairs;
    if (dm == glue.m_disc) {
        for (std::size_t i = 0; i < dm.num_generators(); ++i)
            pairs.push_back({glue.gamma.apply(dm.generator(i)), dm.generator(i)});
    } else {
        const auto phi = fqm_isometry(dm, glue.m_disc);
        if (!phi)
            throw InputError("discriminant form of M does not match the glue map");
        for (std::size_t i = 0; i < dm.num_generators(); ++i)
            pairs.push_back({glue.gamma.apply(phi->apply(dm.generator(i))), dm.generator(i)});
    }
    return overlattice_from_pairs(n, m, pairs);
}

std::optional<IntMatrix> restrict_to_overlattice(const Overlattice &o, const IntMatrix &phi) {
    const RatMatrix bt = o.basis.transpose();
    const RatMatrix sigma = inverse(bt) * to_rational(phi) * bt;
    if (!is_integral(sigma))
        return std::nullopt;
    return to_integer(sigma);
}

ExtensionCheck check_extendable(const Lattice &n, const IntMatrix &f, const GlueMap &glue,
                                ExtensionMode mode, const std::vector<FqmHom> &obar_m,
                                std::int64_t bound) {
    const Discriminant dn = discriminant(n);
    const FqmHom fbar = induced_map(n, dn, f);
    const Subgroup img = image(glue.gamma, bound);
    ExtensionCheck out;
    std::vector<FqmElement> w;
    for (std::size_t i = 0; i < glue.m_disc.num_generators(); ++i) {
        const FqmElement y = fbar.apply(glue.gamma.apply(glue.m_disc.generator(i)));
        if (!img.contains(y))
            return out;
        w.push_back(preimage(glue.gamma, y, bound));
    }
    out.preserves_image = true;
    out.witness = FqmHom(glue.m_disc, glue.m_disc, std::move(w));
    if (mode == ExtensionMode::Permissive) {
        out.extendable = out.witness->is_automorphism(bound) && out.witness->preserves_form();
        return out;
    }
    for (const auto &o : obar_m)
        if (!(o.source() == glue.m_disc) || !o.is_automorphism(bound) || !o.preserves_form())
            throw InputError("supplied image of O(M) contains a non-automorphism of D_M");
    const auto group = closure(obar_m, glue.m_disc, static_cast<std::size_t>(bound));
    out.extendable = std::find(group.begin(), group.end(), *out.witness) != group.end();
    return out;
}

Integer divisibility_in_glued(const Lattice &n, const Discriminant &dn, const IntVector &v,
                              const Subgroup &image) {
    if (v.size() != n.rank())
        throw InputError("vector has the wrong length");
    if (is_zero(v))
        throw InputError("divisibility of the zero vector");
    if (!(image.ambient() == dn.form))
        throw InputError("glue image is not a subgroup of D_N");
    Integer g = divisibility(n, v);
    const RatVector gv = mat_vec(to_rational(n.gram()), RatVector(v.begin(), v.end()));
    for (const auto &y : image.generators()) {
        const RatVector w = dn.lift(y);
        Rational s = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            s += gv[i] * w[i];
        if (s.get_den() != 1)
            throw InvariantError("vector of N pairs non-integrally with N^v");
        g = gcd(g, Integer(s.get_num()));
    }
    return g;
}

Integer divisibility_in_glued(const Lattice &n, const IntVector &v, const Subgroup &image) {
    return divisibility_in_glued(n, discriminant(n), v, image);
}

LiftSearch lift_order_search(const FqmHom &witness, const Lattice &m,
                             const std::vector<IntMatrix> &g_gens,
                             const std::optional<std::vector<IntMatrix>> &isos_m, std::size_t bound) {
    LiftSearch out;
    std::vector<IntMatrix> isos;
    if (isos_m) {
        isos = *isos_m;
    } else {
        const AutomorphismGroup grp = automorphism_group(m);
        if (grp.order <= bound) {
            std::vector<IntMatrix> gens;
            for (const auto &g : grp.generators)
                gens.push_back(g.matrix);
            isos = group_elements(gens, m.rank(), bound);
        } else {
            // Breadth-first prefix of the group, capped at `bound` elements.
            out.truncated = true;
            std::set<IntMatrix> seen{IntMatrix::identity(m.rank())};
            std::deque<IntMatrix> todo{IntMatrix::identity(m.rank())};
            while (!todo.empty() && seen.size() < bound) {
                IntMatrix x = todo.front();
                todo.pop_front();
                for (const auto &g : grp.generators) {
                    IntMatrix y = g.matrix * x;
                    if (seen.size() < bound && seen.insert(y).second)
                        todo.push_back(std::move(y));
                }
            }
            isos.assign(seen.begin(), seen.end());
        }
    }
    const auto gset_vec = group_elements(g_gens, m.rank(), bound);
    const std::set<IntMatrix> gset(gset_vec.begin(), gset_vec.end());
    const Discriminant dm = discriminant(m);

    struct Candidate {
        IntMatrix g;
        long rel;
        bool normalizes;
    };
    std::vector<Candidate> preimages;
    for (const auto &g : isos) {
        if (!(induced_map(m, dm, g).images() == witness.images()))
            continue;
        const IntMatrix ginv = isometry_inverse(m, g);
        bool norm = true;
        for (const auto &h : g_gens)
            if (!gset.count(g * h * ginv)) {
                norm = false;
                break;
            }
        const auto ord = matrix_order(g);
        if (!ord)
            throw InvariantError("isometry of a definite lattice has infinite order");
        long rel = *ord;
        IntMatrix p = g;
        for (long i = 1; i <= *ord; ++i) {
            if (gset.count(p)) {
                rel = i;
                break;
            }
            p = p * g;
        }
        preimages.push_back({g, rel, norm});
    }
    if (preimages.empty()) {
        if (out.truncated)
            return out;
        throw InvariantError("no isometry of M induces the extension witness");
    }
    const Candidate *best = &preimages.front();
    for (const auto &c : preimages)
        if (std::pair(c.normalizes, c.rel) > std::pair(best->normalizes, best->rel))
            best = &c;
    out.lift = Isometry{best->g, matrix_order(best->g)};
    out.relative_order = best->rel;
    out.normalizes = best->normalizes;
    out.improved = best->rel > preimages.front().rel;
    return out;
}

GlueExtraction extract_glue(const Lattice &l, const IntMatrix &m_rows) {
    if (m_rows.cols() != l.rank())
        throw InputError("sublattice rows have the wrong length");
    const IntVector inv = invariant_factors(m_rows);
    for (const auto &d : inv)
        if (d != 1)
            throw InputError("sublattice is not primitive or its rows are dependent");
    SublatticeBasis m{l, m_rows, true};
    SublatticeBasis n = orthogonal_complement(m);
    Lattice ml = m.induced();
    Lattice nl = n.induced();
    const Discriminant dm = discriminant(ml);
    const Discriminant dn = discriminant(nl);

    const std::size_t k = m.rank();
    const std::size_t r = l.rank();
    IntMatrix c(r, r);
    for (std::size_t i = 0; i < k; ++i)
        c.set_row(i, m.rows.row(i));
    for (std::size_t i = 0; i < n.rank(); ++i)
        c.set_row(k + i, n.rows.row(i));
    const RatMatrix cinv = inverse(to_rational(c));
    GlueExtraction out{m, n, ml, nl, abs(determinant(c)), {}, dm.form, dn.form};
    for (std::size_t i = 0; i < r; ++i) {
        const RatVector coeff = cinv.row(i);
        const RatVector alpha(coeff.begin(), coeff.begin() + static_cast<std::ptrdiff_t>(k));
        const RatVector beta(coeff.begin() + static_cast<std::ptrdiff_t>(k), coeff.end());
        out.pairs.push_back({dm.project(alpha), dn.project(beta)});
    }
    return out;
}

bool glue_is_graph_of_anti_isometry(const GlueExtraction &g, std::int64_t bound) {
    // Closure of the pairs inside D_M ⊕ D_N, without enumerating the sum.
    using Pair = std::pair<FqmElement, FqmElement>;
    std::set<Pair> seen{{g.dm.zero(), g.dn.zero()}};
    std::vector<Pair> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<Pair> next;
        for (const auto &[x, y] : frontier)
            for (const auto &[gx, gy] : g.pairs) {
                Pair s{g.dm.add(x, gx), g.dn.add(y, gy)};
                if (seen.insert(s).second) {
                    if (static_cast<std::int64_t>(seen.size()) > bound)
                        throw InputError("glue group exceeds the enumeration bound " + std::to_string(bound));
                    next.push_back(std::move(s));
                }
            }
        frontier = std::move(next);
    }
    if (Integer(static_cast<long>(seen.size())) != g.index)
        return false;
    std::set<FqmElement> left;
    std::set<FqmElement> right;
    for (const auto &[x, y] : seen) {
        if (mod_q(g.dm.q(x) + g.dn.q(y), 2) != 0)
            return false;
        left.insert(x);
        right.insert(y);
    }
    return left.size() == seen.size() && right.size() == seen.size();
}

} // namespace k3lat
