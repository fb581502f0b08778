#include "k3lat/enumerate.hpp"

#include "k3lat/glue.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace k3lat {

namespace {

// Quadratic-form decomposition Q(x) = Σ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)².
RatMatrix fincke_pohst_form(const IntMatrix &gram) {
    const std::size_t n = gram.rows();
    RatMatrix q = to_rational(gram);
    for (std::size_t i = 0; i < n; ++i) {
        if (q(i, i) <= 0)
            throw InputError("short vector enumeration needs a positive definite Gram matrix");
        for (std::size_t j = i + 1; j < n; ++j) {
            q(j, i) = q(i, j);
            q(i, j) /= q(i, i);
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l)
                q(k, l) -= q(k, i) * q(i, l);
    }
    return q;
}

void require_definite(const Lattice &l, const char *what) {
    if (!l.is_positive_definite() && !l.is_negative_definite())
        throw InputError(std::string(what) + " requires a definite lattice");
}

// Positive definite Gram matrix of a definite lattice.
IntMatrix positive_gram(const Lattice &l) {
    return l.is_positive_definite() ? l.gram() : IntMatrix(-l.gram());
}

IntMatrix inverse_transpose(const IntMatrix &b) { return to_integer(inverse(to_rational(b))).transpose(); }

struct IsometrySearch {
    IntMatrix gs; // source Gram
    IntMatrix gt; // target Gram
    std::vector<std::vector<IntVector>> cand;
    std::vector<std::vector<IntVector>> cand_g; // gt · candidate

    // Columns chosen so far and their gt-images.
    std::vector<const IntVector *> cols;
    std::vector<const IntVector *> gcols;

    bool compatible(std::size_t i, std::size_t c) const {
        const IntVector &gx = cand_g[i][c];
        for (std::size_t j = 0; j < i; ++j)
            if (dot(*cols[j], gx) != gs(j, i))
                return false;
        return true;
    }

    // Fills columns from `level` on; calls `found` on complete assignments
    // until it returns true.
    bool run(std::size_t level, const std::function<bool(const IntMatrix &)> &found) {
        const std::size_t n = gs.rows();
        if (level == n) {
            IntMatrix q(n, n);
            for (std::size_t j = 0; j < n; ++j)
                q.set_col(j, *cols[j]);
            return found(q);
        }
        for (std::size_t c = 0; c < cand[level].size(); ++c) {
            if (!compatible(level, c))
                continue;
            cols[level] = &cand[level][c];
            gcols[level] = &cand_g[level][c];
            if (run(level + 1, found))
                return true;
        }
        return false;
    }
};

IsometrySearch make_search(const IntMatrix &gs, const IntMatrix &gt) {
    const std::size_t n = gs.rows();
    IsometrySearch s{gs, gt, {}, {}, std::vector<const IntVector *>(n), std::vector<const IntVector *>(n)};
    Integer maxd = 0;
    for (std::size_t i = 0; i < n; ++i)
        maxd = std::max(maxd, gs(i, i));
    std::map<Integer, std::vector<IntVector>> by_norm;
    for_each_short_vector(gt, maxd, [&](const IntVector &v, const Integer &nv) {
        by_norm[nv].push_back(v);
        return true;
    });
    for (std::size_t i = 0; i < n; ++i) {
        auto &list = by_norm[gs(i, i)];
        std::sort(list.begin(), list.end());
        s.cand.push_back(list);
        std::vector<IntVector> g;
        for (const auto &v : list)
            g.push_back(mat_vec(gt, v));
        s.cand_g.push_back(std::move(g));
    }
    return s;
}

// Restricts level i to exactly one vector (a prescribed image).
void pin(IsometrySearch &s, std::size_t i, const IntVector &x) {
    s.cand[i] = {x};
    s.cand_g[i] = {mat_vec(s.gt, x)};
}

std::set<IntVector> orbit(const IntVector &v, const std::vector<IntMatrix> &gens) {
    std::set<IntVector> seen{v};
    std::deque<IntVector> todo{v};
    while (!todo.empty()) {
        IntVector x = todo.front();
        todo.pop_front();
        for (const auto &g : gens) {
            IntVector y = mat_vec(g, x);
            if (seen.insert(y).second)
                todo.push_back(std::move(y));
        }
    }
    return seen;
}

} // namespace

void for_each_short_vector(const IntMatrix &gram, const Integer &bound,
                           const std::function<bool(const IntVector &, const Integer &)> &visit) {
    const std::size_t n = gram.rows();
    if (!gram.is_symmetric())
        throw InputError("Gram matrix fails the symmetry check");
    if (n == 0 || bound <= 0)
        return;
    const RatMatrix q = fincke_pohst_form(gram);
    IntVector x(n);
    bool stop = false;

    // remaining = bound − Σ_{j>i} contributions.
    std::function<void(std::size_t, const Rational &)> rec = [&](std::size_t i, const Rational &remaining) {
        Rational c = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (x[j] != 0)
                c += q(i, j) * x[j];
        const Integer s = isqrt_floor(remaining / q(i, i));
        const Integer lo = ceil_q(-c - s - 1);
        const Integer hi = floor_q(-c + s + 1);
        for (Integer xi = lo; xi <= hi && !stop; ++xi) {
            const Rational t = xi + c;
            const Rational part = q(i, i) * t * t;
            if (part > remaining)
                continue;
            x[i] = xi;
            if (i == 0) {
                if (!is_zero(x)) {
                    const Integer nv = bilinear(gram, x, x);
                    if (!visit(x, nv))
                        stop = true;
                }
            } else {
                rec(i - 1, remaining - part);
            }
        }
        x[i] = 0;
    };
    rec(n - 1, Rational(bound));
}

std::vector<IntVector> short_vectors(const IntMatrix &gram, const Integer &bound) {
    std::vector<IntVector> out;
    for_each_short_vector(gram, bound, [&](const IntVector &v, const Integer &) {
        out.push_back(v);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntVector> vectors_of_norm(const Lattice &l, const Integer &n) {
    if (l.rank() == 0)
        return {};
    require_definite(l, "vectors_of_norm");
    const bool pos = l.is_positive_definite();
    if ((pos && n <= 0) || (!pos && n >= 0))
        throw InputError("norm sign does not match the definiteness of the lattice");
    const IntMatrix g = positive_gram(l);
    const Integer target = pos ? n : Integer(-n);
    std::vector<IntVector> out;
    for_each_short_vector(g, target, [&](const IntVector &v, const Integer &nv) {
        if (nv == target)
            out.push_back(v);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

AutomorphismGroup automorphism_group(const Lattice &l) {
    const std::size_t n = l.rank();
    if (n == 0)
        return {{}, 1};
    require_definite(l, "automorphism_group");
    const LllResult red = lll_reduce(positive_gram(l));
    const IntMatrix &g = red.gram;

    std::vector<IntMatrix> gens; // reduced coordinates
    Integer order = 1;
    for (std::size_t k = n; k-- > 0;) {
        IsometrySearch base = make_search(g, g);
        for (std::size_t j = 0; j < k; ++j) {
            IntVector e(n);
            e[j] = 1;
            pin(base, j, e);
        }
        IntVector ek(n);
        ek[k] = 1;
        std::set<IntVector> orb = orbit(ek, gens);
        std::set<IntVector> rejected;
        const std::vector<IntVector> candidates = base.cand[k];
        for (const auto &x : candidates) {
            if (orb.count(x) || rejected.count(x))
                continue;
            bool fixes = true;
            const IntVector gx = mat_vec(g, x);
            for (std::size_t j = 0; j < k && fixes; ++j)
                fixes = gx[j] == g(j, k);
            if (!fixes) {
                rejected.insert(x);
                continue;
            }
            IsometrySearch s = base;
            pin(s, k, x);
            std::optional<IntMatrix> found;
            s.run(0, [&](const IntMatrix &q) {
                found = q;
                return true;
            });
            if (found) {
                gens.push_back(*found);
                orb = orbit(ek, gens);
            } else {
                rejected.insert(x);
            }
        }
        order *= static_cast<unsigned long>(orb.size());
    }

    // Back to the original coordinates: Q = Bᵀ Q' B^{-T}.
    const IntMatrix bt = red.basis.transpose();
    const IntMatrix bit = inverse_transpose(red.basis);
    AutomorphismGroup out;
    out.order = order;
    for (const auto &q : gens) {
        IntMatrix m = bt * q * bit;
        if (!is_isometry_of(l, m))
            throw InvariantError("automorphism search produced a non-isometry");
        out.generators.push_back({m, matrix_order(m)});
    }
    return out;
}

std::vector<IntMatrix> group_elements(const std::vector<IntMatrix> &gens, std::size_t n,
                                      std::size_t bound) {
    std::set<IntMatrix> seen{IntMatrix::identity(n)};
    std::deque<IntMatrix> todo{IntMatrix::identity(n)};
    while (!todo.empty()) {
        IntMatrix x = todo.front();
        todo.pop_front();
        for (const auto &g : gens) {
            IntMatrix y = g * x;
            if (seen.insert(y).second) {
                if (seen.size() > bound)
                    throw InputError("group has more than " + std::to_string(bound) + " elements");
                todo.push_back(std::move(y));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<IntMatrix> automorphism_elements(const Lattice &l, std::size_t bound) {
    const AutomorphismGroup grp = automorphism_group(l);
    if (grp.order > bound)
        throw InputError("O(L) has " + grp.order.get_str() + " elements, above the bound");
    std::vector<IntMatrix> gens;
    for (const auto &g : grp.generators)
        gens.push_back(g.matrix);
    auto elems = group_elements(gens, l.rank(), bound);
    if (Integer(static_cast<unsigned long>(elems.size())) != grp.order)
        throw InvariantError("group closure disagrees with the stabilizer-chain order");
    return elems;
}

std::optional<Isometry> is_isometric(const Lattice &l1, const Lattice &l2) {
    if (l1.rank() != l2.rank())
        throw InputError("is_isometric: rank mismatch");
    const std::size_t n = l1.rank();
    if (n == 0)
        return Isometry::identity(0);
    require_definite(l1, "is_isometric");
    require_definite(l2, "is_isometric");
    if (l1.det() != l2.det() || l1.is_positive_definite() != l2.is_positive_definite())
        return std::nullopt;
    const LllResult r1 = lll_reduce(positive_gram(l1));
    const LllResult r2 = lll_reduce(positive_gram(l2));

    // Norm-count fingerprint up to the largest reduced diagonal entry.
    Integer maxd = 0;
    for (std::size_t i = 0; i < n; ++i)
        maxd = std::max({maxd, r1.gram(i, i), r2.gram(i, i)});
    auto counts = [&](const IntMatrix &g) {
        std::map<Integer, long> c;
        for_each_short_vector(g, maxd, [&](const IntVector &, const Integer &nv) {
            ++c[nv];
            return true;
        });
        return c;
    };
    if (counts(r1.gram) != counts(r2.gram))
        return std::nullopt;

    IsometrySearch s = make_search(r1.gram, r2.gram);
    std::optional<IntMatrix> found;
    s.run(0, [&](const IntMatrix &q) {
        found = q;
        return true;
    });
    if (!found)
        return std::nullopt;
    const IntMatrix q = r2.basis.transpose() * *found * inverse_transpose(r1.basis);
    if (q.transpose() * l2.gram() * q != l1.gram())
        throw InvariantError("isometry search produced an invalid witness");
    return Isometry{q, std::nullopt};
}

bool wall_divisor_scan(const Lattice &m, const std::optional<Subgroup> &glue_image) {
    if (m.rank() == 0)
        return false;
    if (!m.is_negative_definite())
        throw InputError("wall_divisor_scan expects a negative definite lattice");
    if (!vectors_of_norm(m, -2).empty())
        return true;
    for (const auto &v : vectors_of_norm(m, -10)) {
        const Integer d = glue_image ? divisibility_in_glued(m, v, *glue_image) : divisibility(m, v);
        if (d == 2)
            return true;
    }
    return false;
}

} // namespace k3lat
