#include "k3lat/classify.hpp"

#include "k3lat/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

namespace k3lat {

bool is_good_pair(long order, const Integer &trace) {
    return (order == 2 && trace == -1) || (order == 3 && trace == 0) || (order == 4 && trace == 1) ||
           (order == 6 && trace == 2);
}

std::vector<Isometry> good_isometries(const Lattice &n) {
    if (n.rank() != 3)
        throw InputError("good isometries need a rank 3 lattice");
    if (!n.is_positive_definite())
        throw InputError("good isometries need a positive definite lattice");
    std::vector<Isometry> out;
    for (const auto &g : automorphism_elements(n)) {
        const auto ord = matrix_order(g, 12);
        if (ord && is_good_pair(*ord, trace(g)))
            out.push_back({g, ord});
    }
    return out;
}

namespace {

// Gauss reduction; `p` collects the row operations so that P·G·Pᵀ is reduced.
IntMatrix reduce_binary(const IntMatrix &g, IntMatrix &p) {
    if (g.rows() != 2 || !g.is_symmetric())
        throw InputError("binary form must be a symmetric 2x2 matrix");
    Integer a = g(0, 0), b = g(0, 1), c = g(1, 1);
    if (a <= 0 || a * c - b * b <= 0)
        throw InputError("binary form is not positive definite");
    p = IntMatrix::identity(2);
    while (true) {
        if (a > c) {
            std::swap(a, c);
            p.swap_rows(0, 1);
        }
        // m = nearest integer to b/a
        Integer m = floor_q(make_rational(2 * b + a, 2 * a));
        if (m == 0)
            break;
        c = c - 2 * m * b + m * m * a;
        b = b - m * a;
        for (std::size_t j = 0; j < 2; ++j)
            p(1, j) -= m * p(0, j);
    }
    if (a > c) {
        std::swap(a, c);
        p.swap_rows(0, 1);
    }
    if (b < 0) {
        b = -b;
        for (std::size_t j = 0; j < 2; ++j)
            p(1, j) = -p(1, j);
    }
    return IntMatrix{{a, b}, {b, c}};
}

} // namespace

IntMatrix normalize_binary_form(const IntMatrix &g) {
    IntMatrix p;
    return reduce_binary(g, p);
}

PolarizationT polarization_and_transcendental(const Lattice &n, const Isometry &f) {
    const InvariantPair pair = invariant_and_coinvariant(n, {f});
    if (pair.invariant.rank() != 1)
        throw InputError("fixed sublattice of the isometry has rank " +
                         std::to_string(pair.invariant.rank()) + ", expected 1");
    IntVector h = pair.invariant.rows.row(0);
    for (const auto &x : h)
        if (x != 0) {
            if (x < 0)
                for (auto &y : h)
                    y = -y;
            break;
        }
    const SublatticeBasis hs{n, IntMatrix::from_rows({h}, n.rank()), true};
    const SublatticeBasis t = orthogonal_complement(hs);
    if (t.rank() != 2)
        throw InputError("orthogonal complement of the polarization is not of rank 2");
    IntMatrix p;
    const IntMatrix gram = reduce_binary(t.induced_gram(), p);
    return {h, p * t.rows, gram};
}

std::string to_string(K3Flag f) {
    switch (f) {
    case K3Flag::Possible:
        return "possible";
    case K3Flag::Excluded:
        return "excluded";
    case K3Flag::Unknown:
        return "unknown";
    }
    return "unknown";
}

K3Flag parse_k3_flag(const std::string &s) {
    if (s == "possible")
        return K3Flag::Possible;
    if (s == "excluded")
        return K3Flag::Excluded;
    if (s == "unknown")
        return K3Flag::Unknown;
    throw InputError("unknown K3 flag '" + s + "'");
}

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "permissive"; }

K3Flag k3_birational_flag(const Lattice &n, const IntMatrix &t_basis, const Subgroup &image) {
    if (t_basis.rows() != 2)
        throw InputError("transcendental basis must have two rows");
    const Discriminant dn = discriminant(n);
    const IntVector t1 = t_basis.row(0);
    const IntVector t2 = t_basis.row(1);
    IntVector t12(t1.size());
    for (std::size_t i = 0; i < t1.size(); ++i)
        t12[i] = t1[i] + t2[i];
    for (const IntVector &v : {t1, t2, t12})
        if (divisibility_in_glued(n, dn, v, image) == 2)
            return K3Flag::Excluded;
    return K3Flag::Unknown;
}

bool row_less(const ClassificationRow &a, const ClassificationRow &b) {
    auto key = [](const ClassificationRow &r) {
        return std::tie(r.h_sq, r.h_div, r.m, r.t_gram, r.invariant_gram);
    };
    if (key(a) != key(b))
        return key(a) < key(b);
    if (a.k3 != b.k3)
        return a.k3 < b.k3;
    if (a.mode != b.mode)
        return a.mode < b.mode;
    return a.group_name < b.group_name;
}

namespace {

void validate_m_data(const CoinvariantData &d, std::int64_t bound) {
    if (d.gram) {
        const Fqm dg = discriminant_group(*d.gram);
        if (!fqm_isometry(dg, d.disc, bound))
            throw InputError("inconsistent coinvariant data: declared discriminant form does "
                             "not match the discriminant of the Gram matrix");
    }
    if (d.obar)
        for (const auto &o : *d.obar)
            if (!(o.source() == d.disc) || !(o.target() == d.disc) || !o.is_automorphism(bound) ||
                !o.preserves_form())
                throw InputError("inconsistent coinvariant data: an O(M) image generator is not "
                                 "an isometry of the declared form");
}

constexpr std::size_t kLiftSearchBound = 100'000;

struct Task {
    std::size_t lattice;
    FqmHom gamma;
};

} // namespace

std::vector<ClassificationRow> classify(const std::vector<Lattice> &invariant_lattices,
                                        const CoinvariantData &m_data, const std::string &group_name,
                                        const ClassifyOptions &options) {
    validate_m_data(m_data, options.bound);
    const Mode mode = options.mode == Mode::Exact && m_data.obar ? Mode::Exact : Mode::Permissive;
    const ExtensionMode emode = mode == Mode::Exact ? ExtensionMode::Exact : ExtensionMode::Permissive;

    std::vector<Discriminant> discs;
    std::vector<std::vector<Isometry>> goods;
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < invariant_lattices.size(); ++i) {
        const Lattice &n = invariant_lattices[i];
        if (n.rank() != 3 || !n.is_positive_definite())
            throw InputError("invariant lattice " + std::to_string(i) +
                             " is not rank 3 positive definite");
        discs.push_back(discriminant(n));
        goods.push_back(good_isometries(n));
        for (auto &g : anti_embeddings(m_data.disc, discs.back().form, options.bound))
            tasks.push_back({i, std::move(g)});
    }

    // O(M), shared by every lift search.
    std::optional<std::vector<IntMatrix>> isos_m;
    if (m_data.gram && m_data.g_gens) {
        const AutomorphismGroup grp = automorphism_group(*m_data.gram);
        if (grp.order <= kLiftSearchBound) {
            std::vector<IntMatrix> gens;
            for (const auto &g : grp.generators)
                gens.push_back(g.matrix);
            isos_m = group_elements(gens, m_data.gram->rank(), kLiftSearchBound);
        }
    }

    std::vector<ClassificationRow> rows;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            while (true) {
                const std::size_t t = next++;
                if (t >= tasks.size())
                    return;
                const Task &task = tasks[t];
                const Lattice &n = invariant_lattices[task.lattice];
                const Subgroup img = image(task.gamma, options.bound);
                if (!k3sq_glue_admissible(discs[task.lattice].form, img))
                    continue;
                const GlueMap glue{task.gamma, n, m_data.disc, m_data.gram};
                std::vector<ClassificationRow> local;
                for (const auto &f : goods[task.lattice]) {
                    const ExtensionCheck ec = check_extendable(
                        n, f.matrix, glue, emode, m_data.obar.value_or(std::vector<FqmHom>{}),
                        options.bound);
                    if (!ec.extendable)
                        continue;
                    const PolarizationT pt = polarization_and_transcendental(n, f);
                    ClassificationRow row;
                    row.group_name = group_name;
                    row.h_sq = n.norm(pt.h);
                    row.h_div = divisibility_in_glued(n, discs[task.lattice], pt.h, img);
                    row.m = *f.order;
                    row.t_gram = pt.t_gram;
                    row.k3 = k3_birational_flag(n, pt.t_basis, img);
                    row.invariant_gram = n.gram();
                    row.mode = mode;
                    if (m_data.gram && m_data.g_gens && ec.witness) {
                        const LiftSearch ls = lift_order_search(*ec.witness, *m_data.gram,
                                                                *m_data.g_gens, isos_m,
                                                                kLiftSearchBound);
                        if (!ls.truncated)
                            row.lift_improved = ls.improved;
                    }
                    local.push_back(std::move(row));
                }
                std::lock_guard<std::mutex> lock(mu);
                rows.insert(rows.end(), local.begin(), local.end());
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!failure)
                failure = std::current_exception();
            next = tasks.size();
        }
    };
    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::sort(rows.begin(), rows.end(), row_less);
    std::vector<ClassificationRow> out;
    for (auto &r : rows) {
        bool merged = false;
        for (auto &kept : out) {
            if (kept.h_sq != r.h_sq || kept.h_div != r.h_div || kept.m != r.m ||
                kept.invariant_gram != r.invariant_gram)
                continue;
            if (!is_isometric(Lattice(kept.t_gram), Lattice(r.t_gram)))
                continue;
            // Several embeddings realize the row; only exclude K3 when all do.
            if (r.k3 == K3Flag::Unknown)
                kept.k3 = K3Flag::Unknown;
            if (r.lift_improved && (!kept.lift_improved || *r.lift_improved))
                kept.lift_improved = r.lift_improved;
            merged = true;
            break;
        }
        if (!merged)
            out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), row_less);
    return out;
}

Integer max_group_order_check(const Integer &symplectic_order, long m) {
    if (m < 1)
        throw InputError("m must be positive");
    return symplectic_order * m;
}

std::vector<Fqm> coinvariant_candidates(const Lattice &n, std::int64_t bound) {
    const Fqm dn = discriminant_group(n);
    const Rational three_halves(3, 2);
    std::vector<Fqm> out;
    for (const auto &x : dn.elements(bound)) {
        if (dn.element_order(x) != 2 || dn.q(x) != three_halves)
            continue;
        const Subgroup perp = orthogonal_subgroup(Subgroup(dn, {x}, bound), bound);
        const Fqm cand = restrict_form(perp).form.negated();
        bool seen = false;
        for (const auto &o : out)
            if (fqm_isometry(o, cand, bound)) {
                seen = true;
                break;
            }
        if (!seen)
            out.push_back(cand);
    }
    return out;
}

} // namespace k3lat
