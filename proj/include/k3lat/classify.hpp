#pragma once

// Good isometries of rank-3 invariant lattices and assembly of
// classification rows.

#include "k3lat/fqm.hpp"
#include "k3lat/glue.hpp"
#include "k3lat/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3lat {

/// (order, trace) ∈ {(2,−1), (3,0), (4,1), (6,2)}.
bool is_good_pair(long order, const Integer &trace);

/// Every f ∈ O(N) with a good (order, trace) pair, sorted by matrix.
/// N must be rank 3 and positive definite.
std::vector<Isometry> good_isometries(const Lattice &n);

struct PolarizationT {
    IntVector h;       ///< primitive generator of the fixed line, h² > 0
    IntMatrix t_basis; ///< 2 rows spanning h^⊥ in N
    IntMatrix t_gram;  ///< normalized Gram of h^⊥
};

/// Throws InputError when the fixed sublattice of f is not of rank 1.
PolarizationT polarization_and_transcendental(const Lattice &n, const Isometry &f);

/// Reduced positive definite binary form: |2b| ≤ a ≤ c and b ≥ 0.
IntMatrix normalize_binary_form(const IntMatrix &g);

enum class K3Flag { Possible, Excluded, Unknown };
std::string to_string(K3Flag f);
K3Flag parse_k3_flag(const std::string &s);

/// Excluded iff one of t₁, t₂, t₁+t₂ has divisibility 2 in the glued lattice.
K3Flag k3_birational_flag(const Lattice &n, const IntMatrix &t_basis, const Subgroup &image);

enum class Mode { Exact, Permissive };
std::string to_string(Mode m);

struct CoinvariantData {
    Fqm disc;
    std::optional<Lattice> gram;
    /// Generators of the image of O(M) in O(D_M); required for exact mode.
    std::optional<std::vector<FqmHom>> obar;
    /// Generators of the symplectic group acting on `gram`; with `gram` they
    /// enable the lift search recorded in ClassificationRow::lift_improved.
    std::optional<std::vector<IntMatrix>> g_gens;
};

struct ClassificationRow {
    std::string group_name;
    Integer h_sq;
    Integer h_div;
    long m = 0;
    IntMatrix t_gram;
    K3Flag k3 = K3Flag::Unknown;
    IntMatrix invariant_gram;
    Mode mode = Mode::Permissive;
    /// Whether some lift of the witness to O(M) has larger order relative to
    /// G than the first one found; unset when the search could not run.
    std::optional<bool> lift_improved;

    friend bool operator==(const ClassificationRow &, const ClassificationRow &) = default;
};

/// Sort key: (h², div, m, T entries, invariant Gram, flag, mode).
bool row_less(const ClassificationRow &a, const ClassificationRow &b);

struct ClassifyOptions {
    Mode mode = Mode::Permissive;
    unsigned jobs = 1;
    std::int64_t bound = kDefaultFqmBound;
};

/// Runs the N × γ × f pipeline for one group. Exact mode without `obar`
/// data falls back to permissive mode for the group.
std::vector<ClassificationRow> classify(const std::vector<Lattice> &invariant_lattices,
                                        const CoinvariantData &m_data, const std::string &group_name,
                                        const ClassifyOptions &options = {});

/// |G| = |G̃|·m.
Integer max_group_order_check(const Integer &symplectic_order, long m);

/// For each x ∈ D_N of order 2 with q(x) = 3/2, the form −q on x^⊥; these are
/// the discriminant forms a rank-20 coinvariant lattice glued to N could
/// have. Deduplicated up to isometry.
std::vector<Fqm> coinvariant_candidates(const Lattice &n, std::int64_t bound = kDefaultFqmBound);

} // namespace k3lat
