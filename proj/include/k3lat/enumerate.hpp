#pragma once

// Enumeration on definite lattices: short vectors, automorphism groups and
// isometry tests.

#include "k3lat/fqm.hpp"
#include "k3lat/lattice.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace k3lat {

/// Every nonzero v with v² ≤ bound, for a positive definite Gram matrix.
/// Sorted lexicographically.
std::vector<IntVector> short_vectors(const IntMatrix &gram, const Integer &bound);

/// Calls `visit(v, v²)` for every nonzero v with v² ≤ bound; stops early when
/// the callback returns false.
void for_each_short_vector(const IntMatrix &gram, const Integer &bound,
                           const std::function<bool(const IntVector &, const Integer &)> &visit);

/// All v with v² = n. Positive definite L needs n > 0, negative definite
/// n < 0. Sorted lexicographically and closed under negation.
std::vector<IntVector> vectors_of_norm(const Lattice &l, const Integer &n);

struct AutomorphismGroup {
    std::vector<Isometry> generators;
    Integer order;
};

/// O(L) for definite L via a stabilizer chain on the basis vectors.
AutomorphismGroup automorphism_group(const Lattice &l);

/// Every element of the group generated by `gens` (acting on n×n matrices).
/// Throws InputError when more than `bound` elements appear.
std::vector<IntMatrix> group_elements(const std::vector<IntMatrix> &gens, std::size_t n,
                                      std::size_t bound = 1'000'000);

/// Every element of O(L), sorted.
std::vector<IntMatrix> automorphism_elements(const Lattice &l, std::size_t bound = 1'000'000);

/// Q with Qᵀ·G₂·Q = G₁, or nullopt. Both lattices must be definite with the
/// same rank.
std::optional<Isometry> is_isometric(const Lattice &l1, const Lattice &l2);

/// True iff M contains a −2 vector, or a −10 vector of divisibility 2 in the
/// lattice glued along `glue_image` (divisibility in M when absent).
bool wall_divisor_scan(const Lattice &m, const std::optional<Subgroup> &glue_image = std::nullopt);

} // namespace k3lat
