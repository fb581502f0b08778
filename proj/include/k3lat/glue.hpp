#pragma once

// Overlattices glued along anti-embeddings of discriminant forms, and the
// isometry extension test.

#include "k3lat/fqm.hpp"
#include "k3lat/lattice.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace k3lat {

/// An anti-embedding γ: D_M → D_N.
struct GlueMap {
    FqmHom gamma;
    Lattice n;
    Fqm m_disc;
    std::optional<Lattice> m_gram;
};

/// Validates that γ is injective and negates the form, that γ starts at
/// `m_disc` and lands in D_N, and that D(m_gram) is isometric to `m_disc`
/// when the Gram matrix is given.
GlueMap make_glue_map(const Lattice &n, const FqmHom &gamma, std::optional<Lattice> m_gram = std::nullopt);

struct Overlattice {
    Lattice lattice;
    /// Rows: basis of the overlattice in (N ⊕ M) ⊗ Q coordinates, N first.
    RatMatrix basis;
    /// Index of N ⊕ M in the overlattice.
    Integer index;
};

/// Overlattice of N ⊕ M spanned by lifts of the pairs (y ∈ D_N, x ∈ D_M).
/// Throws InputError when a glue vector has a non-integral or odd square.
Overlattice overlattice_from_pairs(const Lattice &n, const Lattice &m,
                                   const std::vector<std::pair<FqmElement, FqmElement>> &pairs);

/// The graph of γ glued onto N ⊕ M.
Overlattice overlattice(const Lattice &n, const Lattice &m, const GlueMap &glue);

/// Φ on N ⊕ M expressed in overlattice coordinates, or nullopt when Φ does
/// not preserve the overlattice.
std::optional<IntMatrix> restrict_to_overlattice(const Overlattice &o, const IntMatrix &phi);

enum class ExtensionMode { Exact, Permissive };

struct ExtensionCheck {
    bool preserves_image = false; ///< condition 1
    bool extendable = false;      ///< conditions 1 and 2
    std::optional<FqmHom> witness; ///< γ⁻¹ ∘ f̄ ∘ γ when condition 1 holds
};

/// Exact mode needs `obar_m` (generators of the image of O(M) in O(D_M)).
/// Permissive mode ignores it and accepts any automorphism of D_M.
ExtensionCheck check_extendable(const Lattice &n, const IntMatrix &f, const GlueMap &glue,
                                ExtensionMode mode, const std::vector<FqmHom> &obar_m = {},
                                std::int64_t bound = kDefaultFqmBound);

/// Divisibility of v ∈ N inside the lattice glued along `image` ⊂ D_N.
Integer divisibility_in_glued(const Lattice &n, const IntVector &v, const Subgroup &image);
Integer divisibility_in_glued(const Lattice &n, const Discriminant &dn, const IntVector &v,
                              const Subgroup &image);

struct LiftSearch {
    std::optional<Isometry> lift;
    /// Smallest i ≥ 1 with gⁱ ∈ ⟨G⟩.
    long relative_order = 0;
    bool normalizes = false;
    /// The O(M) enumeration hit its bound; the answer may be suboptimal.
    bool truncated = false;
    /// A preimage with larger relative order than the first one found exists.
    bool improved = false;
};

/// Among g ∈ O(M) inducing `witness`, prefer those normalizing ⟨G⟩ and, among
/// them, the largest order relative to ⟨G⟩. `isos_m` is O(M) if already
/// known. Throws InvariantError when no preimage exists.
LiftSearch lift_order_search(const FqmHom &witness, const Lattice &m,
                             const std::vector<IntMatrix> &g_gens,
                             const std::optional<std::vector<IntMatrix>> &isos_m = std::nullopt,
                             std::size_t bound = 100'000);

/// L/(M ⊕ M^⊥) seen inside D_M ⊕ D_{M^⊥}.
struct GlueExtraction {
    SublatticeBasis m;
    SublatticeBasis n; ///< M^⊥
    Lattice m_lattice;
    Lattice n_lattice;
    Integer index;     ///< [L : M ⊕ M^⊥]
    /// Images of the basis of L, as (D_M, D_N) pairs.
    std::vector<std::pair<FqmElement, FqmElement>> pairs;
    Fqm dm;
    Fqm dn;
};

/// Throws InputError if `m` is not primitive or M, M^⊥ is odd.
GlueExtraction extract_glue(const Lattice &l, const IntMatrix &m_rows);

/// Checks that the glue group injects into both discriminant groups and that
/// q_N(y) = −q_M(x) on every element of it.
bool glue_is_graph_of_anti_isometry(const GlueExtraction &g, std::int64_t bound = kDefaultFqmBound);

} // namespace k3lat
