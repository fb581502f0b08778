#pragma once

// Integral lattices given by Gram matrices, and the discriminant-form bridge
// between lattices and finite quadratic modules.

#include "k3lat/exact.hpp"
#include "k3lat/fqm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3lat {

/// A nondegenerate symmetric integral Gram matrix. Rank 0 is allowed.
class Lattice {
  public:
    Lattice() = default;
    /// Throws InputError when the Gram matrix is not square, not symmetric,
    /// or degenerate.
    explicit Lattice(IntMatrix gram);

    const IntMatrix &gram() const { return gram_; }
    std::size_t rank() const { return gram_.rows(); }
    const Integer &det() const { return det_; }
    bool is_even() const;
    Signature signature() const { return k3lat::signature(gram_); }
    bool is_positive_definite() const;
    bool is_negative_definite() const;

    Integer inner(const IntVector &u, const IntVector &v) const { return bilinear(gram_, u, v); }
    Integer norm(const IntVector &v) const { return bilinear(gram_, v, v); }

    friend bool operator==(const Lattice &a, const Lattice &b) { return a.gram_ == b.gram_; }

  private:
    IntMatrix gram_;
    Integer det_ = 1;
};

/// Matrix Q acting on column coordinate vectors, v ↦ Q·v, with QᵀGQ = G.
struct Isometry {
    IntMatrix matrix;
    std::optional<long> order; ///< empty when unknown

    static Isometry identity(std::size_t n) { return {IntMatrix::identity(n), 1}; }
    static Isometry negation(std::size_t n) { return {-IntMatrix::identity(n), n == 0 ? 1 : 2}; }
};

bool is_isometry_of(const Lattice &l, const IntMatrix &q);
/// Multiplicative order of Q, or nullopt when Qᵏ ≠ 1 for all k ≤ limit.
std::optional<long> matrix_order(const IntMatrix &q, long limit = 10'000);
Isometry make_isometry(const Lattice &l, const IntMatrix &q);
Integer trace(const IntMatrix &q);
IntMatrix matrix_power(const IntMatrix &q, long k);

/// Rows are vectors of `ambient`; `primitive` reports saturation.
struct SublatticeBasis {
    Lattice ambient;
    IntMatrix rows;
    bool primitive = false;

    std::size_t rank() const { return rows.rows(); }
    /// Gram matrix of the rows under the ambient form.
    IntMatrix induced_gram() const;
    Lattice induced() const { return Lattice(induced_gram()); }
};

/// Saturates the rows (so the result is always primitive).
SublatticeBasis primitive_closure(const Lattice &ambient, const IntMatrix &rows);

/// Discriminant group with the data needed to move between L^∨ and D_L.
struct Discriminant {
    Fqm form;
    IntMatrix gram;
    /// Row i is a lift of generator i in L^∨, in lattice coordinates.
    RatMatrix lifts;
    /// D_L coefficient of v ∈ L^∨: take y = G·v, then (U·y)[index[i]] mod dᵢ.
    IntMatrix u;
    std::vector<std::size_t> index;

    FqmElement project(const RatVector &dual_vector) const;
    /// Canonical lift of an element into L^∨.
    RatVector lift(const FqmElement &x) const;
};

/// Throws InputError for odd or degenerate lattices.
Discriminant discriminant(const Lattice &l);
inline Fqm discriminant_group(const Lattice &l) { return discriminant(l).form; }

/// Induced action f̄ on D_L of an isometry f.
FqmHom induced_map(const Lattice &l, const Isometry &f);
FqmHom induced_map(const Lattice &l, const Discriminant &d, const IntMatrix &f);

/// gcd of v·b over the basis. Throws InputError for v = 0.
Integer divisibility(const Lattice &l, const IntVector &v);

/// Primitive basis of S^⊥ in the ambient lattice.
SublatticeBasis orthogonal_complement(const SublatticeBasis &s);

struct InvariantPair {
    SublatticeBasis invariant;
    SublatticeBasis coinvariant;
};

/// L^G = common fixed vectors of the generators; L_G = (L^G)^⊥.
InvariantPair invariant_and_coinvariant(const Lattice &l, const std::vector<Isometry> &gens);

/// ρ(v) = −v + (h·v)h. Requires h² = 2.
IntVector reflection_compose(const Lattice &l, const IntVector &h, const IntVector &v);
/// Matrix of the same reflection.
Isometry reflection(const Lattice &l, const IntVector &h);

namespace lattices {

Lattice hyperbolic_plane();
/// E8 with positive definite Cartan form; sign = −1 gives E8(−1).
Lattice e8(int sign = 1);
Lattice a2(int sign = 1);
/// ⟨k⟩. Throws for k = 0.
Lattice rank_one(const Integer &k);
/// L(m). Throws for m = 0.
Lattice rescale(const Lattice &l, const Integer &m);
Lattice direct_sum(const Lattice &a, const Lattice &b);
/// E8(−1)^⊕2 ⊕ U^⊕3.
Lattice k3();
/// E8(−1)^⊕2 ⊕ U^⊕3 ⊕ ⟨−2⟩.
Lattice k3_hilbert_square();
/// Even unimodular positive definite rank 24 with no roots.
Lattice leech();

/// Extended binary Golay code words, generated by a cyclic code of length 23
/// plus parity; exposed for testing the Leech construction.
std::vector<std::vector<int>> golay_code();

/// Names accepted by `by_name`: U, E8, E8(-1), A2, A2(-1), K3, K3[2], Leech,
/// <k>.
Lattice by_name(const std::string &name);

} // namespace lattices

} // namespace k3lat
