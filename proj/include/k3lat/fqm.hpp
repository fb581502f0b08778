#pragma once

// Finite quadratic modules: a finite abelian group ⊕ Z/dᵢ with a Q/2Z-valued
// quadratic form q and its Q/Z-valued bilinear form b.

#include "k3lat/exact.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace k3lat {

/// Default cap on the number of group elements any exhaustive routine visits.
inline constexpr std::int64_t kDefaultFqmBound = 1'000'000;

using FqmElement = std::vector<std::int64_t>;

/// Quadratic values are kept in [0, 2), pairings in [0, 1).
class Fqm {
  public:
    Fqm() = default;
    /// orders[i] > 1; q[i] the square of generator i; b the full symmetric
    /// pairing matrix (b(i,i) must equal q[i] mod 1). Validates every
    /// invariant and throws InputError on violation.
    Fqm(std::vector<std::int64_t> orders, std::vector<Rational> q, RatMatrix b);

    std::size_t num_generators() const { return orders_.size(); }
    const std::vector<std::int64_t> &orders() const { return orders_; }
    const std::vector<Rational> &q_gen() const { return q_; }
    const RatMatrix &b_gen() const { return b_; }
    Integer order() const;
    /// |M| as a machine integer; throws when it exceeds `bound`.
    std::int64_t order_bounded(std::int64_t bound = kDefaultFqmBound) const;

    FqmElement zero() const { return FqmElement(orders_.size(), 0); }
    FqmElement generator(std::size_t i) const;
    FqmElement reduce(const FqmElement &x) const;
    FqmElement add(const FqmElement &x, const FqmElement &y) const;
    FqmElement neg(const FqmElement &x) const;
    FqmElement scale(std::int64_t k, const FqmElement &x) const;
    bool is_zero(const FqmElement &x) const;
    std::int64_t element_order(const FqmElement &x) const;
    bool contains(const FqmElement &x) const;

    Rational q(const FqmElement &x) const;
    Rational b(const FqmElement &x, const FqmElement &y) const;

    /// Mixed-radix index in [0, |M|) and its inverse; used for bitsets.
    std::int64_t index_of(const FqmElement &x) const;
    FqmElement element_at(std::int64_t index) const;
    /// All elements in index order.
    std::vector<FqmElement> elements(std::int64_t bound = kDefaultFqmBound) const;

    /// Same group, q ↦ −q, b ↦ −b.
    Fqm negated() const;

    friend bool operator==(const Fqm &, const Fqm &) = default;

  private:
    std::vector<std::int64_t> orders_;
    std::vector<Rational> q_;
    RatMatrix b_;
};

Fqm direct_sum(const Fqm &a, const Fqm &b);

/// A group homomorphism given by the images of the source generators.
class FqmHom {
  public:
    FqmHom() = default;
    /// Throws InputError if some dᵢ·image(gᵢ) ≠ 0.
    FqmHom(Fqm source, Fqm target, std::vector<FqmElement> images);

    static FqmHom identity(const Fqm &m);
    static FqmHom negation(const Fqm &m);

    const Fqm &source() const { return source_; }
    const Fqm &target() const { return target_; }
    const std::vector<FqmElement> &images() const { return images_; }

    FqmElement apply(const FqmElement &x) const;
    /// (this ∘ other)(x) = this(other(x)).
    FqmHom compose(const FqmHom &other) const;

    bool is_injective(std::int64_t bound = kDefaultFqmBound) const;
    bool preserves_form() const;
    bool negates_form() const;
    bool is_automorphism(std::int64_t bound = kDefaultFqmBound) const;

    friend bool operator==(const FqmHom &a, const FqmHom &b) { return a.images_ == b.images_; }
    friend bool operator<(const FqmHom &a, const FqmHom &b) { return a.images_ < b.images_; }

  private:
    bool scales_form(int sign) const;

    Fqm source_;
    Fqm target_;
    std::vector<FqmElement> images_;
};

/// Subgroup of a finite quadratic module; the closure is materialized.
class Subgroup {
  public:
    Subgroup() = default;
    Subgroup(Fqm ambient, std::vector<FqmElement> generators,
             std::int64_t bound = kDefaultFqmBound);

    const Fqm &ambient() const { return ambient_; }
    const std::vector<FqmElement> &generators() const { return generators_; }
    /// Elements in ambient index order.
    const std::vector<FqmElement> &elements() const { return elements_; }
    std::int64_t size() const { return static_cast<std::int64_t>(elements_.size()); }
    bool contains(const FqmElement &x) const;

  private:
    Fqm ambient_;
    std::vector<FqmElement> generators_;
    std::vector<FqmElement> elements_;
    std::vector<char> member_;
};

/// The subgroup {x : b(x, y) ∈ Z for all y ∈ S}.
Subgroup orthogonal_subgroup(const Subgroup &s, std::int64_t bound = kDefaultFqmBound);

/// Image of a homomorphism as a subgroup of its target.
Subgroup image(const FqmHom &h, std::int64_t bound = kDefaultFqmBound);

/// The unique x with h(x) = y for injective h. Throws InputError when y is
/// not in the image.
FqmElement preimage(const FqmHom &h, const FqmElement &y, std::int64_t bound = kDefaultFqmBound);

/// A subgroup equipped with the restricted form, in invariant-factor
/// coordinates. `embedding` maps the new generators into the ambient module.
struct SubgroupForm {
    Fqm form;
    FqmHom embedding;
};
SubgroupForm restrict_form(const Subgroup &s);

struct FqmGroup {
    std::vector<FqmHom> generators;
    Integer order;
};

/// All q-preserving automorphisms of M, listed exhaustively. Throws
/// InputError if |M| exceeds the bound.
std::vector<FqmHom> orthogonal_group_elements(const Fqm &m, std::int64_t bound = kDefaultFqmBound);

/// Generating set and order of O(M).
FqmGroup orthogonal_group(const Fqm &m, std::int64_t bound = kDefaultFqmBound);

/// Every injective homomorphism A → B with q_B(γx) = sign·q_A(x) and
/// b_B(γx, γy) = sign·b_A(x, y). sign = −1 gives anti-embeddings.
std::vector<FqmHom> form_embeddings(const Fqm &a, const Fqm &b, int sign,
                                    std::int64_t bound = kDefaultFqmBound);

inline std::vector<FqmHom> anti_embeddings(const Fqm &a, const Fqm &b,
                                           std::int64_t bound = kDefaultFqmBound) {
    return form_embeddings(a, b, -1, bound);
}

/// An isometry A → B if one exists.
std::optional<FqmHom> fqm_isometry(const Fqm &a, const Fqm &b, std::int64_t bound = kDefaultFqmBound);

/// True iff some x ∉ image, orthogonal to the image, has q(x) = 3/2 mod 2.
/// Throws InputError if `image` does not live in `dn`.
bool k3sq_glue_admissible(const Fqm &dn, const Subgroup &image);

/// Closure of a set of automorphisms under composition; bounded.
std::vector<FqmHom> closure(const std::vector<FqmHom> &gens, const Fqm &m, std::size_t bound);

} // namespace k3lat
