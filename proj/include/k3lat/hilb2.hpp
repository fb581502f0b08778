#pragma once

// Diophantine analysis of the classes that can stop h − ξ from being ample
// on a birational model of S^[2], for a polarized K3 surface (S, h).

#include "k3lat/exact.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace k3lat {

/// Default search radius for |l| when the Hodge inequality leaves l
/// unbounded (h² = 2).
inline constexpr long kDefaultHilb2Bound = 50;

struct Minus10Scan {
    /// Gram matrices of (x, h), normalized to h·x > 0, sorted.
    std::vector<IntMatrix> grams;
    /// False when the range of l was cut at the search bound.
    bool exhaustive = true;
};

/// −10 classes 2kx + (2l+1)ξ of divisibility 2 orthogonal to h − ξ:
/// x² = 2(l²+l−1)/k², h·x = −(2l+1)/k, with h²·x² < (h·x)².
Minus10Scan minus10_obstruction_grams(const Integer &h_sq, long bound = kDefaultHilb2Bound);

struct WallSolution {
    Rational t;
    Integer k;
    Integer l;
    IntMatrix gram; ///< Gram of (x, h) with h·x > 0

    friend bool operator==(const WallSolution &, const WallSolution &) = default;
};

struct WallScan {
    std::vector<WallSolution> solutions;
    /// Per solution: Gram of (v, h) for a line class v (v² = −2, v·h = 1)
    /// when the solution lattice contains one, else the solution Gram.
    std::vector<IntMatrix> terminal_grams;
    bool exhaustive = true;
};

/// −2 classes kx + lξ orthogonal to h − tξ for rational 0 < t < 1:
/// x² = 2(l²−1)/k², h·x = −2tl/k, with h²·x² < (h·x)², x² even and
/// h·x ≠ 0.
WallScan minus2_wall_scan(const Integer &h_sq, long bound = kDefaultHilb2Bound);

/// Some v in the lattice with Gram [[x², h·x], [h·x, h²]] (basis x, h) has
/// v² = −2 and v·h = 1.
bool contains_line_class(const IntMatrix &gram);

/// A v with v² = −2 and v·h = 1, in (x, h) coordinates, if one exists.
std::optional<IntVector> find_line_class(const IntMatrix &gram);

struct ObstructionReport {
    Minus10Scan minus10;
    WallScan walls;
    /// Some obstruction Gram contains a line class, so excluding it needs
    /// S to be line-free.
    bool line_class_needed = false;
};

ObstructionReport obstruction_report(const Integer &h_sq, long bound = kDefaultHilb2Bound);

/// True iff every obstruction Gram is excluded, either by `picard_excludes`
/// or, when `no_lines` holds, because it contains a line class. A scan cut
/// at its bound never yields true.
bool ample_model_verdict(const Integer &h_sq, bool no_lines,
                         const std::function<bool(const IntMatrix &)> &picard_excludes,
                         long bound = kDefaultHilb2Bound);

} // namespace k3lat
