#include "k3lat/hilb2.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace k3lat {

namespace {

void require_polarization(const Integer &h_sq) {
    if (h_sq <= 0 || h_sq % 2 != 0)
        throw InputError("h^2 must be a positive even integer");
}

IntMatrix xh_gram(const Integer &x_sq, const Integer &hx, const Integer &h_sq) {
    return IntMatrix{{x_sq, hx}, {hx, h_sq}};
}

} // namespace

Minus10Scan minus10_obstruction_grams(const Integer &h_sq, long bound) {
    require_polarization(h_sq);
    Minus10Scan out;
    long lo = -bound, hi = bound;
    if (h_sq >= 4) {
        // (2h−4)(l²+l) < 2h+1 bounds |l|.
        const Integer r = isqrt_floor(make_rational(2 * h_sq + 1, 2 * h_sq - 4)) + 1;
        lo = -r.get_si() - 1;
        hi = r.get_si();
    } else {
        out.exhaustive = false;
    }
    std::set<IntMatrix> grams;
    for (long l = lo; l <= hi; ++l) {
        const Integer odd = 2 * l + 1;
        const Integer num = 2 * (Integer(l) * l + l - 1);
        if ((2 * h_sq - 4) * (Integer(l) * l + l) >= 2 * h_sq + 1)
            continue;
        const Integer aodd = abs(odd);
        for (Integer d = 1; d <= aodd; ++d) {
            if (aodd % d != 0 || num % (d * d) != 0)
                continue;
            const Integer x_sq = num / (d * d);
            const Integer hx = aodd / d; // sign of x chosen so h·x > 0
            if (h_sq * x_sq < hx * hx)
                grams.insert(xh_gram(x_sq, hx, h_sq));
        }
    }
    out.grams.assign(grams.begin(), grams.end());
    return out;
}

std::optional<IntVector> find_line_class(const IntMatrix &g) {
    if (g.rows() != 2 || !g.is_symmetric())
        throw InputError("expected a symmetric 2x2 Gram matrix");
    const Integer a = g(0, 0), b = g(0, 1), c = g(1, 1);
    const Integer det = a * c - b * b;
    if (det == 0)
        throw InputError("degenerate Gram matrix");
    // α·b + β·c = 1
    Integer gg, s, t;
    mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b.get_mpz_t(), c.get_mpz_t());
    if (gg != 1)
        return std::nullopt;
    // α = s + c·u, β = t − b·u; v² + 2 = A u² + B u + C.
    const Integer A = c * det;
    const Integer B = 2 * s * det;
    const Integer C = a * s * s + 2 * b * s * t + c * t * t + 2;
    const Integer disc = B * B - 4 * A * C;
    if (disc < 0)
        return std::nullopt;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    if (root * root != disc)
        return std::nullopt;
    for (const Integer &num : {Integer(-B + root), Integer(-B - root)}) {
        if (num % (2 * A) != 0)
            continue;
        const Integer u = num / (2 * A);
        IntVector v{s + c * u, t - b * u};
        return v;
    }
    return std::nullopt;
}

bool contains_line_class(const IntMatrix &gram) { return find_line_class(gram).has_value(); }

WallScan minus2_wall_scan(const Integer &h_sq, long bound) {
    require_polarization(h_sq);
    WallScan out;
    long lmax = bound;
    if (h_sq >= 4) {
        // (h−2)l² < h
        lmax = isqrt_floor(make_rational(h_sq, h_sq - 2)).get_si() + 1;
    } else {
        out.exhaustive = false;
    }
    for (long l = -lmax; l <= lmax; ++l) {
        if (l == 0)
            continue;
        const Integer num = 2 * (Integer(l) * l - 1);
        // |h·x| ≥ 1 and t < 1 force |k| < 2|l|.
        for (long k = -(2 * std::abs(l) - 1); k <= 2 * std::abs(l) - 1; ++k) {
            if (k == 0 || num % (Integer(k) * k) != 0)
                continue;
            const Integer x_sq = num / (Integer(k) * k);
            if (x_sq % 2 != 0)
                continue;
            const long mmax = (2 * std::abs(l) - 1) / std::abs(k) + 1;
            for (long m = -mmax; m <= mmax; ++m) {
                if (m == 0)
                    continue;
                // h·x = m = −2tl/k
                const Rational t = make_rational(Integer(-m) * k, Integer(2) * l);
                if (t <= 0 || t >= 1)
                    continue;
                if (h_sq * x_sq >= Integer(m) * m)
                    continue;
                const IntMatrix gram = xh_gram(x_sq, std::abs(m), h_sq);
                out.solutions.push_back({t, k, l, gram});
            }
        }
    }
    std::sort(out.solutions.begin(), out.solutions.end(), [](const auto &x, const auto &y) {
        return std::tie(x.t, x.k, x.l) < std::tie(y.t, y.k, y.l);
    });
    for (const auto &s : out.solutions)
        out.terminal_grams.push_back(contains_line_class(s.gram) ? xh_gram(-2, 1, h_sq) : s.gram);
    return out;
}

ObstructionReport obstruction_report(const Integer &h_sq, long bound) {
    ObstructionReport r{minus10_obstruction_grams(h_sq, bound), minus2_wall_scan(h_sq, bound), false};
    for (const auto &g : r.minus10.grams)
        r.line_class_needed = r.line_class_needed || contains_line_class(g);
    for (const auto &s : r.walls.solutions)
        r.line_class_needed = r.line_class_needed || contains_line_class(s.gram);
    return r;
}

bool ample_model_verdict(const Integer &h_sq, bool no_lines,
                         const std::function<bool(const IntMatrix &)> &picard_excludes, long bound) {
    const ObstructionReport r = obstruction_report(h_sq, bound);
    if (!r.minus10.exhaustive || !r.walls.exhaustive)
        return false;
    auto excluded = [&](const IntMatrix &g) {
        return (picard_excludes && picard_excludes(g)) || (no_lines && contains_line_class(g));
    };
    for (const auto &g : r.minus10.grams)
        if (!excluded(g))
            return false;
    for (const auto &s : r.walls.solutions)
        if (!excluded(s.gram))
            return false;
    return true;
}

} // namespace k3lat
