// Acceptance checks 1-8. One line per criterion, nonzero exit if any fails.

#include "glue_oracle.hpp"

#include "k3lat/classify.hpp"
#include "k3lat/dataset.hpp"
#include "k3lat/enumerate.hpp"
#include "k3lat/glue.hpp"
#include "k3lat/hilb2.hpp"
#include "k3lat/lattice.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace k3lat;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, double limit_s, const std::function<Outcome()> &body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < limit_s;
    if (!pass)
        ++failures;
    std::printf("criterion %d: %s %s (%.2fs, limit %.0fs)\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                limit_s);
    std::fflush(stdout);
}

Outcome k3sq_discriminant() {
    const Fqm d = discriminant_group(lattices::k3_hilbert_square());
    const bool ok = d.order() == 2 && d.num_generators() == 1 && d.q_gen()[0] == Rational(3, 2);
    return {ok, "D(K3^[2]) order " + to_string(d.order()) + ", q " +
                    (d.num_generators() ? to_string(d.q_gen()[0]) : std::string("-"))};
}

Outcome quartic_obstructions() {
    const Minus10Scan m = minus10_obstruction_grams(4);
    const bool grams = m.exhaustive &&
                       m.grams == std::vector<IntMatrix>{IntMatrix{{-2, 1}, {1, 4}}, IntMatrix{{2, 3}, {3, 4}}};
    const WallScan w = minus2_wall_scan(4);
    bool walls = w.exhaustive && !w.solutions.empty();
    for (const auto &s : w.solutions)
        walls = walls && s.t == Rational(1, 2) && s.k * s.k == 1 && s.l * s.l == 1;
    return {grams && walls, std::to_string(m.grams.size()) + " grams, " + std::to_string(w.solutions.size()) +
                                " wall solutions (t = 1/2, k^2 = l^2 = 1)"};
}

Outcome good_isometry_suite() {
    std::size_t lattices_seen = 0, isos = 0;
    bool ok = true;
    for (const auto &g : builtin_fixtures().groups)
        for (const auto &n : g.invariant) {
            ++lattices_seen;
            std::vector<IntMatrix> want;
            for (const auto &f : oracle::brute_automorphisms(n.gram())) {
                long ord = 1;
                IntMatrix p = f;
                while (p != IntMatrix::identity(3) && ord <= 12) {
                    p = p * f;
                    ++ord;
                }
                if (is_good_pair(ord, trace(f)))
                    want.push_back(f);
            }
            std::vector<IntMatrix> got;
            for (const auto &f : good_isometries(n)) {
                got.push_back(f.matrix);
                const IntMatrix &a = f.matrix;
                Integer minors = 0;
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = i + 1; j < 3; ++j)
                        minors += a(i, i) * a(j, j) - a(i, j) * a(j, i);
                ok = ok && f.order && is_good_pair(*f.order, trace(a)) && oracle::cofactor_det(a) == 1 &&
                     minors == trace(a) && matrix_power(a, *f.order) == IntMatrix::identity(3);
            }
            ok = ok && got == want;
            isos += got.size();
        }
    return {ok, std::to_string(lattices_seen) + " invariant lattices, " + std::to_string(isos) +
                    " good isometries, brute-force filter agrees"};
}

Outcome pipeline_rows() {
    const Dataset d = builtin_fixtures();
    auto find_row = [&](const std::string &group, auto pred) -> std::optional<ClassificationRow> {
        const GroupData *g = find_group(d, group);
        if (!g)
            return std::nullopt;
        const auto data = coinvariant_data(*g);
        if (!data)
            return std::nullopt;
        ClassifyOptions opt;
        opt.mode = data->obar ? Mode::Exact : Mode::Permissive;
        for (const auto &r : classify(g->invariant, *data, g->name, opt))
            if (pred(r))
                return r;
        return std::nullopt;
    };
    const auto a6 = find_row("3^4:A_6", [](const ClassificationRow &r) {
        return r.h_sq == 6 && r.h_div == 2 && r.m == 6 && r.t_gram == IntMatrix{{6, 3}, {3, 6}};
    });
    const auto l211 = find_row("L_2(11)", [](const ClassificationRow &r) {
        return r.t_gram == IntMatrix{{2, 1}, {1, 6}};
    });
    std::string detail = "3^4:A_6 row (6, 2, 6, [6 3; 3 6]) ";
    detail += a6 ? "found [" + to_string(a6->mode) + "]" : "missing";
    detail += "; L_2(11) row T = [2 1; 1 6] ";
    detail += l211 ? "found (h^2 " + to_string(l211->h_sq) + ", div " + to_string(l211->h_div) + ", m " +
                         std::to_string(l211->m) + ") [" + to_string(l211->mode) + "]"
                   : "missing";
    return {a6.has_value() && l211.has_value(), detail};
}

Outcome glue_soundness() {
    std::mt19937_64 rng(20240501);
    long trues = 0, falses = 0, mismatches = 0;
    for (int pair = 0; pair < 200; ++pair) {
        const oracle::GlueSetup s = oracle::random_glue_setup(rng, 6);
        const auto obar = oracle::obar_generators(s.m);
        for (const auto &f : automorphism_elements(s.n)) {
            const ExtensionCheck c = check_extendable(s.n, f, s.glue, ExtensionMode::Exact, obar);
            if (c.extendable) {
                ++trues;
                if (!c.witness || !oracle::constructed_extension(s, f, *c.witness))
                    ++mismatches;
            } else {
                ++falses;
                if (oracle::brute_extension(s, f))
                    ++mismatches;
            }
        }
    }
    return {mismatches == 0 && trues > 0 && falses > 0,
            "200 pairs, " + std::to_string(trues) + " extendable / " + std::to_string(falses) +
                " not, " + std::to_string(mismatches) + " disagreements with the oracle"};
}

Outcome index_identity() {
    std::mt19937_64 rng(20240502);
    int done = 0, bad = 0;
    while (done < 500) {
        const std::size_t n = 2 + done % 4;
        const bool definite = done % 3 != 0;
        const IntMatrix g = oracle::random_even_gram(rng, n, 10, definite);
        const Lattice l(g);
        std::uniform_int_distribution<std::size_t> rk(1, n - 1);
        std::uniform_int_distribution<long> c(-3, 3);
        IntMatrix rows(rk(rng), n);
        for (std::size_t i = 0; i < rows.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                rows(i, j) = c(rng);
        if (rank(rows) != rows.rows())
            continue;
        const SublatticeBasis m = primitive_closure(l, rows);
        // Discriminant forms are stored with 64-bit orders; keep both sides
        // well inside that range.
        const Integer dm = abs(determinant(m.induced_gram()));
        const Integer dn = abs(determinant(orthogonal_complement(m).induced_gram()));
        if (dm == 0 || dn == 0 || dm > 1'000'000 || dn > 1'000'000)
            continue;
        const GlueExtraction ex = extract_glue(l, m.rows);
        const bool identity =
            abs(l.det()) * ex.index * ex.index == abs(ex.m_lattice.det()) * abs(ex.n_lattice.det());
        if (!identity || !glue_is_graph_of_anti_isometry(ex))
            ++bad;
        ++done;
    }
    return {bad == 0, "500 primitive sublattices, " + std::to_string(bad) + " failures"};
}

Outcome automorphism_orders() {
    std::mt19937_64 rng(20240503);
    int bad = 0;
    for (int t = 0; t < 100; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 1 + t % 3, 12, true);
        if (automorphism_group(Lattice(g)).order != Integer(static_cast<long>(oracle::brute_automorphisms(g).size())))
            ++bad;
    }
    return {bad == 0, "100 lattices, " + std::to_string(bad) + " order mismatches"};
}

Outcome group_order_arithmetic() {
    const Integer big = max_group_order_check(29160, 6);
    const bool ok = big == 174960 && Integer(66) * 972 < big;
    return {ok, "6 * 29160 = " + to_string(big) + ", 66 * 972 = " + to_string(Integer(Integer(66) * 972))};
}

} // namespace

int main() {
    run(1, 1, k3sq_discriminant);
    run(2, 1, quartic_obstructions);
    run(3, 60, good_isometry_suite);
    run(4, 300, pipeline_rows);
    run(5, 600, glue_soundness);
    run(6, 300, index_identity);
    run(7, 600, automorphism_orders);
    run(8, 1, group_order_arithmetic);
    return failures == 0 ? 0 : 1;
}
