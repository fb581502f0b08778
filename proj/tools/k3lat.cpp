// k3lat command-line front end.

#include "k3lat/classify.hpp"
#include "k3lat/dataset.hpp"
#include "k3lat/enumerate.hpp"
#include "k3lat/glue.hpp"
#include "k3lat/hilb2.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace k3lat;

namespace {

// "@path" reads a file, a known name goes through lattices::by_name, anything
// else is an inline matrix.
Lattice read_lattice(const std::string &arg) {
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in)
            throw InputError("cannot open '" + arg.substr(1) + "'");
        std::stringstream ss;
        std::string line, joined;
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#')
                continue;
            if (!joined.empty())
                joined += ';';
            joined += line;
        }
        return Lattice(parse_matrix(joined));
    }
    if (arg.find_first_of("0123456789[-") != 0)
        return lattices::by_name(arg);
    return Lattice(parse_matrix(arg));
}

std::string fmt_element(const FqmElement &x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
}

void print_fqm(const Fqm &f) {
    std::cout << "order " << f.order().get_str() << '\n' << "orders";
    for (auto o : f.orders())
        std::cout << ' ' << o;
    std::cout << "\nq";
    for (const auto &q : f.q_gen())
        std::cout << ' ' << to_string(q);
    std::cout << "\nb\n";
    for (std::size_t i = 0; i < f.num_generators(); ++i) {
        for (std::size_t j = 0; j < f.num_generators(); ++j)
            std::cout << (j ? " " : "") << to_string(f.b_gen()(i, j));
        std::cout << '\n';
    }
}

void print_vector(const IntVector &v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        std::cout << (i ? " " : "") << v[i].get_str();
}

Mode parse_mode(const std::string &s) {
    if (s == "exact")
        return Mode::Exact;
    if (s == "permissive")
        return Mode::Permissive;
    throw InputError("unknown mode '" + s + "'");
}

Dataset dataset_from(const std::string &path) {
    return path.empty() ? builtin_fixtures() : load_dataset(path);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact lattice computations for K3^[2]-type gluing problems"};
    app.require_subcommand(1);

    std::string gram, gram_m, dataset_path, group, mode_s = "permissive", format_s = "markdown";
    std::string h_sq_s = "4";
    std::vector<std::string> grams;
    unsigned jobs = 1;
    std::string bound_s = "4";
    long hilb_bound = kDefaultHilb2Bound;
    bool no_lines = false;

    auto *disc = app.add_subcommand("disc", "Discriminant form of an even lattice");
    disc->add_option("gram", gram, "Gram matrix, lattice name, or @file")->required();

    auto *aut = app.add_subcommand("autgroup", "Order and generators of O(L), L definite");
    aut->add_option("gram", gram, "Gram matrix, lattice name, or @file")->required();

    auto *sv = app.add_subcommand("shortvec", "Vectors with 0 < x^2 <= bound");
    sv->add_option("gram", gram, "Gram matrix, lattice name, or @file")->required();
    sv->add_option("--bound,-b", bound_s, "Norm bound")->capture_default_str();

    auto *gi = app.add_subcommand("good-isos", "Good isometries of a rank 3 lattice");
    gi->add_option("gram", gram, "Gram matrix, lattice name, or @file")->required();

    auto *gc = app.add_subcommand("glue-check", "Anti-embeddings D_M -> D_N and extendable good isometries");
    gc->add_option("--n", gram, "Invariant lattice N")->required();
    gc->add_option("--m", gram_m, "Coinvariant lattice M")->required();
    gc->add_option("--mode", mode_s, "exact|permissive")->capture_default_str();

    auto *cl = app.add_subcommand("classify", "Classification rows for one group");
    cl->add_option("--group,-g", group, "Group name in the dataset");
    cl->add_option("--dataset,-d", dataset_path, "Dataset file (default: built-in fixtures)");
    cl->add_option("--n", grams, "Invariant lattice (repeatable), used with --m");
    cl->add_option("--m", gram_m, "Coinvariant lattice Gram");
    cl->add_option("--mode", mode_s, "exact|permissive")->capture_default_str();
    cl->add_option("--format,-f", format_s, "csv|markdown")->capture_default_str();
    cl->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();

    auto *hb = app.add_subcommand("hilb2", "Ampleness obstructions for h - xi on a Hilbert square");
    hb->add_option("--h-sq", h_sq_s, "h^2 on the K3 surface (positive, even)")->capture_default_str();
    hb->add_option("--bound", hilb_bound, "Search radius when h^2 = 2")->capture_default_str();
    hb->add_flag("--no-lines", no_lines, "The surface contains no line");

    auto *tb = app.add_subcommand("table", "Classification table over a dataset");
    tb->add_option("--dataset,-d", dataset_path, "Dataset file (default: built-in fixtures)");
    tb->add_option("--mode", mode_s, "exact|permissive")->capture_default_str();
    tb->add_option("--format,-f", format_s, "csv|markdown")->capture_default_str();
    tb->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();

    auto *fx = app.add_subcommand("fixtures", "Print the built-in dataset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*disc) {
            const Lattice l = read_lattice(gram);
            const Discriminant d = discriminant(l);
            std::cout << "det " << l.det().get_str() << '\n';
            print_fqm(d.form);
        } else if (*aut) {
            const Lattice l = read_lattice(gram);
            const AutomorphismGroup g = automorphism_group(l);
            std::cout << "order " << g.order.get_str() << '\n'
                      << "generators " << g.generators.size() << '\n';
            for (const auto &x : g.generators)
                std::cout << x.matrix << '\n';
        } else if (*sv) {
            const Lattice l = read_lattice(gram);
            Integer b;
            if (b.set_str(bound_s, 10) != 0)
                throw InputError("bound must be an integer");
            const auto vs = short_vectors(l.gram(), b);
            std::cout << "count " << vs.size() << '\n';
            for (const auto &v : vs) {
                print_vector(v);
                std::cout << "  norm " << l.norm(v).get_str() << '\n';
            }
        } else if (*gi) {
            const Lattice l = read_lattice(gram);
            const auto isos = good_isometries(l);
            std::cout << "count " << isos.size() << '\n';
            for (const auto &f : isos) {
                const PolarizationT pt = polarization_and_transcendental(l, f);
                std::cout << "order " << *f.order << " trace " << trace(f.matrix).get_str()
                          << " h^2 " << l.norm(pt.h).get_str() << " T " << matrix_compact(pt.t_gram)
                          << '\n'
                          << f.matrix << '\n';
            }
        } else if (*gc) {
            const Lattice n = read_lattice(gram);
            const Lattice m = read_lattice(gram_m);
            const Mode mode = parse_mode(mode_s);
            const Discriminant dn = discriminant(n);
            const Fqm dm = discriminant_group(m);
            const auto gammas = anti_embeddings(dm, dn.form);
            const auto goods = good_isometries(n);
            std::cout << "anti-embeddings " << gammas.size() << '\n';
            for (std::size_t i = 0; i < gammas.size(); ++i) {
                const Subgroup img = image(gammas[i]);
                const bool adm = k3sq_glue_admissible(dn.form, img);
                const GlueMap glue = make_glue_map(n, gammas[i], m);
                const Overlattice o = overlattice(n, m, glue);
                std::cout << "gamma " << i << " images";
                for (const auto &y : gammas[i].images())
                    std::cout << ' ' << fmt_element(y);
                std::cout << " admissible " << (adm ? "yes" : "no") << " overlattice det "
                          << o.lattice.det().get_str() << '\n';
                for (const auto &f : goods) {
                    const ExtensionCheck ec = check_extendable(
                        n, f.matrix, glue,
                        mode == Mode::Exact ? ExtensionMode::Exact : ExtensionMode::Permissive, {});
                    std::cout << "  order " << *f.order << " trace " << trace(f.matrix).get_str()
                              << " extendable " << (ec.extendable ? "yes" : "no") << '\n';
                }
            }
        } else if (*cl) {
            ClassifyOptions opt;
            opt.mode = parse_mode(mode_s);
            opt.jobs = jobs;
            std::vector<ClassificationRow> rows;
            if (!group.empty()) {
                const Dataset d = dataset_from(dataset_path);
                const GroupData *g = find_group(d, group);
                if (!g)
                    throw InputError("no group named '" + group + "'");
                const auto data = coinvariant_data(*g);
                if (!data)
                    throw InputError("group " + g->name + " has no coinvariant data");
                if (opt.mode == Mode::Exact && !data->obar)
                    std::cerr << "warning: group " << g->name
                              << ": exact mode requested without O(M) image generators; "
                                 "downgraded to permissive\n";
                rows = classify(g->invariant, *data, g->name, opt);
            } else {
                if (grams.empty() || gram_m.empty())
                    throw InputError("classify needs --group, or --n and --m");
                std::vector<Lattice> ns;
                for (const auto &s : grams)
                    ns.push_back(read_lattice(s));
                const Lattice m = read_lattice(gram_m);
                rows = classify(ns, CoinvariantData{discriminant_group(m), m, std::nullopt, std::nullopt},
                                "custom", opt);
            }
            std::cout << emit_table(rows, parse_table_format(format_s));
        } else if (*hb) {
            Integer h;
            if (h.set_str(h_sq_s, 10) != 0)
                throw InputError("h^2 must be an integer");
            const ObstructionReport r = obstruction_report(h, hilb_bound);
            std::cout << "minus10 grams" << (r.minus10.exhaustive ? "" : " (bounded search)") << '\n';
            for (const auto &g : r.minus10.grams)
                std::cout << "  " << matrix_compact(g)
                          << (contains_line_class(g) ? "  contains a line class" : "") << '\n';
            std::cout << "walls" << (r.walls.exhaustive ? "" : " (bounded search)") << '\n';
            for (std::size_t i = 0; i < r.walls.solutions.size(); ++i) {
                const auto &s = r.walls.solutions[i];
                std::cout << "  t " << to_string(s.t) << " k " << s.k.get_str() << " l "
                          << s.l.get_str() << " gram " << matrix_compact(s.gram) << " terminal "
                          << matrix_compact(r.walls.terminal_grams[i]) << '\n';
            }
            std::cout << "line class needed " << (r.line_class_needed ? "yes" : "no") << '\n';
            const bool verdict =
                ample_model_verdict(h, no_lines, [](const IntMatrix &) { return false; }, hilb_bound);
            std::cout << "ample model " << (verdict ? "yes" : "not established")
                      << (no_lines ? " (no lines assumed)" : "") << '\n';
        } else if (*tb) {
            const Dataset d = dataset_from(dataset_path);
            const TableRun run = run_table(d, parse_mode(mode_s), jobs);
            const TableFormat format = parse_table_format(format_s);
            std::cout << emit_table(run.rows, format);
            for (const auto &w : run.warnings)
                std::cerr << "warning: " << w << '\n';
            std::cerr << run.rows.size() << " rows, " << run.warnings.size() << " warnings\n";
        } else if (*fx) {
            std::cout << emit_dataset(builtin_fixtures());
        }
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvariantError &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
