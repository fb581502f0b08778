#include "k3lat/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace k3lat {

namespace {

std::vector<std::string> split_ws(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Integer parse_integer(const std::string &s) {
    Integer x;
    if (s.empty() || x.set_str(s, 10) != 0)
        throw InputError("expected an integer, got '" + s + "'");
    return x;
}

class Reader {
  public:
    Reader(const std::string &text, std::string source) : source_(std::move(source)) {
        std::istringstream in(text);
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line)) {
            ++no;
            const std::string t = trim(line);
            if (t.empty() || t.front() == '#')
                continue;
            lines_.push_back({no, t});
        }
    }

    bool done() const { return pos_ >= lines_.size(); }
    const std::string &peek() const { return lines_.at(pos_).text; }
    std::size_t line_no() const {
        return pos_ < lines_.size() ? lines_[pos_].no : (lines_.empty() ? 0 : lines_.back().no);
    }
    std::string next() {
        if (done())
            fail("unexpected end of input");
        return lines_[pos_++].text;
    }
    [[noreturn]] void fail(const std::string &msg) const { fail_at(line_no(), msg); }
    [[noreturn]] void fail_at(std::size_t no, const std::string &msg) const {
        throw InputError(source_ + ":" + std::to_string(no) + ": " + msg);
    }
    /// Line of the most recently consumed entry.
    std::size_t prev_line_no() const { return pos_ == 0 ? 0 : lines_[pos_ - 1].no; }

    IntMatrix int_rows(std::size_t rows, std::size_t cols) {
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            if (done())
                fail("matrix block ends early");
            const auto toks = split_ws(peek());
            if (toks.size() != cols)
                fail("matrix row has " + std::to_string(toks.size()) + " entries, expected " +
                     std::to_string(cols));
            try {
                for (std::size_t j = 0; j < cols; ++j)
                    m(i, j) = parse_integer(toks[j]);
            } catch (const InputError &e) {
                fail(e.what());
            }
            next();
        }
        return m;
    }

    RatMatrix rat_rows(std::size_t rows, std::size_t cols) {
        RatMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto toks = split_ws(next());
            --pos_;
            if (toks.size() != cols)
                fail("pairing row has " + std::to_string(toks.size()) + " entries, expected " +
                     std::to_string(cols));
            try {
                for (std::size_t j = 0; j < cols; ++j)
                    m(i, j) = parse_rational(toks[j]);
            } catch (const InputError &e) {
                fail(e.what());
            }
            ++pos_;
        }
        return m;
    }

  private:
    struct Line {
        std::size_t no;
        std::string text;
    };
    std::string source_;
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
};

std::size_t parse_count(Reader &r, const std::string &tok) {
    try {
        const Integer n = parse_integer(tok);
        if (n < 0 || n > 1000)
            r.fail("count out of range: " + tok);
        return n.get_ui();
    } catch (const InputError &e) {
        r.fail(e.what());
    }
}

// Keyword plus the rest of the line.
std::pair<std::string, std::string> keyword(const std::string &line) {
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
        return {line, ""};
    return {line.substr(0, sp), trim(line.substr(sp))};
}

void validate_group(Reader &r, GroupData &g) {
    for (std::size_t i = 0; i < g.invariant.size(); ++i) {
        const Lattice &n = g.invariant[i];
        if (n.rank() != 3)
            r.fail("group " + g.name + ": invariant lattice " + std::to_string(i) +
                   " fails the rank-3 check");
        if (!n.is_even())
            r.fail("group " + g.name + ": invariant lattice " + std::to_string(i) +
                   " fails the evenness check");
        if (!n.is_positive_definite())
            r.fail("group " + g.name + ": invariant lattice " + std::to_string(i) +
                   " fails the positive-definiteness check");
    }
    if (g.coinv_gram) {
        if (!g.coinv_gram->is_even())
            r.fail("group " + g.name + ": coinvariant Gram fails the evenness check");
        const Fqm d = discriminant_group(*g.coinv_gram);
        if (g.coinv_disc && !fqm_isometry(d, *g.coinv_disc))
            r.fail("group " + g.name +
                   ": declared coinvariant discriminant form fails the consistency check against "
                   "its Gram matrix");
    }
    if (g.g_gens)
        for (const auto &m : *g.g_gens)
            if (!is_isometry_of(*g.coinv_gram, m))
                r.fail("group " + g.name + ": g_gens matrix fails the isometry check");
    if (g.obar) {
        if (!g.coinv_disc)
            r.fail("group " + g.name + ": obar generators need coinv_disc");
        for (const auto &h : *g.obar)
            if (!h.is_automorphism() || !h.preserves_form())
                r.fail("group " + g.name + ": obar generator fails the isometry check");
    }
}

} // namespace

Dataset parse_dataset(const std::string &text, const std::string &source) {
    Reader r(text, source);
    Dataset d;
    while (!r.done()) {
        auto [kw, rest] = keyword(r.next());
        if (kw != "group")
            r.fail("expected 'group', got '" + kw + "'");
        if (rest.empty())
            r.fail("group needs a name");
        GroupData g;
        g.name = rest;
        bool closed = false;
        while (!r.done()) {
            auto [k, arg] = keyword(r.next());
            if (k == "end") {
                closed = true;
                break;
            }
            if (k == "symplectic_order") {
                try {
                    g.symplectic_order = parse_integer(arg);
                } catch (const InputError &e) {
                    r.fail(e.what());
                }
            } else if (k == "invariant") {
                const std::size_t n = parse_count(r, arg);
                const std::size_t at = r.prev_line_no();
                IntMatrix m = r.int_rows(n, n);
                try {
                    g.invariant.emplace_back(m);
                } catch (const InputError &e) {
                    r.fail_at(at, std::string("invariant lattice: ") + e.what());
                }
            } else if (k == "coinv_gram") {
                const std::size_t n = parse_count(r, arg);
                const std::size_t at = r.prev_line_no();
                IntMatrix m = r.int_rows(n, n);
                try {
                    g.coinv_gram = Lattice(m);
                } catch (const InputError &e) {
                    r.fail_at(at, std::string("coinvariant lattice: ") + e.what());
                }
            } else if (k == "g_gens") {
                if (!g.coinv_gram)
                    r.fail("g_gens must follow coinv_gram");
                const std::size_t count = parse_count(r, arg);
                const std::size_t n = g.coinv_gram->rank();
                std::vector<IntMatrix> gens;
                for (std::size_t c = 0; c < count; ++c)
                    gens.push_back(r.int_rows(n, n));
                g.g_gens = std::move(gens);
            } else if (k == "coinv_disc") {
                const std::size_t n = parse_count(r, arg);
                auto [ko, orders_s] = keyword(r.next());
                if (ko != "orders")
                    r.fail("expected 'orders'");
                auto [kq, q_s] = keyword(r.next());
                if (kq != "q")
                    r.fail("expected 'q'");
                if (r.next() != "b")
                    r.fail("expected 'b'");
                const auto ot = split_ws(orders_s);
                const auto qt = split_ws(q_s);
                if (ot.size() != n || qt.size() != n)
                    r.fail("coinv_disc: expected " + std::to_string(n) + " orders and q values");
                RatMatrix b = r.rat_rows(n, n);
                try {
                    std::vector<std::int64_t> orders;
                    std::vector<Rational> q;
                    for (std::size_t i = 0; i < n; ++i) {
                        orders.push_back(parse_integer(ot[i]).get_si());
                        q.push_back(parse_rational(qt[i]));
                    }
                    g.coinv_disc = Fqm(orders, q, b);
                } catch (const InputError &e) {
                    r.fail(e.what());
                }
            } else if (k == "obar") {
                if (!g.coinv_disc)
                    r.fail("obar must follow coinv_disc");
                const std::size_t count = parse_count(r, arg);
                const std::size_t rr = g.coinv_disc->num_generators();
                std::vector<FqmHom> gens;
                for (std::size_t c = 0; c < count; ++c) {
                    IntMatrix m = r.int_rows(rr, rr);
                    std::vector<FqmElement> images;
                    for (std::size_t i = 0; i < rr; ++i) {
                        FqmElement e;
                        for (std::size_t j = 0; j < rr; ++j)
                            e.push_back(m(i, j).get_si());
                        images.push_back(e);
                    }
                    try {
                        gens.emplace_back(*g.coinv_disc, *g.coinv_disc, images);
                    } catch (const InputError &e) {
                        r.fail(e.what());
                    }
                }
                g.obar = std::move(gens);
            } else {
                r.fail("unknown keyword '" + k + "'");
            }
        }
        if (!closed)
            r.fail("group " + g.name + " is missing 'end'");
        validate_group(r, g);
        d.groups.push_back(std::move(g));
    }
    return d;
}

Dataset load_dataset(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open dataset file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dataset(ss.str(), path);
}

std::string emit_dataset(const Dataset &d) {
    std::ostringstream out;
    auto rows = [&](const IntMatrix &m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j)
                out << (j ? " " : "") << m(i, j).get_str();
            out << '\n';
        }
    };
    bool first = true;
    for (const auto &g : d.groups) {
        if (!first)
            out << '\n';
        first = false;
        out << "group " << g.name << '\n';
        if (g.symplectic_order)
            out << "symplectic_order " << g.symplectic_order->get_str() << '\n';
        for (const auto &n : g.invariant) {
            out << "invariant " << n.rank() << '\n';
            rows(n.gram());
        }
        if (g.coinv_gram) {
            out << "coinv_gram " << g.coinv_gram->rank() << '\n';
            rows(g.coinv_gram->gram());
            if (g.g_gens) {
                out << "g_gens " << g.g_gens->size() << '\n';
                for (const auto &m : *g.g_gens)
                    rows(m);
            }
        }
        if (g.coinv_disc) {
            const Fqm &f = *g.coinv_disc;
            const std::size_t r = f.num_generators();
            out << "coinv_disc " << r << '\n' << "orders";
            for (auto o : f.orders())
                out << ' ' << o;
            out << '\n' << "q";
            for (const auto &q : f.q_gen())
                out << ' ' << to_string(q);
            out << '\n' << "b\n";
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < r; ++j)
                    out << (j ? " " : "") << to_string(f.b_gen()(i, j));
                out << '\n';
            }
            if (g.obar) {
                out << "obar " << g.obar->size() << '\n';
                for (const auto &h : *g.obar)
                    for (const auto &img : h.images()) {
                        for (std::size_t j = 0; j < img.size(); ++j)
                            out << (j ? " " : "") << img[j];
                        out << '\n';
                    }
            }
        }
        out << "end\n";
    }
    return out.str();
}

Dataset builtin_fixtures() { return parse_dataset(builtin_fixture_text(), "<fixtures>"); }

namespace {

std::string normalize_name(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '_' || c == '{' || c == '}' || c == '$')
            continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

const GroupData *find_group(const Dataset &d, const std::string &name) {
    const std::string key = normalize_name(name);
    for (const auto &g : d.groups)
        if (normalize_name(g.name) == key)
            return &g;
    return nullptr;
}

std::optional<CoinvariantData> coinvariant_data(const GroupData &g) {
    if (g.coinv_disc)
        return CoinvariantData{*g.coinv_disc, g.coinv_gram, g.obar, g.g_gens};
    if (g.coinv_gram)
        return CoinvariantData{discriminant_group(*g.coinv_gram), g.coinv_gram, std::nullopt,
                               g.g_gens};
    return std::nullopt;
}

TableFormat parse_table_format(const std::string &s) {
    if (s == "csv")
        return TableFormat::Csv;
    if (s == "markdown" || s == "md")
        return TableFormat::Markdown;
    throw InputError("unknown table format '" + s + "' (expected csv or markdown)");
}

std::string matrix_compact(const IntMatrix &m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i)
            out += "; ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                out += ' ';
            out += m(i, j).get_str();
        }
    }
    return out;
}

IntMatrix parse_matrix(const std::string &raw) {
    std::string s = trim(raw);
    std::vector<std::vector<Integer>> rows;
    if (!s.empty() && s.front() == '[') {
        // [[a,b],[c,d]]
        std::string body;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c)))
                body.push_back(c);
        if (body.size() < 4 || body.substr(0, 2) != "[[" || body.substr(body.size() - 2) != "]]")
            throw InputError("cannot parse matrix '" + raw + "'");
        body = body.substr(2, body.size() - 4);
        std::size_t pos = 0;
        while (true) {
            const auto end = body.find("],[", pos);
            const std::string row = body.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            std::vector<Integer> r;
            std::stringstream rs(row);
            std::string tok;
            while (std::getline(rs, tok, ','))
                r.push_back(parse_integer(tok));
            rows.push_back(r);
            if (end == std::string::npos)
                break;
            pos = end + 3;
        }
    } else {
        std::stringstream ss(s);
        std::string row;
        while (std::getline(ss, row, ';')) {
            std::vector<Integer> r;
            for (const auto &tok : split_ws(row))
                r.push_back(parse_integer(tok));
            if (r.empty())
                throw InputError("empty matrix row in '" + raw + "'");
            rows.push_back(r);
        }
    }
    if (rows.empty())
        throw InputError("empty matrix '" + raw + "'");
    const std::size_t cols = rows.front().size();
    return IntMatrix::from_rows(rows, cols);
}

namespace {

constexpr std::size_t kNumColumns = 9;
const char *kColumns[kNumColumns] = {"group", "h_sq", "h_div", "m",   "T",
                                     "k3",    "invariant", "mode", "lift"};

std::string lift_field(const std::optional<bool> &v) {
    if (!v)
        return "-";
    return *v ? "improved" : "same";
}

std::vector<std::string> row_fields(const ClassificationRow &r) {
    return {r.group_name,          r.h_sq.get_str(),  r.h_div.get_str(),
            std::to_string(r.m),   matrix_compact(r.t_gram), to_string(r.k3),
            matrix_compact(r.invariant_gram), to_string(r.mode), lift_field(r.lift_improved)};
}

ClassificationRow row_from_fields(const std::vector<std::string> &f) {
    if (f.size() != kNumColumns)
        throw InputError("table row has " + std::to_string(f.size()) + " fields, expected " +
                         std::to_string(kNumColumns));
    ClassificationRow r;
    r.group_name = f[0];
    r.h_sq = parse_integer(f[1]);
    r.h_div = parse_integer(f[2]);
    r.m = parse_integer(f[3]).get_si();
    r.t_gram = parse_matrix(f[4]);
    r.k3 = parse_k3_flag(f[5]);
    r.invariant_gram = parse_matrix(f[6]);
    if (f[7] == "exact")
        r.mode = Mode::Exact;
    else if (f[7] == "permissive")
        r.mode = Mode::Permissive;
    else
        throw InputError("unknown mode '" + f[7] + "'");
    if (f[8] == "improved")
        r.lift_improved = true;
    else if (f[8] == "same")
        r.lift_improved = false;
    else if (f[8] != "-")
        throw InputError("unknown lift status '" + f[8] + "'");
    return r;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw InputError("unterminated quoted CSV field");
    out.push_back(cur);
    return out;
}

} // namespace

std::string emit_table(const std::vector<ClassificationRow> &rows, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        for (std::size_t i = 0; i < kNumColumns; ++i)
            out << (i ? "," : "") << kColumns[i];
        out << '\n';
        for (const auto &r : rows) {
            const auto f = row_fields(r);
            for (std::size_t i = 0; i < f.size(); ++i)
                out << (i ? "," : "") << csv_field(f[i]);
            out << '\n';
        }
    } else {
        out << '|';
        for (const char *c : kColumns)
            out << ' ' << c << " |";
        out << "\n|";
        for (std::size_t i = 0; i < kNumColumns; ++i)
            out << "---|";
        out << '\n';
        for (const auto &r : rows) {
            out << '|';
            for (const auto &f : row_fields(r))
                out << ' ' << f << " |";
            out << '\n';
        }
    }
    return out.str();
}

std::vector<ClassificationRow> parse_table(const std::string &text, TableFormat format) {
    std::istringstream in(text);
    std::string line;
    std::vector<ClassificationRow> rows;
    std::size_t no = 0;
    auto expect_header = [](const std::vector<std::string> &f) {
        if (f.size() != kNumColumns)
            throw InputError("table header has the wrong number of columns");
        for (std::size_t i = 0; i < kNumColumns; ++i)
            if (f[i] != kColumns[i])
                throw InputError("unexpected table column '" + f[i] + "'");
    };
    while (std::getline(in, line)) {
        ++no;
        if (trim(line).empty())
            continue;
        std::vector<std::string> fields;
        if (format == TableFormat::Csv) {
            fields = csv_split(line);
        } else {
            const std::string t = trim(line);
            if (t.size() < 2 || t.front() != '|' || t.back() != '|')
                throw InputError("table line " + std::to_string(no) + " is not a markdown row");
            std::stringstream ss(t.substr(1, t.size() - 2));
            std::string cell;
            while (std::getline(ss, cell, '|'))
                fields.push_back(trim(cell));
            if (no == 2 || std::all_of(fields.begin(), fields.end(), [](const std::string &c) {
                    return !c.empty() && c.find_first_not_of("-:") == std::string::npos;
                }))
                continue;
        }
        if (no == 1) {
            expect_header(fields);
            continue;
        }
        try {
            rows.push_back(row_from_fields(fields));
        } catch (const InputError &e) {
            throw InputError("table line " + std::to_string(no) + ": " + e.what());
        }
    }
    return rows;
}

TableRun run_table(const Dataset &d, Mode mode, unsigned jobs) {
    TableRun out;
    for (const auto &g : d.groups) {
        const auto data = coinvariant_data(g);
        if (!data) {
            out.warnings.push_back("group " + g.name + ": no coinvariant data, skipped");
            continue;
        }
        if (mode == Mode::Exact && !data->obar)
            out.warnings.push_back("group " + g.name +
                                   ": exact mode requested without O(M) image generators; "
                                   "downgraded to permissive");
        ClassifyOptions opt;
        opt.mode = mode;
        opt.jobs = jobs;
        auto rows = classify(g.invariant, *data, g.name, opt);
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }
    return out;
}

} // namespace k3lat
