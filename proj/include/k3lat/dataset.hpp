#pragma once

// Group datasets (invariant lattices plus coinvariant data), the built-in
// fixtures, and classification-table serialization.

#include "k3lat/classify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3lat {

struct GroupData {
    std::string name;
    std::optional<Integer> symplectic_order;
    std::vector<Lattice> invariant;
    std::optional<Fqm> coinv_disc;
    std::optional<Lattice> coinv_gram;
    /// Generators of the image of O(M) in O(D_M), on `coinv_disc`.
    std::optional<std::vector<FqmHom>> obar;
    /// Symplectic group generators acting on `coinv_gram`.
    std::optional<std::vector<IntMatrix>> g_gens;
};

struct Dataset {
    std::vector<GroupData> groups;
};

/// Parses the line format. Errors are InputErrors prefixed with
/// "<source>:<line>:".
Dataset parse_dataset(const std::string &text, const std::string &source = "<input>");
Dataset load_dataset(const std::string &path);
std::string emit_dataset(const Dataset &d);

/// Invariant lattices of the 15 maximal symplectic groups, with derived
/// coinvariant discriminant forms where they are determined.
const std::string &builtin_fixture_text();
Dataset builtin_fixtures();

/// Lookup ignoring case, spaces, '_', '{', '}' and '$'.
const GroupData *find_group(const Dataset &d, const std::string &name);

/// Coinvariant data usable by `classify`, or nullopt when the group carries
/// none.
std::optional<CoinvariantData> coinvariant_data(const GroupData &g);

enum class TableFormat { Csv, Markdown };
TableFormat parse_table_format(const std::string &s);

std::string emit_table(const std::vector<ClassificationRow> &rows, TableFormat format);
std::vector<ClassificationRow> parse_table(const std::string &text, TableFormat format);

struct TableRun {
    std::vector<ClassificationRow> rows;
    std::vector<std::string> warnings;
};

TableRun run_table(const Dataset &d, Mode mode, unsigned jobs = 1);

/// "a b; c d" or "[[a,b],[c,d]]".
IntMatrix parse_matrix(const std::string &s);
std::string matrix_compact(const IntMatrix &m);

} // namespace k3lat
