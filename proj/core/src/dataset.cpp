#include "testcat/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace testcat {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delimiter) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

// resolves drop entries against names first, then as 0-based indices
std::vector<bool> keep_mask(const std::vector<std::string>& names,
                            const std::vector<std::string>& drop) {
    std::vector<bool> keep(names.size(), true);
    for (const auto& entry : drop) {
        auto it = std::find(names.begin(), names.end(), entry);
        std::size_t idx;
        if (it != names.end()) {
            idx = static_cast<std::size_t>(it - names.begin());
        } else if (all_digits(entry)) {
            idx = static_cast<std::size_t>(std::stoull(entry));
            if (idx >= names.size())
                throw ParseError("drop column index " + entry + " out of range (" +
                                 std::to_string(names.size()) + " columns)");
        } else {
            throw ParseError("drop column '" + entry + "' matches no attribute name");
        }
        keep[idx] = false;
    }
    return keep;
}

CategoricalDataset encode(std::vector<std::string> names,
                          const std::vector<std::vector<std::string>>& rows) {
    CategoricalDataset ds;
    ds.n_attributes = static_cast<std::uint32_t>(names.size());
    ds.n_objects = static_cast<std::uint32_t>(rows.size());
    ds.attribute_names = std::move(names);
    ds.dictionaries.resize(ds.n_attributes);

    std::vector<std::map<std::string, std::uint32_t>> index(ds.n_attributes);
    for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
        std::set<std::string> distinct;
        for (const auto& row : rows) distinct.insert(row[m]);
        auto& dict = ds.dictionaries[m];
        dict.assign(distinct.begin(), distinct.end());  // set iterates in sorted order
        for (std::uint32_t i = 0; i < dict.size(); ++i) index[m][dict[i]] = i;
    }

    ds.cells.resize(static_cast<std::size_t>(ds.n_objects) * ds.n_attributes);
    for (std::uint32_t r = 0; r < ds.n_objects; ++r)
        for (std::uint32_t m = 0; m < ds.n_attributes; ++m)
            ds.cells[static_cast<std::size_t>(r) * ds.n_attributes + m] = index[m][rows[r][m]];
    return ds;
}

}  // namespace

CategoricalDataset load_csv(std::istream& in, const IngestOptions& opts) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }

    std::size_t pos = 0;
    while (pos < lines.size() && lines[pos].empty()) ++pos;
    if (pos == lines.size()) throw ParseError("empty input");

    std::vector<std::string> names;
    std::size_t n_columns;
    std::size_t first_data = pos;
    if (opts.has_header) {
        names = split_line(lines[pos], opts.delimiter);
        n_columns = names.size();
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second)
                throw ParseError("duplicate column name '" + n + "' in header");
        first_data = pos + 1;
    } else {
        n_columns = split_line(lines[pos], opts.delimiter).size();
        for (std::size_t c = 0; c < n_columns; ++c) names.push_back("c" + std::to_string(c));
    }

    auto keep = keep_mask(names, opts.drop_columns);
    std::vector<std::string> kept_names;
    for (std::size_t c = 0; c < n_columns; ++c)
        if (keep[c]) kept_names.push_back(names[c]);
    if (kept_names.empty()) throw ParseError("all columns dropped");

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = first_data; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split_line(lines[i], opts.delimiter);
        if (fields.size() != n_columns)
            throw ParseError("line " + std::to_string(i + 1) + ": expected " +
                             std::to_string(n_columns) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<std::string> row;
        row.reserve(kept_names.size());
        bool missing = false;
        for (std::size_t c = 0; c < n_columns; ++c) {
            if (!keep[c]) continue;
            if (fields[c] == opts.missing_token) missing = true;
            row.push_back(std::move(fields[c]));
        }
        if (missing && opts.missing_policy == MissingPolicy::drop_row) continue;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows after ingestion");

    return encode(std::move(kept_names), rows);
}

CategoricalDataset load_csv_file(const std::string& path, const IngestOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_csv(in, opts);
}

CategoricalDataset make_dataset(std::vector<std::string> names,
                                const std::vector<std::vector<std::string>>& rows) {
    if (names.empty()) throw ParseError("dataset needs at least one attribute");
    if (rows.empty()) throw ParseError("dataset needs at least one row");
    for (const auto& row : rows)
        if (row.size() != names.size())
            throw ParseError("row width " + std::to_string(row.size()) +
                             " does not match attribute count " + std::to_string(names.size()));
    return encode(std::move(names), rows);
}

std::vector<std::uint32_t> category_counts(const CategoricalDataset& ds) {
    std::vector<std::uint32_t> counts(ds.n_attributes);
    for (std::uint32_t m = 0; m < ds.n_attributes; ++m) counts[m] = ds.cardinality(m);
    return counts;
}

void write_csv(const CategoricalDataset& ds, std::ostream& out, char delimiter, bool header) {
    if (header) {
        for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
            if (m) out << delimiter;
            out << ds.attribute_names[m];
        }
        out << '\n';
    }
    for (std::uint32_t r = 0; r < ds.n_objects; ++r) {
        for (std::uint32_t m = 0; m < ds.n_attributes; ++m) {
            if (m) out << delimiter;
            out << ds.label(m, ds.at(r, m));
        }
        out << '\n';
    }
}

}  // namespace testcat
