#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace testcat {

enum class MissingPolicy { own_category, drop_row };

struct IngestOptions {
    char delimiter = ',';
    bool has_header = true;
    std::string missing_token = "?";
    MissingPolicy missing_policy = MissingPolicy::own_category;
    // each entry is an attribute name or a 0-based column index in decimal
    std::vector<std::string> drop_columns;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// immutable after construction; safe to share across threads
struct CategoricalDataset {
    std::vector<std::string> attribute_names;            // size M
    std::vector<std::vector<std::string>> dictionaries;  // per attribute, sorted labels
    std::vector<std::uint32_t> cells;                    // row-major, n_objects * n_attributes
    std::uint32_t n_objects = 0;
    std::uint32_t n_attributes = 0;

    std::uint32_t at(std::uint32_t row, std::uint32_t attr) const {
        return cells[static_cast<std::size_t>(row) * n_attributes + attr];
    }
    std::uint32_t cardinality(std::uint32_t attr) const {
        return static_cast<std::uint32_t>(dictionaries[attr].size());
    }
    const std::string& label(std::uint32_t attr, std::uint32_t index) const {
        return dictionaries[attr][index];
    }
};

CategoricalDataset load_csv(std::istream& in, const IngestOptions& opts = {});
CategoricalDataset load_csv_file(const std::string& path, const IngestOptions& opts = {});

// encodes string rows directly; used by synthesis and tests
CategoricalDataset make_dataset(std::vector<std::string> names,
                                const std::vector<std::vector<std::string>>& rows);

std::vector<std::uint32_t> category_counts(const CategoricalDataset& ds);

void write_csv(const CategoricalDataset& ds, std::ostream& out, char delimiter = ',',
               bool header = true);

}  // namespace testcat
