#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "testcat/contingency.hpp"
#include "testcat/dataset.hpp"

namespace testhelp {

inline std::string pad2(std::uint32_t v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

// dataset whose two columns realize the given contingency counts; labels are
// zero-padded so dictionary order matches cell indices
inline testcat::CategoricalDataset dataset_from_table(
    const std::vector<std::vector<std::int64_t>>& counts) {
    std::vector<std::vector<std::string>> rows;
    for (std::uint32_t i = 0; i < counts.size(); ++i)
        for (std::uint32_t j = 0; j < counts[i].size(); ++j)
            for (std::int64_t c = 0; c < counts[i][j]; ++c)
                rows.push_back({"r" + pad2(i), "c" + pad2(j)});
    return testcat::make_dataset({"a", "b"}, rows);
}

inline testcat::CategoricalDataset random_dataset(std::mt19937_64& eng, std::uint32_t n,
                                                  const std::vector<std::uint32_t>& cards) {
    std::vector<std::vector<std::string>> rows(n);
    for (std::uint32_t r = 0; r < n; ++r) {
        rows[r].reserve(cards.size());
        for (std::uint32_t m = 0; m < cards.size(); ++m)
            rows[r].push_back("v" + pad2(static_cast<std::uint32_t>(eng() % cards[m])));
    }
    std::vector<std::string> names;
    for (std::uint32_t m = 0; m < cards.size(); ++m) names.push_back("x" + pad2(m));
    return testcat::make_dataset(std::move(names), rows);
}

// the worked three-table example: same marginals, decreasing association
inline testcat::ContingencyTable ds1_table() {
    return testcat::ContingencyTable::from_counts({{20, 5}, {20, 55}});
}
inline testcat::ContingencyTable ds2_table() {
    return testcat::ContingencyTable::from_counts({{15, 10}, {25, 50}});
}
inline testcat::ContingencyTable ds3_table() {
    return testcat::ContingencyTable::from_counts({{10, 15}, {30, 45}});
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

// runs a shell command, captures stdout and the exit code
inline CmdResult run_cmd(const std::string& cmd) {
    CmdResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
    int rc = pclose(pipe);
    if (WIFEXITED(rc)) res.exit_code = WEXITSTATUS(rc);
    return res;
}

inline std::string read_file(const std::string& path) {
    std::string text;
    FILE* f = fopen(path.c_str(), "rb");
    if (!f) return text;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, got);
    fclose(f);
    return text;
}

}  // namespace testhelp
