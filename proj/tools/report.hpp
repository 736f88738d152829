#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zdl::cli {

/// A CSV table preceded by `#` provenance lines. Rendering is deterministic.
struct Report {
    std::string name;
    std::vector<std::string> header_lines;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    [[nodiscard]] std::string render() const;
};

std::string fmt(double v);
std::string fmt(int v);
std::string fmt(long v);

/// `start:stop:step` (stop excluded), a comma list, or a single number.
std::vector<double> parse_grid(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);

}  // namespace zdl::cli
