#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "zdl/errors.hpp"

namespace zdl::cli {

std::string Report::render() const {
    std::string out;
    for (const auto& h : header_lines) out += "# " + h + "\n";
    for (const auto& n : notes) out += "# note: " + n + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(long v) { return std::to_string(v); }

namespace {

double number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw Error(ErrorKind::Config, "not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(number(p));
        if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] > parts[0]))
            throw Error(ErrorKind::Config, "grid '" + spec + "' must be start:stop:step with stop > start, step > 0");
        const double n = std::ceil((parts[1] - parts[0]) / parts[2] - 1e-9);
        if (n > 1e6) throw Error(ErrorKind::Config, "grid '" + spec + "' has too many points");
        for (long i = 0; i < static_cast<long>(n); ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw Error(ErrorKind::Config, "empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (double v : parse_grid(spec)) {
        if (v != std::floor(v)) throw Error(ErrorKind::Config, "expected integers in '" + spec + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace zdl::cli
