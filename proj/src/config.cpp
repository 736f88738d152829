#include "zdl/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "zdl/errors.hpp"

namespace zdl {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw Error(ErrorKind::Config, "key '" + key + "': not a number: " + v);
    return out;
}

long parse_integer(const std::string& key, const std::string& v) {
    const double d = parse_number(key, v);
    if (d != static_cast<double>(static_cast<long>(d))) throw Error(ErrorKind::Config, "key '" + key + "': expected an integer");
    return static_cast<long>(d);
}

std::string parse_string(const std::string& key, const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    throw Error(ErrorKind::Config, "key '" + key + "': expected a quoted string");
}

using Setter = std::function<void(Settings&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"eval.k_max", [](Settings& s, auto& k, auto& v) { s.eval.k_max = static_cast<int>(parse_integer(k, v)); }},
        {"eval.pole_guard", [](Settings& s, auto& k, auto& v) { s.eval.pole_guard = parse_number(k, v); }},
        {"eval.output_bits", [](Settings& s, auto& k, auto& v) { s.eval.output_bits = static_cast<int>(parse_integer(k, v)); }},
        {"eval.guard_base", [](Settings& s, auto& k, auto& v) { s.eval.guard_base = static_cast<int>(parse_integer(k, v)); }},
        {"eval.guard_per_log_t", [](Settings& s, auto& k, auto& v) { s.eval.guard_per_log_t = parse_number(k, v); }},
        {"eval.sigma_k", [](Settings& s, auto& k, auto& v) { s.eval.sigma_k = parse_number(k, v); }},
        {"eval.max_terms", [](Settings& s, auto& k, auto& v) { s.eval.max_terms = parse_integer(k, v); }},
        {"scan.t_max", [](Settings& s, auto& k, auto& v) { s.scan.t_max = parse_number(k, v); }},
        {"scan.sigma_left", [](Settings& s, auto& k, auto& v) { s.scan.sigma_left = parse_number(k, v); }},
        {"scan.sigma_right", [](Settings& s, auto& k, auto& v) { s.scan.sigma_right = parse_number(k, v); }},
        {"scan.t_floor", [](Settings& s, auto& k, auto& v) { s.scan.t_floor = parse_number(k, v); }},
        {"scan.tile_height", [](Settings& s, auto& k, auto& v) { s.scan.tile_height = parse_number(k, v); }},
        {"scan.threads", [](Settings& s, auto& k, auto& v) { s.scan.threads = static_cast<int>(parse_integer(k, v)); }},
        {"store.path", [](Settings& s, auto& k, auto& v) { s.store.path = parse_string(k, v); }},
    };
    return table;
}

void validate(const Settings& s) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw Error(ErrorKind::Config, msg);
    };
    require(s.eval.k_max >= 0 && s.eval.k_max <= 8, "eval.k_max must lie in [0, 8]");
    require(s.eval.pole_guard > 0.0, "eval.pole_guard must be positive");
    require(s.eval.output_bits >= 16, "eval.output_bits must be at least 16");
    require(s.eval.guard_base >= 0 && s.eval.guard_per_log_t >= 0.0, "guard bits must be nonnegative");
    require(s.eval.sigma_k >= 10.0 && s.eval.sigma_k < 40.0, "eval.sigma_k must lie in [10, 40)");
    require(s.eval.max_terms >= 64, "eval.max_terms must be at least 64");
    require(s.scan.t_max > 0.0, "scan.t_max must be positive");
    require(s.scan.sigma_left > 0.0 && s.scan.sigma_left < 0.5, "scan.sigma_left must lie in (0, 1/2)");
    require(s.scan.sigma_right > 1.0 && s.scan.sigma_right < 40.0, "scan.sigma_right must lie in (1, 40)");
    require(s.scan.t_floor > 0.0 && s.scan.t_floor < 14.0, "scan.t_floor must lie in (0, 14)");
    require(s.scan.tile_height > 0.0, "scan.tile_height must be positive");
    require(s.scan.threads >= 0, "scan.threads must be nonnegative");
}

}  // namespace

Settings Settings::from_string(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // '#' starts a comment unless it appears inside a quoted string.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        const std::string l = trim(line);
        if (l.empty()) continue;
        if (l.front() == '[') {
            if (l.back() != ']') throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": bad section header");
            section = trim(std::string_view(l).substr(1, l.size() - 2));
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(l).substr(0, eq));
        const std::string value = trim(std::string_view(l).substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        const auto it = setters().find(key);
        if (it == setters().end()) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
        it->second(s, key, value);
    }
    validate(s);
    return s;
}

Settings Settings::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Settings Settings::from_env() {
    if (const char* p = std::getenv("ZDL_CONFIG"); p != nullptr && *p != '\0') return from_file(p);
    return Settings{};
}

std::string Settings::canonical() const {
    std::ostringstream o;
    o.precision(17);
    o << "eval.k_max=" << eval.k_max << ";eval.pole_guard=" << eval.pole_guard
      << ";eval.output_bits=" << eval.output_bits << ";eval.guard_base=" << eval.guard_base
      << ";eval.guard_per_log_t=" << eval.guard_per_log_t << ";eval.sigma_k=" << eval.sigma_k
      << ";eval.max_terms=" << eval.max_terms << ";scan.t_max=" << scan.t_max
      << ";scan.sigma_left=" << scan.sigma_left << ";scan.sigma_right=" << scan.sigma_right
      << ";scan.t_floor=" << scan.t_floor << ";scan.tile_height=" << scan.tile_height
      << ";store.path=" << store.path;
    return o.str();
}

}  // namespace zdl
