#pragma once

#include <string>

namespace zdl {

struct EvalSettings {
    int k_max = 4;
    double pole_guard = 1e-3;
    int output_bits = 64;
    int guard_base = 32;
    double guard_per_log_t = 8.0;
    /// Abscissa beyond which |G_k - 1| < 1/2 is expected (checked, not assumed).
    double sigma_k = 30.0;
    long max_terms = 1L << 18;
};

struct ScanSettings {
    double t_max = 5000.0;
    double sigma_left = 1e-6;
    double sigma_right = 30.0;
    /// Lower edge of every strip scan and counting rectangle.
    double t_floor = 1.0;
    double tile_height = 2.0;
    /// Worker threads for tile scans; 0 means hardware concurrency.
    int threads = 0;
};

struct StoreSettings {
    std::string path = "zdl_store.log";
};

struct Settings {
    EvalSettings eval;
    ScanSettings scan;
    StoreSettings store;

    /// Parses a TOML-style file: `[section]` headers, `key = value` lines,
    /// dotted keys (`eval.k_max = 4`) and `#` comments. Unknown keys are errors.
    static Settings from_file(const std::string& path);
    static Settings from_string(const std::string& text);
    /// Defaults, overridden by the file named in ZDL_CONFIG when set.
    static Settings from_env();

    /// Stable one-line rendering of every key, used in report headers.
    [[nodiscard]] std::string canonical() const;
};

}  // namespace zdl
