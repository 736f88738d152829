#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "zdl/countlab.hpp"
#include "zdl/errors.hpp"
#include "zdl/hash.hpp"
#include "zdl/pipeline.hpp"
#include "zdl/version.hpp"
#include "zdl/zerostore.hpp"

namespace {

using namespace zdl;
using cli::fmt;
using cli::Report;

struct Globals {
    std::string config_path;
    std::string store_path;
    std::string out_dir;
    int prec_bits = 0;
    int threads = -1;
    bool no_store = false;
};

struct Context {
    Settings settings;
    eval::PrecisionPolicy policy;
    std::unique_ptr<store::ZeroStore> store;
    std::string command_line;
    std::string created_at;

    store::ZeroStore* db() { return store.get(); }
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Context make_context(const Globals& g, const std::string& command_line) {
    Context c;
    c.settings = g.config_path.empty() ? Settings::from_env() : Settings::from_file(g.config_path);
    if (g.prec_bits > 0) c.settings.eval.output_bits = g.prec_bits;
    if (g.prec_bits < 0 || (g.prec_bits > 0 && g.prec_bits < 16))
        throw Error(ErrorKind::Config, "--prec-bits must be at least 16");
    if (g.threads >= 0) c.settings.scan.threads = g.threads;
    if (!g.store_path.empty()) c.settings.store.path = g.store_path;
    c.policy = eval::PrecisionPolicy::from(c.settings.eval);
    if (!g.no_store) c.store = std::make_unique<store::ZeroStore>(c.settings.store.path);
    c.command_line = command_line;
    c.created_at = utc_now();
    return c;
}

void header(Report& r, Context& c) {
    r.header_lines.push_back(std::string("tool_version=") + kToolVersion);
    r.header_lines.push_back("command=" + c.command_line);
    r.header_lines.push_back("config=" + c.settings.canonical());
    r.header_lines.push_back("policy_fingerprint=" + to_hex(c.policy.fingerprint()));
    if (c.store)
        r.header_lines.push_back("store=" + c.store->path() + " store_fingerprint=" + to_hex(c.store->fingerprint()));
    else
        r.header_lines.push_back("store=none");
}

void emit(Report& r, Context& c, const Globals& g) {
    header(r, c);
    const std::string text = r.render();
    if (g.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    const std::filesystem::path p = std::filesystem::path(g.out_dir) / (r.name + ".csv");
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorKind::Config, "cannot write " + p.string());
    f << text;
    std::cout << "wrote " << p.string() << " (" << r.rows.size() << " rows)\n";
}

std::string tag(double v) {
    std::string s = fmt(v);
    for (char& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

void check_order(int k, const Context& c, int lo = 0) {
    if (k < lo || k > c.settings.eval.k_max)
        throw Error(ErrorKind::Config, "order " + std::to_string(k) + " outside " + std::to_string(lo) + "..k_max");
}

// ---- commands -------------------------------------------------------------

void cmd_scan(Context& c, const Globals& g, int k, double t_max, const std::string& format) {
    check_order(k, c);
    const store::Format f = store::format_from_string(format);
    const auto zeros = pipeline::zeros_in(c.db(), k, c.settings.scan.t_floor, t_max, c.policy, c.settings, c.created_at);
    Report r;
    r.name = "scan_k" + std::to_string(k) + "_T" + tag(t_max);
    if (f == store::Format::csv) {
        r.columns = {"k", "beta", "gamma", "multiplicity", "error_radius", "method"};
        for (const auto& z : zeros)
            r.add_row({fmt(z.k), fmt(z.beta), fmt(z.gamma), fmt(z.multiplicity), fmt(z.error_radius),
                       std::string(scan::to_string(z.method))});
        r.notes.push_back(std::to_string(zeros.size()) + " zeros with " + fmt(c.settings.scan.t_floor) +
                          " <= gamma < " + fmt(t_max));
        emit(r, c, g);
        return;
    }
    std::ostringstream out;
    for (const auto& z : zeros) {
        out << "{\"beta\":" << fmt(z.beta) << ",\"error_radius\":" << fmt(z.error_radius) << ",\"gamma\":"
            << fmt(z.gamma) << ",\"k\":" << z.k << ",\"method\":\"" << scan::to_string(z.method)
            << "\",\"multiplicity\":" << z.multiplicity << "}\n";
    }
    if (g.out_dir.empty()) {
        std::cout << out.str();
    } else {
        std::filesystem::create_directories(g.out_dir);
        std::ofstream(std::filesystem::path(g.out_dir) / (r.name + ".jsonl"), std::ios::binary) << out.str();
    }
}

void cmd_count(Context& c, const Globals& g, const std::string& ks, const std::string& Ts, const std::string& phi) {
    const auto orders = cli::parse_int_list(ks);
    auto heights = cli::parse_grid(Ts);
    const count::BoundProfile profile = count::BoundProfile::parse(phi);
    Report r;
    r.name = "count";
    r.columns = {"k", "T", "n_exact", "main_term", "e_term", "arg_Gk_top", "arg_zeta_top", "ratio_log", "ratio_loglog",
                 "ratio_fgh"};
    const double t_top = *std::max_element(heights.begin(), heights.end());
    for (int k : orders) {
        check_order(k, c);
        const scan::StripScan s = pipeline::strip_from_store(c.db(), k, t_top, c.policy, c.settings, c.created_at);
        for (double T : heights) {
            const count::CountReport rep = count::count(k, T, c.policy, c.settings, s, {profile});
            r.add_row({fmt(k), fmt(rep.T), fmt(rep.n_exact), fmt(rep.main_term), fmt(rep.e_term),
                       fmt(rep.edge_contribs.top_arg_G), fmt(rep.edge_contribs.top_arg_zeta),
                       fmt(rep.bound_ratios.at("log")), fmt(rep.bound_ratios.at("loglog")),
                       fmt(rep.bound_ratios.at("fgh"))});
            r.notes.push_back("k=" + fmt(k) + " T=" + fmt(rep.T) + " n_winding=" + fmt(rep.n_winding) +
                              " bottom=" + fmt(rep.edge_contribs.bottom) + " right=" + fmt(rep.edge_contribs.right) +
                              " remainder=" + fmt(rep.remainder) + " ratio_" + profile.name + "=" +
                              fmt(rep.bound_ratios.at(profile.name)) +
                              " max_residual=" + fmt(rep.max_winding_residual));
            for (const auto& w : rep.warnings) r.notes.push_back("k=" + fmt(k) + " warning: " + w);
        }
    }
    emit(r, c, g);
}

void cmd_lemma22(Context& c, const Globals& g, int ell, const std::string& Ts, const std::string& sigmas,
                 const std::string& phi) {
    check_order(ell, c, 1);
    const count::BoundProfile profile = count::BoundProfile::parse(phi);
    Report r;
    r.name = "lemma22_ell" + std::to_string(ell);
    r.columns = {"ell", "T", "sigma", "arg", "envelope", "ratio"};
    double worst = 0.0;
    for (double T : cli::parse_grid(Ts)) {
        for (const auto& p : count::arg_profile(ell, T, cli::parse_grid(sigmas), c.policy, profile, c.settings)) {
            const double ratio = std::fabs(p.arg) / p.envelope;
            worst = std::max(worst, ratio);
            r.add_row({fmt(ell), fmt(p.T), fmt(p.sigma), fmt(p.arg), fmt(p.envelope), fmt(ratio)});
        }
    }
    r.notes.push_back("phi=" + profile.name + " max_ratio=" + fmt(worst));
    emit(r, c, g);
}

void cmd_lemma23(Context& c, const Globals& g, int k, const std::string& sigmas, const std::string& ts) {
    check_order(k, c);
    const auto tgrid = cli::parse_grid(ts);
    Report r;
    r.name = "lemma23_k" + std::to_string(k);
    r.columns = {"k", "sigma", "t", "residual", "residual_no_sum", "zero_sum_norm", "zeros_used"};
    double worst = 0.0;
    for (double t : tgrid) {
        const auto zeros = pipeline::zeros_in(c.db(), k, t - 1.0, t + 1.0, c.policy, c.settings, c.created_at);
        for (double sigma : cli::parse_grid(sigmas)) {
            const auto res = count::lemma23_residual(k, eval::CPoint(sigma, t), zeros, c.policy, c.settings);
            worst = std::max(worst, res.residual);
            r.add_row({fmt(k), fmt(sigma), fmt(t), fmt(res.residual), fmt(res.residual_no_sum), fmt(res.zero_sum_norm),
                       fmt(res.zeros_used)});
        }
    }
    r.notes.push_back("max_residual=" + fmt(worst));
    emit(r, c, g);
}

void cmd_lemma4(Context& c, const Globals& g, int ell, const std::string& ts, const std::string& sigmas) {
    check_order(ell, c, 1);
    const auto rep = count::lemma4_scan(ell, cli::parse_grid(sigmas), cli::parse_grid(ts), c.policy, c.settings);
    Report r;
    r.name = "lemma4_ell" + std::to_string(ell);
    r.columns = {"ell", "sigma", "t", "re", "im", "sign"};
    for (const auto& p : rep.points)
        r.add_row({fmt(ell), fmt(p.sigma), fmt(p.t), fmt(p.re), fmt(p.im), std::string(count::to_string(p.status))});
    r.notes.push_back("negative=" + fmt(rep.negative) + " nonnegative=" + fmt(rep.nonnegative) +
                      " skipped=" + fmt(rep.skipped));
    r.notes.push_back("uniformly_negative_from_t=" + (rep.uniform_from ? fmt(*rep.uniform_from) : std::string("none")));
    emit(r, c, g);
}

void cmd_fsum(Context& c, const Globals& g, int k, const std::string& ts, double window) {
    check_order(k, c);
    Report r;
    r.name = "fsum_k" + std::to_string(k);
    r.columns = {"k", "t", "window", "f_sum", "comparison", "difference", "tail_bound", "zeros_used"};
    for (double t : cli::parse_grid(ts)) {
        const auto zeros = pipeline::zeros_in(c.db(), k, t - window, t + window + 1e-9, c.policy, c.settings, c.created_at);
        const auto f = count::f_sum(k, t, window, zeros, c.policy, c.settings);
        r.add_row({fmt(k), fmt(t), fmt(window), fmt(f.value), fmt(f.comparison), fmt(f.difference), fmt(f.tail_bound),
                   fmt(f.zeros_used)});
        r.notes.push_back("t=" + fmt(t) + ": " + f.truncation_note);
    }
    emit(r, c, g);
}

void cmd_boxes(Context& c, const Globals& g, int k, double T, const std::string& phi) {
    check_order(k, c);
    const count::BoundProfile profile = count::BoundProfile::parse(phi);
    const count::BoxPartition p = count::box_partition(T);
    const auto zeros = pipeline::zeros_in(c.db(), k, T - 1.0, T + 1.0 + 1e-9, c.policy, c.settings, c.created_at);
    const auto bc = count::box_counts(k, p, zeros, profile);
    Report r;
    r.name = "boxes_k" + std::to_string(k) + "_T" + tag(T);
    r.columns = {"k", "T", "j", "Y", "count", "envelope", "ratio"};
    for (const auto& b : bc.boxes)
        r.add_row({fmt(k), fmt(T), fmt(b.j), fmt(b.Y), fmt(b.count), fmt(b.envelope), fmt(b.count / b.envelope)});
    r.notes.push_back("X=" + fmt(p.X) + " N=" + fmt(p.n_boxes) + " domain_total=" + fmt(bc.domain_total) +
                      " membership_ok=" + (bc.membership_ok ? "true" : "false") + " phi=" + profile.name);
    emit(r, c, g);
}

void cmd_theta(Context& c, const Globals& g, int k, double T, std::optional<double> X) {
    check_order(k, c);
    const double x = X.value_or(1.0 / std::sqrt(std::log(T)));
    const auto zeros = pipeline::zeros_in(c.db(), k, T - 1.0, T + 1.0, c.policy, c.settings, c.created_at);
    const auto th = count::theta_sum(k, T, x, zeros, c.policy, c.settings);
    Report r;
    r.name = "theta_k" + std::to_string(k) + "_T" + tag(T);
    r.columns = {"k", "T", "X", "theta_sum", "x_log_t", "bound", "delta_arg", "zeros_used"};
    r.add_row({fmt(k), fmt(T), fmt(x), fmt(th.sum), fmt(th.x_log_t), fmt(th.sum + th.x_log_t), fmt(th.delta_arg),
               fmt(th.zeros_used)});
    emit(r, c, g);
}

void cmd_export(Context& c, const Globals& g, int k, double t0, double t1, const std::string& format) {
    if (!c.store) throw Error(ErrorKind::Config, "export needs a store");
    const store::Format f = store::format_from_string(format);
    const std::string data = c.store->export_range(k, t0, t1, c.policy.fingerprint(), f);
    if (g.out_dir.empty()) {
        std::cout << data;
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    const auto p = std::filesystem::path(g.out_dir) /
                   ("zeros_k" + std::to_string(k) + "_" + tag(t0) + "_" + tag(t1) + (f == store::Format::csv ? ".csv" : ".jsonl"));
    std::ofstream(p, std::ios::binary) << data;
    std::cout << "wrote " << p.string() << "\n";
}

void cmd_import(Context& c, int k, double t0, double t1, const std::string& format, const std::string& file) {
    if (!c.store) throw Error(ErrorKind::Config, "import needs a store");
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot read " + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    c.store->import_range(ss.str(), store::format_from_string(format), k, t0, t1, c.policy.fingerprint(), c.created_at);
    std::cout << "imported into " << c.store->path() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zdl: zeros of zeta derivatives, counts and diagnostics"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "TOML-style config (default: $ZDL_CONFIG)");
    app.add_option("--store", g.store_path, "zero store file (overrides store.path)");
    app.add_option("--out", g.out_dir, "directory for report files (default: stdout)");
    app.add_option("--prec-bits", g.prec_bits, "output bits of the precision policy");
    app.add_option("--threads", g.threads, "worker threads for strip scans (0 = all cores)");
    app.add_flag("--no-store", g.no_store, "compute without reading or writing the store");

    int k = 0;
    int ell = 1;
    double t_max = 0.0;
    double T = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    double window = 50.0;
    double x_value = 0.0;
    std::string ks;
    std::string Ts = "100,200,500,1000";
    std::string ts;
    std::string sigmas;
    std::string phi = "loglog";
    std::string format = "csv";
    std::string file;

    auto* scan = app.add_subcommand("scan", "enumerate zeros of zeta^(k) with gamma < T");
    scan->add_option("--k", k, "derivative order")->required();
    scan->add_option("--t-max", t_max, "height")->required();
    scan->add_option("--format", format, "csv|jsonl");

    auto* cnt = app.add_subcommand("count", "N_k(T), main term and error term");
    cnt->add_option("--k", ks, "orders, e.g. 1 or 0,1,2")->required();
    cnt->add_option("--T", Ts, "heights: list or start:stop:step")->required();
    cnt->add_option("--phi", phi, "extra bound profile: log|loglog|fgh|custom:<expr>");

    auto* diag = app.add_subcommand("diagnose", "proof-ingredient diagnostics");
    diag->require_subcommand(1);
    auto* d22 = diag->add_subcommand("lemma22", "arg G_l off the critical line");
    d22->add_option("--ell", ell)->required();
    d22->add_option("--T", Ts, "heights");
    d22->add_option("--sigma", sigmas, "abscissae in (1/2, 1)")->required();
    d22->add_option("--phi", phi);
    auto* d23 = diag->add_subcommand("lemma23", "partial-fraction residual of G_k'/G_k");
    d23->add_option("--k", k)->required();
    d23->add_option("--sigma", sigmas, "abscissae in [1/2, 1]")->required();
    d23->add_option("--t", ts, "heights")->required();
    auto* d4 = diag->add_subcommand("lemma4", "sign of Re zeta^(l)/zeta^(l-1)");
    d4->add_option("--ell", ell)->required();
    d4->add_option("--t", ts)->required();
    d4->add_option("--sigma", sigmas)->required();
    auto* dfs = diag->add_subcommand("fsum", "F_k(t) against -Re zeta^(k+1)/zeta^(k)");
    dfs->add_option("--k", k)->required();
    dfs->add_option("--t", ts)->required();
    dfs->add_option("--window", window);
    auto* dbx = diag->add_subcommand("boxes", "dyadic box counts near height T");
    dbx->add_option("--k", k)->required();
    dbx->add_option("--T", T)->required();
    dbx->add_option("--phi", phi);
    auto* dth = diag->add_subcommand("theta", "angle sum near height T");
    dth->add_option("--k", k)->required();
    dth->add_option("--T", T)->required();
    auto* x_opt = dth->add_option("--X", x_value, "segment length (default (log T)^-1/2)");

    auto* exp = app.add_subcommand("export", "write cached zeros as csv or jsonl");
    exp->add_option("--k", k)->required();
    exp->add_option("--t0", t0)->required();
    exp->add_option("--t1", t1)->required();
    exp->add_option("--format", format);

    auto* imp = app.add_subcommand("import", "load an export into the store");
    imp->add_option("--k", k)->required();
    imp->add_option("--t0", t0)->required();
    imp->add_option("--t1", t1)->required();
    imp->add_option("--format", format);
    imp->add_option("--file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command_line;
    for (int i = 1; i < argc; ++i) command_line += (i > 1 ? " " : "") + std::string(argv[i]);

    std::string op = "setup";
    try {
        Context c = make_context(g, command_line);
        if (scan->parsed()) {
            op = "scan";
            cmd_scan(c, g, k, t_max, format);
        } else if (cnt->parsed()) {
            op = "count";
            cmd_count(c, g, ks, Ts, phi);
        } else if (d22->parsed()) {
            op = "diagnose lemma22";
            cmd_lemma22(c, g, ell, Ts, sigmas, phi);
        } else if (d23->parsed()) {
            op = "diagnose lemma23";
            cmd_lemma23(c, g, k, sigmas, ts);
        } else if (d4->parsed()) {
            op = "diagnose lemma4";
            cmd_lemma4(c, g, ell, ts, sigmas);
        } else if (dfs->parsed()) {
            op = "diagnose fsum";
            cmd_fsum(c, g, k, ts, window);
        } else if (dbx->parsed()) {
            op = "diagnose boxes";
            cmd_boxes(c, g, k, T, phi);
        } else if (dth->parsed()) {
            op = "diagnose theta";
            cmd_theta(c, g, k, T, x_opt->count() ? std::optional<double>(x_value) : std::nullopt);
        } else if (exp->parsed()) {
            op = "export";
            cmd_export(c, g, k, t0, t1, format);
        } else if (imp->parsed()) {
            op = "import";
            cmd_import(c, k, t0, t1, format, file);
        }
    } catch (const Error& e) {
        std::cerr << "zdl " << op << " failed: " << e.what() << "\n";
        const bool config = e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidArgument;
        return config ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "zdl " << op << " failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
