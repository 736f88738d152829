// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "zdl/countlab.hpp"
#include "zdl/errors.hpp"
#include "zdl/zerostore.hpp"

using namespace zdl;
namespace fs = std::filesystem;

namespace {

const eval::PrecisionPolicy kPolicy{};
const Settings kSettings{};

struct Outcome {
    bool pass = false;
    std::string detail;
};

double g_max_residual = 0.0;
long g_windings = 0;

void note_residual(double r) {
    g_max_residual = std::max(g_max_residual, r);
    ++g_windings;
}

std::string num(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

const scan::StripScan& strip(int k) {
    static std::map<int, scan::StripScan> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        it = cache.emplace(k, scan::scan_strip(k, 500.0, kPolicy, kSettings)).first;
        note_residual(it->second.stats.max_residual);
    }
    return it->second;
}

Outcome baseline_count() {
    const std::string cmd = std::string("'") + ZDL_CLI_PATH + "' --no-store count --k 0 --T 100 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {false, "cannot start the CLI"};
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    const int status = pclose(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int n_cli = -1;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
        if (line.rfind("0,100,", 0) == 0) n_cli = std::stoi(line.substr(6, line.find(',', 6) - 6));

    const auto w = arg::winding_number(arg::FunctionId::zeta(0), arg::RectRegion(1e-6, 30.0, 1.0, 100.0), kPolicy);
    note_residual(w.residual);
    const auto sign_changes = scan::critical_line_zeros(1.0, 100.0, kPolicy, kSettings);
    const bool ok = status == 0 && n_cli == 29 && w.count == 29 && sign_changes.size() == 29 && secs < 60.0;
    return {ok, "cli n_exact=" + std::to_string(n_cli) + " winding=" + std::to_string(w.count) +
                    " sign_changes=" + std::to_string(sign_changes.size()) + " runtime=" + num(secs, 3) + "s (limit 60s)"};
}

std::map<std::pair<int, double>, count::CountReport> g_counts;

const count::CountReport& counted(int k, double T) {
    auto it = g_counts.find({k, T});
    if (it == g_counts.end()) {
        it = g_counts.emplace(std::make_pair(k, T), count::count(k, T, kPolicy, kSettings, strip(k))).first;
        note_residual(it->second.max_winding_residual);
    }
    return it->second;
}

Outcome dual_count() {
    int checked = 0;
    std::string bad;
    for (int k = 0; k <= 3; ++k) {
        for (double T : {50.0, 100.0, 200.0, 500.0}) {
            try {
                const auto& r = counted(k, T);
                ++checked;
                if (r.n_exact != r.n_winding)
                    bad += " k=" + std::to_string(k) + ",T=" + num(T) + ":" + std::to_string(r.n_exact) + "!=" +
                           std::to_string(r.n_winding);
            } catch (const Error& e) {
                bad += std::string(" k=") + std::to_string(k) + ",T=" + num(T) + ": " + e.what();
            }
        }
    }
    std::string detail = std::to_string(checked) + "/16 pairs equal";
    for (double T : {50.0, 100.0, 200.0, 500.0})
        if (g_counts.count({0, T})) detail += " N_0(" + num(T) + ")=" + std::to_string(g_counts.at({0, T}).n_exact);
    return {bad.empty() && checked == 16, bad.empty() ? detail : detail + ";" + bad};
}

Outcome main_term_consistency() {
    bool ok = true;
    std::string detail;
    std::map<double, double> per_run;
    for (int k = 1; k <= 3; ++k) {
        for (double T : {50.0, 100.0, 200.0, 500.0}) {
            const auto& r = counted(k, T);
            if (!(std::fabs(r.e_term) <= 2.0 * std::log(T))) {
                ok = false;
                detail += " |E_" + std::to_string(k) + "(" + num(T) + ")|=" + num(std::fabs(r.e_term)) + ">2logT";
            }
            const double ratio = std::fabs(r.e_term) / (std::log(T) / std::log(std::log(T)));
            per_run[T] = std::max(per_run[T], ratio);
        }
    }
    const double m200 = per_run[200.0];
    const double m500 = per_run[500.0];
    const double drift = m500 / m200 - 1.0;
    ok = ok && std::isfinite(m200) && std::isfinite(m500) && std::fabs(drift) <= 0.2;
    return {ok, "max |E|/(logT/loglogT): T=200 " + num(m200) + ", T=500 " + num(m500) + ", drift " +
                    num(100.0 * drift, 3) + "% (limit 20%)" + detail};
}

Outcome negativity() {
    std::vector<double> ts;
    for (double t = 100.0; t <= 1000.0; t += 50.0) ts.push_back(t);
    const std::vector<double> sigmas{0.1, 0.2, 0.3, 0.4, 0.5};
    int neg = 0, nonneg = 0, skipped = 0;
    for (int ell = 1; ell <= 3; ++ell) {
        const auto rep = count::lemma4_scan(ell, sigmas, ts, kPolicy, kSettings);
        neg += rep.negative;
        nonneg += rep.nonnegative;
        skipped += rep.skipped;
    }
    const int total = neg + nonneg + skipped;
    const double skip_frac = static_cast<double>(skipped) / total;
    return {nonneg == 0 && skip_frac < 0.01 && total == 3 * 5 * 19,
            std::to_string(neg) + " negative, " + std::to_string(nonneg) + " nonnegative, " + std::to_string(skipped) +
                " skipped of " + std::to_string(total)};
}

Outcome critical_reality() {
    double worst_im = 0.0, worst_excess = -1.0;
    int points = 0;
    for (int i = 0; i <= 1980; ++i) {
        const double t = 10.0 + 0.5 * i;
        const auto r = eval::eval_h_zeta(eval::CPoint(0.5, t), kPolicy);
        const double im = std::fabs(r.value.im().to_double());
        worst_im = std::max(worst_im, im);
        worst_excess = std::max(worst_excess, im - r.radius());
        ++points;
    }
    return {worst_excess <= 0.0, std::to_string(points) + " points, max |Im h zeta|=" + num(worst_im, 3) +
                                     ", max(|Im| - radius)=" + num(worst_excess, 3)};
}

Outcome winding_integrality() {
    return {g_max_residual <= 1e-6, "max residual " + num(g_max_residual, 3) + " over " + std::to_string(g_windings) +
                                        " winding batches (limit 1e-6)"};
}

Outcome derivative_consistency() {
    const double h = 1e-4;
    double worst = 0.0;
    for (const eval::CPoint s : {eval::CPoint(2.0, 10.0), eval::CPoint(3.0, 50.0)}) {
        for (int k = 0; k <= 2; ++k) {
            const auto up = eval::eval_zeta_deriv(eval::CPoint(s.re + h, s.im), k, kPolicy).approx();
            const auto dn = eval::eval_zeta_deriv(eval::CPoint(s.re - h, s.im), k, kPolicy).approx();
            const auto next = eval::eval_zeta_deriv(s, k + 1, kPolicy).approx();
            worst = std::max(worst, std::abs((up - dn) / (2.0 * h) - next) / std::abs(next));
        }
    }
    return {worst < 1e-6, "max relative error " + num(worst, 3) + " (limit 1e-6)"};
}

Outcome normalization() {
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k)
        for (double t : {10.0, 100.0, 1000.0})
            worst = std::max(worst, std::abs(eval::eval_G(eval::CPoint(30.0, t), k, kPolicy).approx() - 1.0));
    return {worst < 1e-4, "max |G_k(30+it) - 1| = " + num(worst, 3) + " (limit 1e-4)"};
}

Outcome f_identity() {
    auto zeros = strip(1).records;
    const auto upper = scan::scan_window(1, 500.0, 551.0, kPolicy, kSettings);
    note_residual(upper.stats.max_residual);
    zeros.insert(zeros.end(), upper.records.begin(), upper.records.end());
    bool ok = true;
    std::string detail;
    for (double t : {200.0, 500.0}) {
        const auto f = count::f_sum(1, t, 50.0, zeros, kPolicy, kSettings);
        ok = ok && std::fabs(f.difference) <= 1.0 + f.tail_bound && f.value >= 0.0;
        detail += "t=" + num(t) + ": diff " + num(f.difference) + " (limit " + num(1.0 + f.tail_bound) + ") ";
    }
    return {ok, detail};
}

Outcome boxes() {
    const auto p = count::box_partition(1000.0);
    const auto w = scan::scan_window(1, 998.0, 1002.0, kPolicy, kSettings);
    note_residual(w.stats.max_residual);
    const auto bc = count::box_counts(1, p, w.records, count::BoundProfile::log_over_loglog());
    int sum = 0;
    std::string per;
    for (const auto& b : bc.boxes) {
        sum += b.count;
        per += " R" + std::to_string(b.j) + "=" + std::to_string(b.count);
    }
    return {bc.membership_ok && sum == bc.domain_total,
            "N=" + std::to_string(p.n_boxes) + " X=" + num(p.X, 4) + per + " total=" + std::to_string(bc.domain_total) +
                " membership " + (bc.membership_ok ? "ok" : "broken")};
}

Outcome store_round_trip() {
    const fs::path dir = fs::temp_directory_path() / "zdl_acceptance_store";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::uint64_t fp = kPolicy.fingerprint();
    bool ok = true;
    std::string detail;

    store::StoreSegment a;
    a.k = 0;
    a.t_range = {1.0, 300.0};
    a.policy_fingerprint = fp;
    for (const auto& r : strip(0).records)
        if (r.gamma < 300.0) a.records.push_back(r);
    a.created_at = "2026-01-01T00:00:00Z";
    a.tool_version = "acceptance";
    store::StoreSegment b = a;
    b.t_range = {300.0, 500.0};
    b.records.clear();
    for (const auto& r : strip(0).records)
        if (r.gamma >= 300.0 && r.gamma < 500.0) b.records.push_back(r);

    const std::string main_path = (dir / "main.zdl").string();
    {
        store::ZeroStore s(main_path);
        s.put_segment(a);
        s.put_segment(b);
        for (auto f : {store::Format::csv, store::Format::jsonl}) {
            const std::string first = s.export_range(0, 1.0, 500.0, fp, f);
            store::ZeroStore copy((dir / (f == store::Format::csv ? "csv.zdl" : "jsonl.zdl")).string());
            copy.import_range(first, f, 0, 1.0, 500.0, fp);
            const bool same = copy.export_range(0, 1.0, 500.0, fp, f) == first;
            ok = ok && same;
            detail += std::string(f == store::Format::csv ? "csv" : "jsonl") + (same ? " identical, " : " differs, ");
        }
    }

    // tear the last frame and reopen
    const auto full = fs::file_size(main_path);
    fs::resize_file(main_path, full - 9);
    {
        store::ZeroStore s(main_path);
        const auto r = s.get_range(0, 1.0, 500.0, fp);
        const bool recovered = s.recovery().segments_loaded == 1 && r.records == a.records && r.gaps.size() == 1 &&
                               r.gaps[0] == store::Interval{300.0, 500.0};
        ok = ok && recovered;
        detail += "torn tail: kept " + std::to_string(s.recovery().segments_loaded) + " segment(s), dropped " +
                  std::to_string(s.recovery().discarded_bytes) + " bytes";
        s.put_segment(b);
    }
    ok = ok && fs::file_size(main_path) == full;
    fs::remove_all(dir);
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"baseline count N(100) = 29", baseline_count},
        {"dual-count equality k<=3, T in {50,100,200,500}", dual_count},
        {"main-term consistency k in {1,2,3}", main_term_consistency},
        {"negativity of zeta^(l)/zeta^(l-1) for sigma <= 1/2", negativity},
        {"reality of h zeta on the critical line", critical_reality},
        {"derivative consistency by finite differences", derivative_consistency},
        {"G_k normalization at sigma = 30", normalization},
        {"F_1 identity at t in {200, 500}", f_identity},
        {"box diagnostics at T = 1000, k = 1", boxes},
        {"store round-trip and torn-tail recovery", store_round_trip},
        {"winding integrality", winding_integrality},
    };
    // criterion numbering follows the order of the acceptance list
    const int order[] = {1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 6};
    std::map<int, std::string> lines;
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " [" << order[i] << "] " << criteria[i].first << ": " << o.detail << " ("
             << num(secs, 3) << "s)";
        lines[order[i]] = line.str();
    }
    for (const auto& [n, line] : lines) std::cout << line << "\n";
    std::cout << (failed ? "FAIL" : "PASS") << " overall: " << (11 - failed) << "/11 criteria met\n";
    return failed ? 1 : 0;
}
