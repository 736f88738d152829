#include "zdl/zeroscan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "zdl/errors.hpp"

namespace zdl::scan {
namespace {

using arg::RectRegion;
using arg::WindingReport;

constexpr double kSqrt2 = std::numbers::sqrt2;

double ulp_of(std::complex<double> z) {
    const double m = std::max(std::fabs(z.real()), std::fabs(z.imag()));
    return std::nextafter(m, INFINITY) - m;
}

bool same_zero(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

void sort_records(std::vector<ZeroRecord>& v) {
    std::sort(v.begin(), v.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
    });
}

/// Roots of the monic polynomial with the given power sums (p[1..n]), by
/// Newton's identities and Aberth iteration. Coordinates are pre-scaled.
std::vector<std::complex<double>> roots_from_power_sums(const std::vector<std::complex<double>>& p, int n) {
    std::vector<std::complex<double>> e(static_cast<std::size_t>(n) + 1);
    e[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        std::complex<double> acc = 0.0;
        for (int i = 1; i <= m; ++i) {
            const std::complex<double> term = e[static_cast<std::size_t>(m - i)] * p[static_cast<std::size_t>(i)];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[static_cast<std::size_t>(m)] = acc / static_cast<double>(m);
    }
    // x^n - e1 x^{n-1} + e2 x^{n-2} - ...
    std::vector<std::complex<double>> c(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = (i % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(i)];
    auto eval = [&](std::complex<double> x, std::complex<double>& dv) {
        std::complex<double> v = c[0];
        dv = 0.0;
        for (int i = 1; i <= n; ++i) {
            dv = dv * x + v;
            v = v * x + c[static_cast<std::size_t>(i)];
        }
        return v;
    };
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        z[static_cast<std::size_t>(i)] = 0.4 * std::polar(1.0, 2.0 * std::numbers::pi * (i + 0.25) / n);
    for (int it = 0; it < 200; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> dv;
            const std::complex<double> v = eval(z[static_cast<std::size_t>(i)], dv);
            if (dv == 0.0) continue;
            const std::complex<double> ratio = v / dv;
            std::complex<double> rep = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) rep += 1.0 / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
            const std::complex<double> w = ratio / (1.0 - ratio * rep);
            z[static_cast<std::size_t>(i)] -= w;
            worst = std::max(worst, std::abs(w));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

std::vector<std::complex<double>> seeds_for(const WindingReport& w) {
    const int c = w.count;
    const std::complex<double> center = w.rect.center();
    const double scale = std::max(w.rect.width(), w.rect.height()) / 2.0;
    std::vector<std::complex<double>> ps = arg::boundary_power_sums(w.boundary, center, c);
    std::vector<std::complex<double>> seeds;
    if (c == 1) {
        seeds.push_back(center + ps[1]);
    } else {
        for (int m = 1; m <= c; ++m) ps[static_cast<std::size_t>(m)] /= std::pow(scale, m);
        for (const auto& u : roots_from_power_sums(ps, c)) seeds.push_back(center + u * scale);
    }
    seeds.push_back(center);
    return seeds;
}

class CellSolver {
public:
    CellSolver(int k, const eval::PrecisionPolicy& policy, const Settings& settings)
        : k_(k), f_(arg::FunctionId::zeta(k)), policy_(policy), settings_(settings) {}

    WindingReport wind(const RectRegion& r) {
        ++stats.windings;
        WindingReport w = arg::winding_exact(f_, r, policy_, settings_.eval);
        stats.max_residual = std::max(stats.max_residual, w.residual);
        return w;
    }

    void solve(const WindingReport& root) {
        struct Cell {
            WindingReport w;
            int depth;
        };
        std::vector<Cell> stack;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            Cell cell = std::move(stack.back());
            stack.pop_back();
            const int c = cell.w.count;
            if (c == 0) continue;
            stats.max_depth = std::max(stats.max_depth, cell.depth);
            const RectRegion& r = cell.w.rect;

            std::vector<ZeroRecord> found;
            int mult = 0;
            for (const auto& seed : seeds_for(cell.w)) {
                if (mult >= c) break;
                const auto z = newton_refine(k_, seed, policy_, settings_.eval, &stats.newton_steps);
                if (!z || !r.contains(*z)) continue;
                bool dup = false;
                for (const auto& f : found) dup = dup || same_zero(f.z(), *z);
                if (dup) continue;
                const auto rec = certify(k_, *z, policy_, settings_.eval, &stats);
                if (!rec || !r.contains(rec->z())) continue;
                found.push_back(*rec);
                mult += rec->multiplicity;
            }
            if (mult == c) {
                records.insert(records.end(), found.begin(), found.end());
                continue;
            }

            const double size = std::max(r.width(), r.height());
            if (size < 64.0 * ulp_of(r.center()) || cell.depth > 200) {
                ZeroRecord rec;
                rec.k = k_;
                rec.beta = r.center().real();
                rec.gamma = r.center().imag();
                rec.multiplicity = c;
                rec.error_radius = std::hypot(r.width(), r.height()) / 2.0 + 4.0 * ulp_of(r.center());
                rec.method = Method::winding_bisect;
                records.push_back(rec);
                continue;
            }
            auto [a, b] = split(r);
            if (a.count + b.count != c)
                throw Error(ErrorKind::PrecisionExhausted, "winding additivity failed while splitting", r.center());
            ++stats.splits;
            stack.push_back({std::move(b), cell.depth + 1});
            stack.push_back({std::move(a), cell.depth + 1});
        }
    }

    std::vector<ZeroRecord> records;
    IsolationStats stats;

private:
    std::pair<WindingReport, WindingReport> split(const RectRegion& r) {
        const bool vertical = r.width() >= r.height();
        const double lo = vertical ? r.sigma_min : r.t_min;
        const double hi = vertical ? r.sigma_max : r.t_max;
        const double mid0 = lo + (hi - lo) / 2.0;
        for (int n = 0; n < 32; ++n) {
            const double off = (n == 0) ? 0.0 : (n % 2 == 1 ? 1.0 : -1.0) * (hi - lo) * 0x1p-7 * ((n + 1) / 2);
            const double mid = mid0 + off;
            try {
                if (vertical)
                    return {wind(RectRegion(r.sigma_min, mid, r.t_min, r.t_max)),
                            wind(RectRegion(mid, r.sigma_max, r.t_min, r.t_max))};
                return {wind(RectRegion(r.sigma_min, r.sigma_max, r.t_min, mid)),
                        wind(RectRegion(r.sigma_min, r.sigma_max, mid, r.t_max))};
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ZeroOnPath) throw;
            }
        }
        throw Error(ErrorKind::SubdivisionLimit, "no zero-free split line found", r.center());
    }

    int k_;
    arg::FunctionId f_;
    eval::PrecisionPolicy policy_;
    Settings settings_;
};

void merge_stats(IsolationStats& into, const IsolationStats& s) {
    into.windings += s.windings;
    into.newton_steps += s.newton_steps;
    into.splits += s.splits;
    into.max_depth = std::max(into.max_depth, s.max_depth);
    into.max_residual = std::max(into.max_residual, s.max_residual);
}

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (hw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < hw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::winding_bisect: return "winding-bisect";
        case Method::newton: return "newton";
        case Method::critical_line_sign_change: return "critical-line-sign-change";
    }
    return "?";
}

Method method_from_string(std::string_view s) {
    if (s == "winding-bisect") return Method::winding_bisect;
    if (s == "newton") return Method::newton;
    if (s == "critical-line-sign-change") return Method::critical_line_sign_change;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

std::optional<std::complex<double>> newton_refine(int k, std::complex<double> seed, const eval::PrecisionPolicy& policy,
                                                  const EvalSettings& settings, long* steps) {
    std::complex<double> z = seed;
    bool last = false;
    for (int it = 0; it < 60; ++it) {
        if (!(z.real() > -1.0 && z.real() < 40.0) || std::abs(z - 1.0) <= 4.0 * settings.pole_guard) return std::nullopt;
        eval::DerivativeSet d;
        try {
            d = eval::eval_zeta_derivs(eval::CPoint(z.real(), z.imag()), k + 1, policy, settings);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (steps) ++*steps;
        const auto& den = d.values[static_cast<std::size_t>(k) + 1];
        if (den.is_zero()) return std::nullopt;
        std::complex<double> step = (d.values[static_cast<std::size_t>(k)] / den).to_cdouble();
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
        z -= step;
        if (last) return z;
        if (std::abs(step) < 1e-6) last = true;
    }
    return std::nullopt;
}

std::optional<ZeroRecord> certify(int k, std::complex<double> z, const eval::PrecisionPolicy& policy,
                                  const EvalSettings& settings, IsolationStats* stats) {
    const arg::FunctionId f = arg::FunctionId::zeta(k);
    int counts[2] = {0, 0};
    const double halves[2] = {kCertifyHalfWidth, kCertifyHalfWidth * kSqrt2};
    for (int i = 0; i < 2; ++i) {
        const double h = halves[i];
        try {
            const WindingReport w =
                arg::winding_exact(f, RectRegion(z.real() - h, z.real() + h, z.imag() - h, z.imag() + h), policy, settings);
            counts[i] = w.count;
            if (stats) {
                ++stats->windings;
                stats->max_residual = std::max(stats->max_residual, w.residual);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroOnPath) throw;
            return std::nullopt;
        }
    }
    if (counts[0] < 1 || counts[0] != counts[1]) return std::nullopt;
    ZeroRecord rec;
    rec.k = k;
    rec.beta = z.real();
    rec.gamma = z.imag();
    rec.multiplicity = counts[0];
    rec.error_radius = kCertifyHalfWidth * kSqrt2 + 4.0 * ulp_of(z);
    rec.method = Method::newton;
    return rec;
}

Isolation isolate_zeros(int k, const RectRegion& rect, const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (k < 0 || k > settings.eval.k_max) throw Error(ErrorKind::InvalidArgument, "order outside 0..k_max");
    if (!(rect.t_min > 0.0) || rect.t_max > settings.scan.t_max)
        throw Error(ErrorKind::InvalidArgument, "rectangle must lie in 0 < t <= t_max");
    if (!(rect.sigma_min > -1.0) || !(rect.sigma_max < 40.0))
        throw Error(ErrorKind::InvalidArgument, "rectangle must lie in -1 < sigma < 40");
    CellSolver solver(k, policy, settings);
    const WindingReport w = solver.wind(rect);
    solver.solve(w);
    Isolation out;
    out.rect = rect;
    out.winding_count = w.count;
    out.records = std::move(solver.records);
    out.stats = solver.stats;
    sort_records(out.records);
    return out;
}

StripScan scan_window(int k, double t0, double t1, const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (!(t0 > 0.0) || !(t1 > t0)) throw Error(ErrorKind::InvalidArgument, "scan window needs 0 < t0 < t1");
    if (t1 > settings.scan.t_max) throw Error(ErrorKind::InvalidArgument, "scan height above scan.t_max");
    const double h = settings.scan.tile_height;
    const double s_left = settings.scan.sigma_left;
    const double s_right = settings.scan.sigma_right;

    std::vector<double> lines{t0};
    while (t1 - lines.back() > 1.5 * h) lines.push_back(lines.back() + h);
    lines.push_back(t1);
    const std::size_t n_tiles = lines.size() - 1;

    std::vector<int> line_tries(lines.size(), 0);
    std::vector<double> line_base = lines;
    std::vector<double> left(n_tiles, s_left);
    std::vector<int> left_tries(n_tiles, 0);
    std::vector<Isolation> tiles(n_tiles);
    std::vector<char> dirty(n_tiles, 1);
    std::vector<std::string> warnings;

    for (int round = 0;; ++round) {
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < n_tiles; ++i)
            if (dirty[i]) todo.push_back(i);
        if (todo.empty()) break;
        if (round > 64) throw Error(ErrorKind::ZeroOnBoundary, "tile boundaries could not be made zero-free");
        std::vector<std::optional<std::complex<double>>> failures(todo.size());
        parallel_for(todo.size(), settings.scan.threads, [&](std::size_t j) {
            const std::size_t i = todo[j];
            try {
                tiles[i] = isolate_zeros(k, RectRegion(left[i], s_right, lines[i], lines[i + 1]), policy, settings);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ZeroOnPath) throw;
                failures[j] = e.point().value_or(std::complex<double>(left[i], lines[i]));
            }
        });
        std::fill(dirty.begin(), dirty.end(), 0);
        for (std::size_t j = 0; j < todo.size(); ++j) {
            if (!failures[j]) continue;
            const std::size_t i = todo[j];
            const std::complex<double> p = *failures[j];
            const double d_bottom = std::fabs(p.imag() - lines[i]);
            const double d_top = std::fabs(p.imag() - lines[i + 1]);
            const double d_left = std::fabs(p.real() - left[i]);
            if (d_left < std::min(d_bottom, d_top)) {
                const int n = left_tries[i]++;
                if (n >= 42) throw Error(ErrorKind::ZeroOnBoundary, "left edge of tile stays on a zero", p);
                left[i] = s_left + (n % 2 == 0 ? 1.0 : -1.0) * 1e-6 * std::ldexp(1.0, n / 2) * 0.5;
                warnings.push_back("left edge moved to sigma=" + std::to_string(left[i]) + " near t=" +
                                   std::to_string(p.imag()));
                dirty[i] = 1;
                continue;
            }
            const std::size_t line = d_bottom <= d_top ? i : i + 1;
            const int n = line_tries[line]++;
            if (n >= 42) throw Error(ErrorKind::ZeroOnBoundary, "tile line stays on a zero", p);
            double step = 1e-6 * std::ldexp(1.0, n / 2);
            // outer lines only move outward so the window never shrinks
            if (line == 0) step = -step;
            else if (line + 1 < lines.size() && n % 2 == 1) step = -step;
            lines[line] = line_base[line] + step;
            if (line > 0) dirty[line - 1] = 1;
            if (line < n_tiles) dirty[line] = 1;
        }
    }

    StripScan out;
    out.k = k;
    out.t_requested = t1;
    out.t_effective = t1;
    out.region = RectRegion(*std::min_element(left.begin(), left.end()), s_right, lines.front(), lines.back());
    out.warnings = std::move(warnings);
    std::vector<ZeroRecord> all;
    for (const auto& t : tiles) {
        out.winding_total += t.winding_count;
        int m = 0;
        for (const auto& r : t.records) m += r.multiplicity;
        if (m != t.winding_count)
            throw Error(ErrorKind::DualCountMismatch, "tile enumeration does not match its winding count",
                        t.rect.center());
        all.insert(all.end(), t.records.begin(), t.records.end());
        merge_stats(out.stats, t.stats);
    }
    sort_records(all);
    for (const auto& r : all)
        if (r.gamma > t0 && r.gamma <= t1 && r.beta > 0.0) out.records.push_back(r);
    return out;
}

StripScan scan_strip(int k, double T, const eval::PrecisionPolicy& policy, const Settings& settings) {
    if (!(T > settings.scan.t_floor)) throw Error(ErrorKind::InvalidArgument, "T must exceed scan.t_floor");
    // a little headroom above T so the admissible height can move up
    StripScan s = scan_window(k, settings.scan.t_floor, T + 1e-7, policy, settings);
    double te = T;
    for (bool moved = true; moved;) {
        moved = false;
        for (const auto& r : s.records)
            if (std::fabs(r.gamma - te) < 1e-8) {
                te += 1e-8;
                moved = true;
            }
    }
    if (te != T) s.warnings.push_back("T moved to " + std::to_string(te) + " off a zero ordinate");
    std::erase_if(s.records, [&](const ZeroRecord& r) { return r.gamma > te; });
    s.t_requested = T;
    s.t_effective = te;
    return s;
}

std::vector<ZeroRecord> merge_records(std::vector<ZeroRecord> records, const eval::PrecisionPolicy& policy,
                                      const Settings& settings) {
    sort_records(records);
    std::vector<ZeroRecord> out;
    for (auto& r : records) {
        if (!out.empty() && out.back().k == r.k && out.back().disk_intersects(r)) {
            ZeroRecord& a = out.back();
            if (a.z() == r.z() && a.error_radius == r.error_radius && a.multiplicity == r.multiplicity) continue;
            const double lo_s = std::min(a.beta - a.error_radius, r.beta - r.error_radius);
            const double hi_s = std::max(a.beta + a.error_radius, r.beta + r.error_radius);
            const double lo_t = std::min(a.gamma - a.error_radius, r.gamma - r.error_radius);
            const double hi_t = std::max(a.gamma + a.error_radius, r.gamma + r.error_radius);
            const std::complex<double> c((lo_s + hi_s) / 2.0, (lo_t + hi_t) / 2.0);
            const double half = std::max(hi_s - lo_s, hi_t - lo_t) / 2.0 * 1.0625;
            const WindingReport w = arg::winding_number(
                arg::FunctionId::zeta(a.k), RectRegion(c.real() - half, c.real() + half, c.imag() - half, c.imag() + half),
                policy, settings.eval);
            a.beta = c.real();
            a.gamma = c.imag();
            a.error_radius = half * kSqrt2;
            a.multiplicity = w.count;
            a.method = Method::winding_bisect;
            continue;
        }
        out.push_back(r);
    }
    return out;
}

std::vector<double> critical_line_zeros(double t_min, double t_max, const eval::PrecisionPolicy& policy,
                                        const Settings& settings) {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw Error(ErrorKind::InvalidArgument, "need 0 < t_min < t_max");
    // Z-like real function: Re(h zeta) / |h|; same sign as h zeta on the line.
    auto F = [&](double t) {
        const eval::CPoint s(0.5, t);
        const eval::GammaFactor g = eval::eval_gamma_factor(s, policy);
        const eval::EvalResult z = eval::eval_zeta_deriv(s, 0, policy, settings.eval);
        const mp::Complex v = g.h.value * z.value;
        return (v.re() / mp::abs(g.h.value)).to_double();
    };
    // Completeness oracle: zeros of zeta in a thin box around the line.
    const WindingReport w = arg::winding_number(arg::FunctionId::zeta(0), RectRegion(0.25, 0.75, t_min, t_max), policy,
                                                settings.eval);
    const double a0 = w.rect.t_min;
    const double b0 = w.rect.t_max;
    std::vector<double> roots;
    for (int level = 0; level < 8; ++level) {
        roots.clear();
        double prev_t = a0;
        double prev_f = F(a0);
        for (double t = a0; t < b0;) {
            const double spacing = 2.0 * std::numbers::pi / std::log(std::max(t, 20.0) / (2.0 * std::numbers::pi));
            const double step = std::min(0.5, 0.25 * spacing) / std::ldexp(1.0, level);
            t = std::min(b0, t + step);
            const double ft = F(t);
            if ((prev_f < 0.0) != (ft < 0.0) && prev_f != 0.0) {
                std::uintmax_t iters = 80;
                const auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-12; };
                const auto br = boost::math::tools::toms748_solve(F, prev_t, t, prev_f, ft, tol, iters);
                roots.push_back((br.first + br.second) / 2.0);
            }
            prev_t = t;
            prev_f = ft;
        }
        if (static_cast<int>(roots.size()) == w.count) break;
    }
    if (static_cast<int>(roots.size()) != w.count)
        throw Error(ErrorKind::PrecisionExhausted,
                    "sign changes (" + std::to_string(roots.size()) + ") do not match the winding count (" +
                        std::to_string(w.count) + ")",
                    std::complex<double>(0.5, t_min));
    std::erase_if(roots, [&](double t) { return t < t_min || t > t_max; });
    return roots;
}

OrdinateSet critical_ordinates(int ell, double t_min, double t_max, const eval::PrecisionPolicy& policy,
                               const Settings& settings) {
    if (ell < 0 || ell > settings.eval.k_max) throw Error(ErrorKind::InvalidArgument, "order outside 0..k_max");
    if (!(t_min >= 10.0) || !(t_max > t_min) || t_max > settings.scan.t_max)
        throw Error(ErrorKind::InvalidArgument, "need 10 <= t_min < t_max <= scan.t_max");
    std::vector<std::pair<double, int>> all;
    for (double t : critical_line_zeros(t_min, t_max, policy, settings)) all.emplace_back(t, 0);
    for (int j = 1; j <= ell; ++j) {
        const arg::WindingReport w = arg::winding_number(arg::FunctionId::zeta(j),
                                                         RectRegion(0.49, 0.51, t_min, t_max), policy, settings.eval);
        const Isolation iso = isolate_zeros(j, w.rect, policy, settings);
        for (const auto& r : iso.records)
            if (std::fabs(r.beta - 0.5) <= r.error_radius && r.gamma >= t_min && r.gamma <= t_max)
                all.emplace_back(r.gamma, j);
    }
    std::sort(all.begin(), all.end());
    OrdinateSet out;
    out.ell = ell;
    out.t_min = t_min;
    out.t_max = t_max;
    for (const auto& [t, j] : all) {
        if (!out.ordinates.empty() && t - out.ordinates.back() <= 1e-9) {
            auto& src = out.sources.back();
            if (std::find(src.begin(), src.end(), j) == src.end()) src.push_back(j);
            continue;
        }
        out.ordinates.push_back(t);
        out.sources.push_back({j});
    }
    return out;
}

std::vector<ChainViolation> ordinate_chain_report(const OrdinateSet& set) {
    std::vector<ChainViolation> out;
    for (std::size_t i = 0; i < set.ordinates.size(); ++i) {
        for (int j : set.sources[i]) {
            if (j == 0) continue;
            bool ok = false;
            for (std::size_t m = 0; m < set.ordinates.size() && !ok; ++m) {
                if (std::fabs(set.ordinates[m] - set.ordinates[i]) > 1e-8) continue;
                const auto& src = set.sources[m];
                ok = std::find(src.begin(), src.end(), j - 1) != src.end();
            }
            if (!ok) out.push_back({set.ordinates[i], j, set.ordinates[i] < 100.0});
        }
    }
    return out;
}

}  // namespace zdl::scan
