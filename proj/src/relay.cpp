#include "prtune/relay.hpp"

#include "prtune/delay_line.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A cycle whose period is not resolved by a sane number of samples is
// chattering (sliding-mode switching at the step scale), not a limit cycle.
constexpr double kDegeneratePeriodSteps = 20.0;
constexpr int kChatterCyclesToGiveUp = 100;
constexpr int kDecayStreakToGiveUp = 8;

double max_abs_root(const std::vector<std::complex<double>>& roots) {
    double m = 0.0;
    for (const auto& r : roots) m = std::max(m, std::abs(r));
    return m;
}

double min_abs_real(const std::vector<std::complex<double>>& roots) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::min(m, std::abs(r.real()));
    return m;
}

// Coarse pre-scan for the frequency where the loop phase first reaches -180
// degrees; used only to pick the integration step.
std::optional<double> estimate_oscillation_freq(const TransferFunction& loop) {
    const int n = 600;
    double prev_omega = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        const double omega = std::pow(10.0, -4.0 + 8.0 * i / (n - 1));
        double f;
        try {
            f = freq_response(loop, omega).phase_deg + 180.0;
        } catch (const std::domain_error&) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_f > 0.0 && f <= 0.0) {
            double lo = prev_omega, hi = omega;
            for (int it = 0; it < 60; ++it) {
                const double mid = std::sqrt(lo * hi);
                (freq_response(loop, mid).phase_deg + 180.0 > 0.0 ? lo : hi) = mid;
            }
            return std::sqrt(lo * hi);
        }
        prev_omega = omega;
        prev_f = f;
        have_prev = true;
    }
    return std::nullopt;
}

void require_simulatable_plant(const TransferFunction& g) {
    if (!g.is_strictly_proper())
        throw std::invalid_argument("relay: plant must be strictly proper");
    for (const auto& p : g.poles())
        if (p.real() >= -1e-12 * std::max(1.0, std::abs(p)))
            throw std::invalid_argument("relay: plant must be BIBO-stable");
}

}  // namespace

RelayConfig resolve_relay_config(const PhaseElement& f, const TransferFunction& g,
                                 RelayConfig cfg) {
    require_simulatable_plant(g);
    if (!(cfg.d > 0.0)) throw std::invalid_argument("relay: d must be > 0");
    if (cfg.settle_cycles < 3) throw std::invalid_argument("relay: settle_cycles must be >= 3");
    if (!(cfg.cycle_tol > 0.0 && cfg.cycle_tol < 0.1))
        throw std::invalid_argument("relay: cycle_tol must lie in (0, 0.1)");

    const TransferFunction loop = series(f.tf, g);

    if (cfg.h <= 0.0) {
        double h = std::numeric_limits<double>::infinity();
        const double stiffest = max_abs_root(loop.poles());
        if (stiffest > 0.0) h = std::min(h, 1.5 / stiffest);  // explicit RK4 stability
        const double fastest_plant = max_abs_root(g.poles());
        if (fastest_plant > 0.0) h = std::min(h, 0.01 / fastest_plant);
        if (const auto west = estimate_oscillation_freq(loop))
            h = std::min(h, 0.001 * kTwoPi / *west);
        if (loop.delay() > 0.0) h = std::min(h, loop.delay() / 50.0);
        if (!std::isfinite(h)) h = 1e-3;
        cfg.h = std::max(h, 1e-9);
    }
    if (cfg.max_time <= 0.0) {
        const double slowest = min_abs_real(g.poles());
        const double tau_dom = slowest > 0.0 ? std::min(1.0 / slowest, 1e4) : 1e4;
        cfg.max_time = 200.0 * (tau_dom + loop.delay());
    }
    if (std::isnan(cfg.b0)) {
        const double k0 = loop.dc_gain();
        cfg.b0 = (std::isfinite(k0) && k0 != 0.0) ? cfg.r / k0 : 0.0;
    }
    if (std::isnan(cfg.bias_gain)) cfg.bias_gain = loop.has_pole_at_origin() ? 0.0 : 0.5;
    return cfg;
}

std::vector<CycleStats> detect_cycles(const std::vector<double>& signal, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("detect_cycles: h must be > 0");
    std::vector<CycleStats> out;
    if (signal.size() < 2) return out;

    double center = 0.0;
    for (double v : signal) center += v;
    center /= static_cast<double>(signal.size());

    bool in_cycle = false;
    double cycle_start = 0.0, integral = 0.0;
    double vmax = 0.0, vmin = 0.0;
    for (size_t i = 1; i < signal.size(); ++i) {
        const double t_prev = h * static_cast<double>(i - 1);
        const double t_cur = h * static_cast<double>(i);
        const double prev = signal[i - 1], cur = signal[i];
        if (prev < center && cur >= center) {
            const double tc = t_prev + h * (center - prev) / (cur - prev);
            if (in_cycle) {
                integral += 0.5 * (prev + center) * (tc - t_prev);
                const double period = tc - cycle_start;
                out.push_back(CycleStats{(vmax - vmin) / 2.0, period, integral / period});
                center = out.back().mean;  // running cycle mean
            }
            in_cycle = true;
            cycle_start = tc;
            integral = 0.5 * (center + cur) * (t_cur - tc);
            vmax = vmin = cur;
        } else if (in_cycle) {
            integral += 0.5 * (prev + cur) * h;
        }
        if (in_cycle) {
            vmax = std::max(vmax, cur);
            vmin = std::min(vmin, cur);
        }
    }
    return out;
}

RelaySimResult simulate_relay_loop(const PhaseElement& f, const TransferFunction& g,
                                   const RelayConfig& cfg_in, bool record_series) {
    const RelayConfig cfg = resolve_relay_config(f, g, cfg_in);
    const TransferFunction loop = series(f.tf, g);
    const StateSpaceRealization ss = to_state_space(loop);
    const double delay = loop.delay();
    const double h = cfg.h;

    const double dc = g.dc_gain();
    const double decay_floor = 1e-6 * cfg.d * (std::isfinite(dc) && dc != 0.0 ? std::abs(dc) : 1.0);
    const double blow_up = 1e9 * std::max(1.0, cfg.d) * std::max(1.0, std::abs(cfg.r));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.order());
    DelayLine history(delay, h);
    double bias = cfg.b0;

    RelaySimResult result;
    const auto n_steps = static_cast<long>(cfg.max_time / h);
    if (record_series) {
        result.series.t.reserve(n_steps + 1);
        result.series.r.reserve(n_steps + 1);
        result.series.e.reserve(n_steps + 1);
        result.series.u.reserve(n_steps + 1);
        result.series.y.reserve(n_steps + 1);
    }

    struct Cycle {
        double period, amplitude, mean_e;
        bool degenerate;
    };
    std::vector<Cycle> cycles;
    bool have_prev = false;
    double prev_e = 0.0, prev_t = 0.0;
    bool have_cross = false;
    double last_cross = 0.0;
    double win_integral = 0.0, win_ymax = 0.0, win_ymin = 0.0;
    bool win_open = false;
    int chatter_streak = 0, decay_streak = 0;
    double prev_amplitude = std::numeric_limits<double>::infinity();

    double t = 0.0;
    for (long step = 0; step <= n_steps; ++step) {
        const double y = ss.C * x;
        const double e = cfg.r - y;
        const double u = cfg.d * (e >= 0.0 ? 1.0 : -1.0) + bias;

        if (record_series) {
            result.series.t.push_back(t);
            result.series.r.push_back(cfg.r);
            result.series.e.push_back(e);
            result.series.u.push_back(u);
            result.series.y.push_back(y);
        }
        if (!std::isfinite(y) || std::abs(y) > blow_up) break;

        if (have_prev && prev_e < 0.0 && e >= 0.0) {
            const double tc = prev_t + h * (0.0 - prev_e) / (e - prev_e);
            if (have_cross) {
                win_integral += 0.5 * prev_e * (tc - prev_t);
                const double period = tc - last_cross;
                const double amplitude = (win_ymax - win_ymin) / 2.0;
                const bool degenerate = period < kDegeneratePeriodSteps * h || amplitude <= 0.0;
                cycles.push_back(Cycle{period, amplitude, win_integral / period, degenerate});

                if (degenerate) {
                    if (++chatter_streak >= kChatterCyclesToGiveUp) break;
                } else {
                    chatter_streak = 0;
                    bias += cfg.bias_gain * cycles.back().mean_e;

                    decay_streak = amplitude < prev_amplitude ? decay_streak + 1 : 0;
                    prev_amplitude = amplitude;
                    if (decay_streak >= kDecayStreakToGiveUp && amplitude < decay_floor) break;

                    if (static_cast<int>(cycles.size()) >= cfg.settle_cycles) {
                        double amin = 1e300, amax = -1e300, tmin = 1e300, tmax = -1e300;
                        double asum = 0.0, tsum = 0.0, emax = 0.0;
                        bool all_clean = true;
                        for (size_t i = cycles.size() - cfg.settle_cycles; i < cycles.size(); ++i) {
                            const Cycle& c = cycles[i];
                            all_clean = all_clean && !c.degenerate;
                            amin = std::min(amin, c.amplitude);
                            amax = std::max(amax, c.amplitude);
                            tmin = std::min(tmin, c.period);
                            tmax = std::max(tmax, c.period);
                            asum += c.amplitude;
                            tsum += c.period;
                            emax = std::max(emax, std::abs(c.mean_e));
                        }
                        const double amean = asum / cfg.settle_cycles;
                        const double tmean = tsum / cfg.settle_cycles;
                        if (all_clean && (amax - amin) <= cfg.cycle_tol * amean &&
                            (tmax - tmin) <= cfg.cycle_tol * tmean &&
                            emax <= cfg.cycle_tol * amean) {
                            result.cycle = LimitCycle{amean, tmean, bias,
                                                      static_cast<int>(cycles.size()), true};
                            break;
                        }
                    }
                }
            }
            have_cross = true;
            last_cross = tc;
            win_open = true;
            win_integral = 0.5 * e * (t - tc);
            win_ymax = win_ymin = y;
        } else if (win_open && have_prev) {
            win_integral += 0.5 * (prev_e + e) * h;
        }
        if (win_open) {
            win_ymax = std::max(win_ymax, y);
            win_ymin = std::min(win_ymin, y);
        }
        have_prev = true;
        prev_e = e;
        prev_t = t;

        if (step == n_steps) break;

        // relay output held over the step; dead time reads back through the
        // pushed grid history
        history.push(u);
        const double w0 = delay > 0.0 ? history.value_behind(delay, u) : u;
        const double wh = delay > 0.0 ? history.value_behind(delay - 0.5 * h, u) : u;
        const double w1 = delay > 0.0 ? history.value_behind(delay - h, u) : u;
        const Eigen::VectorXd k1 = ss.A * x + ss.B * w0;
        const Eigen::VectorXd k2 = ss.A * (x + 0.5 * h * k1) + ss.B * wh;
        const Eigen::VectorXd k3 = ss.A * (x + 0.5 * h * k2) + ss.B * wh;
        const Eigen::VectorXd k4 = ss.A * (x + h * k3) + ss.B * w1;
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return result;
}

}  // namespace prtune
