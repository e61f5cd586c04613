#include "prtune/tracking.hpp"

#include "prtune/delay_line.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const TrackingConfig& cfg) {
    if (!(cfg.a_r > 0.0)) throw std::invalid_argument("tracking: a_r must be > 0");
    if (!(cfg.omega_r > 0.0)) throw std::invalid_argument("tracking: omega_r must be > 0");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("tracking: epsilon must lie in (0, 1)");
    if (cfg.total_periods < 20)
        throw std::invalid_argument("tracking: total_periods must be >= 20");
    if (cfg.steady_window_periods < 1 || cfg.steady_window_periods >= cfg.total_periods)
        throw std::invalid_argument("tracking: bad steady_window_periods");
}

}  // namespace

double resolve_tracking_step(const TransferFunction& g, const PRController& c,
                             const TrackingConfig& cfg) {
    double scale = cfg.omega_r;
    for (const auto& p : g.poles()) scale = std::max(scale, std::abs(p));
    double h = std::min(kTwoPi / cfg.omega_r / 1000.0, 0.5 / scale);
    if (g.delay() > 0.0) h = std::min(h, g.delay() / 20.0);
    (void)c;
    return std::max(h, 1e-9);
}

TrackingResult simulate_tracking(const TransferFunction& g, const PRController& c,
                                 const TrackingConfig& cfg_in) {
    TrackingConfig cfg = cfg_in;
    validate(cfg);
    if (!g.is_strictly_proper())
        throw std::invalid_argument("tracking: plant must be strictly proper");
    if (cfg.h <= 0.0) cfg.h = resolve_tracking_step(g, c, cfg);

    const StateSpaceRealization sc = to_state_space(pr_transfer_function(c));
    const StateSpaceRealization sg = to_state_space(g);
    const double delay = g.delay();
    const double h = cfg.h;
    const double blow_up = 1e6 * cfg.a_r;

    const auto reference = [&](double tau) {
        return tau > 0.0 ? cfg.a_r * std::sin(cfg.omega_r * tau) : 0.0;
    };

    Eigen::VectorXd xc = Eigen::VectorXd::Zero(sc.order());
    Eigen::VectorXd xg = Eigen::VectorXd::Zero(sg.order());
    DelayLine history(delay, h);

    const double t_end = cfg.total_periods * kTwoPi / cfg.omega_r;
    const auto n_steps = static_cast<long>(t_end / h);

    TrackingResult result;
    result.series.t.reserve(n_steps + 1);
    result.series.r.reserve(n_steps + 1);
    result.series.e.reserve(n_steps + 1);
    result.series.u.reserve(n_steps + 1);
    result.series.y.reserve(n_steps + 1);

    double t = 0.0;
    Eigen::VectorXd kc1(sc.order()), kc2(sc.order()), kc3(sc.order()), kc4(sc.order());
    Eigen::VectorXd kg1(sg.order()), kg2(sg.order()), kg3(sg.order()), kg4(sg.order());

    // one closed-loop stage derivative; the plant is strictly proper, so y
    // depends on states only and the loop is explicit
    const auto stage = [&](const Eigen::VectorXd& xc_, const Eigen::VectorXd& xg_, double tau,
                           Eigen::VectorXd& dxc, Eigen::VectorXd& dxg) {
        const double y = sg.C.dot(xg_);
        const double e = reference(tau) - y;
        const double u = sc.D * e + sc.C.dot(xc_);
        // newest history sample sits at grid time t, so u(tau - delay) is
        // (t - tau + delay) behind it
        const double w = delay > 0.0 ? history.value_behind(t - tau + delay, u) : u;
        dxc = sc.A * xc_ + sc.B * e;
        dxg = sg.A * xg_ + sg.B * w;
    };

    for (long step = 0; step <= n_steps; ++step) {
        const double y = sg.C.dot(xg);
        const double e = reference(t) - y;
        const double u = sc.D * e + sc.C.dot(xc);

        result.series.t.push_back(t);
        result.series.r.push_back(reference(t));
        result.series.e.push_back(e);
        result.series.u.push_back(u);
        result.series.y.push_back(y);

        if (!std::isfinite(y) || std::abs(y) > blow_up) {
            result.diverged = true;
            break;
        }
        if (step == n_steps) break;

        history.push(u);
        stage(xc, xg, t, kc1, kg1);
        stage(xc + 0.5 * h * kc1, xg + 0.5 * h * kg1, t + 0.5 * h, kc2, kg2);
        stage(xc + 0.5 * h * kc2, xg + 0.5 * h * kg2, t + 0.5 * h, kc3, kg3);
        stage(xc + h * kc3, xg + h * kg3, t + h, kc4, kg4);
        xc += h / 6.0 * (kc1 + 2.0 * kc2 + 2.0 * kc3 + kc4);
        xg += h / 6.0 * (kg1 + 2.0 * kg2 + 2.0 * kg3 + kg4);
        t += h;
    }
    return result;
}

SettlingResult settling_time(const TimeSeries& series, const TrackingConfig& cfg) {
    validate(cfg);
    if (series.size() < 2) throw std::invalid_argument("settling_time: series too short");

    const double t_end = series.t.back();
    const double window = cfg.steady_window_periods * kTwoPi / cfg.omega_r;
    const double bound = cfg.epsilon * cfg.a_r;

    // the trailing window must itself satisfy the bound, otherwise the series
    // has not reached steady state and t_s is undefined
    for (size_t i = series.size(); i-- > 0 && series.t[i] >= t_end - window;)
        if (std::abs(series.e[i]) >= bound) return SettlingResult{false, 0.0};

    size_t last = series.size();
    for (size_t i = series.size(); i-- > 0;) {
        if (std::abs(series.e[i]) >= bound) {
            last = i;
            break;
        }
    }
    if (last == series.size()) return SettlingResult{true, 0.0};

    // interpolate the |e| = bound crossing between the last violation and the
    // following sample
    const double a0 = std::abs(series.e[last]);
    const double a1 = std::abs(series.e[last + 1]);
    const double frac = a0 > a1 ? (a0 - bound) / (a0 - a1) : 0.0;
    return SettlingResult{true,
                          series.t[last] + frac * (series.t[last + 1] - series.t[last])};
}

double overshoot(const TimeSeries& series, double t_s, const TrackingConfig& cfg) {
    validate(cfg);
    if (series.size() < 2) throw std::invalid_argument("overshoot: series too short");

    const double t_end = series.t.back();
    const double window = cfg.steady_window_periods * kTwoPi / cfg.omega_r;

    double y_r = 0.0;
    for (size_t i = series.size(); i-- > 0 && series.t[i] >= t_end - window;)
        y_r = std::max(y_r, std::abs(series.y[i]));
    if (!(y_r > 0.0)) throw std::invalid_argument("overshoot: no steady-state output");

    double y_max = 0.0;
    for (size_t i = 0; i < series.size() && series.t[i] < t_s; ++i)
        y_max = std::max(y_max, std::abs(series.y[i]));

    return std::max((y_max - y_r) / y_r, 0.0) * 100.0;
}

PerformanceReport evaluate_tracking(const TransferFunction& g, const PRController& c,
                                    TrackingConfig cfg) {
    validate(cfg);
    if (cfg.h <= 0.0) cfg.h = resolve_tracking_step(g, c, cfg);
    const double period = kTwoPi / cfg.omega_r;

    PerformanceReport report;
    constexpr int kMaxPeriodsCap = 1536;
    while (true) {
        const TrackingResult run = simulate_tracking(g, c, cfg);
        if (run.diverged) {
            report.unstable = true;
            report.t_s = report.n_s = report.m_o = report.y_r =
                std::numeric_limits<double>::quiet_NaN();
            return report;
        }
        const SettlingResult settle = settling_time(run.series, cfg);
        const double t_end = run.series.t.back();
        const bool clear_of_window =
            settle.settled && settle.t_s <= t_end - 2.0 * cfg.steady_window_periods * period;
        if (clear_of_window) {
            report.t_s = settle.t_s;
            report.n_s = cfg.omega_r * settle.t_s / kTwoPi;
            report.m_o = overshoot(run.series, settle.t_s, cfg);
            double y_r = 0.0;
            const double window = cfg.steady_window_periods * period;
            for (size_t i = run.series.size(); i-- > 0 && run.series.t[i] >= t_end - window;)
                y_r = std::max(y_r, std::abs(run.series.y[i]));
            report.y_r = y_r;
            report.converged = true;
            return report;
        }
        if (cfg.total_periods >= kMaxPeriodsCap) {
            report.t_s = report.n_s = report.m_o = report.y_r =
                std::numeric_limits<double>::quiet_NaN();
            return report;  // converged stays false
        }
        cfg.total_periods = std::min(cfg.total_periods * 2, kMaxPeriodsCap);
    }
}

}  // namespace prtune
