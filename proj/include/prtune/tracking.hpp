#pragma once

#include "prtune/relay.hpp"
#include "prtune/tuner.hpp"

namespace prtune {

/// Sinusoid-tracking experiment: r(t) = a_r sin(omega_r t) from rest.
/// Non-positive h selects an automatic step.
struct TrackingConfig {
    double a_r = 1.0;
    double omega_r = 0.0;
    double epsilon = 0.02;  ///< settling tolerance on |e| / a_r
    double h = 0.0;
    int total_periods = 40;
    int steady_window_periods = 5;  ///< trailing window used as steady state
};

struct TrackingResult {
    TimeSeries series;
    bool diverged = false;
};

/// Closed loop of controller and plant under unity feedback, integrated with
/// fixed-step RK4 from zero initial conditions; plant dead time runs through
/// a grid-sampled delay line. Divergence (|y| beyond 1e6 a_r) stops the run
/// and is reported in the result, not thrown.
TrackingResult simulate_tracking(const TransferFunction& g, const PRController& c,
                                 const TrackingConfig& cfg);

/// t_s is the last instant |e / a_r| reaches epsilon, found by scanning
/// backwards; requires the trailing steady window itself to stay inside the
/// tolerance, otherwise the series is not settled.
struct SettlingResult {
    bool settled = false;
    double t_s = 0.0;
};

SettlingResult settling_time(const TimeSeries& series, const TrackingConfig& cfg);

/// Percent by which max |y| before t_s exceeds the steady-state peak
/// (measured over the trailing steady window). Requires a settled series.
double overshoot(const TimeSeries& series, double t_s, const TrackingConfig& cfg);

struct PerformanceReport {
    double t_s = 0.0;
    double n_s = 0.0;   ///< omega_r * t_s / (2 pi), exactly
    double m_o = 0.0;   ///< percent
    double y_r = 0.0;   ///< steady-state peak
    bool converged = false;
    bool unstable = false;
};

/// Simulate, extend the horizon (doubling, up to a cap) until the error
/// settles, then reduce to the report. An unstable loop or a never-settling
/// run yields converged = false.
PerformanceReport evaluate_tracking(const TransferFunction& g, const PRController& c,
                                    TrackingConfig cfg);

/// Automatic integration step for this loop (reference resolution, plant pole
/// scale, dead-time resolution). Exposed so step-halving studies can scale it.
double resolve_tracking_step(const TransferFunction& g, const PRController& c,
                             const TrackingConfig& cfg);

}  // namespace prtune
