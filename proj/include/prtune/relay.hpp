#pragma once

#include "prtune/foi.hpp"
#include "prtune/transfer_function.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace prtune {

/// Relay experiment configuration. Non-positive h / max_time and a NaN b0
/// select automatic values derived from the loop under test; see
/// resolve_relay_config.
struct RelayConfig {
    double d = 1.0;         ///< relay half-amplitude
    double b0 = std::numeric_limits<double>::quiet_NaN();  ///< initial bias
    double r = 0.0;         ///< reference step amplitude
    double h = 0.0;         ///< integration step, seconds
    double max_time = 0.0;  ///< simulation horizon per experiment, seconds
    int settle_cycles = 5;  ///< consecutive agreeing cycles required
    double cycle_tol = 0.01;   ///< relative agreement tolerance on A and T
    /// Bias adaptation gain per cycle. NaN resolves to 0.5 for loops with
    /// finite DC gain and to 0 when the loop integrates (an input bias would
    /// ramp the output instead of centering it).
    double bias_gain = std::numeric_limits<double>::quiet_NaN();
};

/// Measured symmetric limit cycle. Amplitude is half the peak-to-peak of the
/// loop output about its cycle mean; the period comes from same-direction
/// zero crossings of the error.
struct LimitCycle {
    double amplitude = 0.0;
    double period = 0.0;
    double bias_final = 0.0;
    int cycles_used = 0;
    bool converged = false;
};

struct CycleStats {
    double amplitude = 0.0;
    double period = 0.0;
    double mean = 0.0;
};

struct TimeSeries {
    std::vector<double> t, r, e, u, y;
    size_t size() const { return t.size(); }
};

/// nullopt cycle means no sustained oscillation exists at this relay phase.
struct RelaySimResult {
    std::optional<LimitCycle> cycle;
    TimeSeries series;
};

/// Segments a uniformly sampled signal at rising crossings of (signal -
/// running cycle mean) and reports half peak-to-peak, duration and mean per
/// segment. Crossings are located by linear interpolation between samples.
std::vector<CycleStats> detect_cycles(const std::vector<double>& signal, double h);

/// Fills the automatic fields of a RelayConfig for the given loop: integration
/// step from the expected oscillation period, the fastest plant time constant
/// and the stiffest loop pole; horizon from the dominant plant time constant;
/// initial bias r / (F*G)(0) when that gain is finite.
RelayConfig resolve_relay_config(const PhaseElement& f, const TransferFunction& g,
                                 RelayConfig cfg);

/// Integrates the relay loop e = r - y, u = d sign(e) + b, y = (F*G)(u) with
/// fixed-step RK4 until a symmetric limit cycle is detected or the horizon
/// elapses. The bias adapts by bias_gain * mean(e) after each full cycle.
RelaySimResult simulate_relay_loop(const PhaseElement& f, const TransferFunction& g,
                                   const RelayConfig& cfg, bool record_series = true);

}  // namespace prtune
