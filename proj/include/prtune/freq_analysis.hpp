#pragma once

#include "prtune/transfer_function.hpp"

#include <optional>
#include <vector>

namespace prtune {

/// Log-spaced frequency response samples. Frequencies falling inside the
/// exclusion window of an imaginary-axis pole (the undamped resonance) are
/// skipped and listed in `excluded` instead.
struct SweepResult {
    std::vector<FrequencyPoint> points;
    std::vector<double> excluded;
};

SweepResult sweep(const TransferFunction& l, double band_lo, double band_hi, int n_points);

struct MarginReport {
    double phase_margin_deg = 0.0;
    double gain_crossover = 0.0;  ///< rad/s, first unity-magnitude crossing above the resonance
    std::optional<double> gain_margin_db;   ///< absent if the phase never crosses -180 deg
    std::optional<double> phase_crossover;  ///< rad/s
    bool crossover_unique = false;  ///< exactly one unity crossing above the resonance
};

/// Unity-gain and -180 deg crossings located by grid scan plus bisection to a
/// relative frequency tolerance of 1e-9, skipping undamped-resonance
/// neighborhoods. Throws std::domain_error when no gain crossover exists.
MarginReport margins(const TransferFunction& l);

struct NyquistPoint {
    double re = 0.0;
    double im = 0.0;
};

std::vector<NyquistPoint> nyquist_data(const TransferFunction& l, double band_lo, double band_hi,
                                       int n_points);

}  // namespace prtune
