#pragma once

#include "prtune/transfer_function.hpp"

namespace prtune {

/// Flat-phase loop element for the staged relay experiment. gamma is the
/// element's nominal phase; the realized transfer function is an 11th-order
/// rational approximation whose phase holds gamma over valid_band.
struct PhaseElement {
    double gamma_deg;
    TransferFunction tf;
    double band_lo;  ///< rad/s
    double band_hi;  ///< rad/s
};

/// Builds the element for a relay phase of 0, -60 or -120 degrees:
///   0    -> unity
///   -60  -> the fixed 11th-order rational with -60 deg flat phase
///   -120 -> the -30 deg rational in series with a pure integrator
/// Any other value throws std::invalid_argument ("unsupported relay phase").
PhaseElement make_phase_element(double gamma_deg);

/// Max over an n-point log grid of |unwrapped phase - gamma| in degrees.
/// The requested band must lie inside the element's valid band.
double phase_flatness(const PhaseElement& element, double band_lo, double band_hi, int n_points);

}  // namespace prtune
