#include "prtune/foi.hpp"

#include <cmath>
#include <stdexcept>

namespace prtune {

namespace {

constexpr double kBandLo = 1e-3;
constexpr double kBandHi = 1e3;

// Fixed coefficient sets of the 11th-order flat-phase rationals, indexed by
// ascending power of s (index k holds the s^k coefficient; the zero s^0
// denominator entry is the integrator-like pole at the origin).
// -30 deg set:
constexpr double kDen30[12] = {0.0,     111.1,   8.49e4,  1.15e7, 3.232e8, 1.942e9,
                               2.509e9, 6.986e8, 4.195e7, 5.462e5, 1569.0,  1.0};
constexpr double kNum30[12] = {0.3452,  1309.0,  5.4e5,   4.302e7, 7.22e8,  2.598e9,
                               2.013e9, 3.36e8,  1.211e7, 9.508e4, 167.8,   0.06905};
// -60 deg set:
constexpr double kDen60[12] = {0.0,     11.11,  1.097e4, 1.918e6, 6.963e7, 5.403e8,
                               9.016e8, 3.24e8, 2.506e7, 4.164e5, 1466.0,  1.0};
constexpr double kNum60[12] = {0.7152,  1446.0,  4.387e5, 2.678e7, 3.473e8, 9.672e8,
                               5.799e8, 7.487e7, 2.08e6,  1.238e4, 15.45,   0.003576};

Eigen::VectorXd descending(const double (&ascending)[12]) {
    Eigen::VectorXd out(12);
    for (int k = 0; k < 12; ++k) out[11 - k] = ascending[k];
    return out;
}

}  // namespace

PhaseElement make_phase_element(double gamma_deg) {
    if (gamma_deg == 0.0)
        return PhaseElement{0.0, TransferFunction::unity(), kBandLo, kBandHi};
    if (gamma_deg == -60.0)
        return PhaseElement{-60.0, TransferFunction(descending(kNum60), descending(kDen60)),
                            kBandLo, kBandHi};
    if (gamma_deg == -120.0) {
        const TransferFunction rational(descending(kNum30), descending(kDen30));
        return PhaseElement{-120.0, series(rational, TransferFunction({1.0}, {1.0, 0.0})),
                            kBandLo, kBandHi};
    }
    throw std::invalid_argument("make_phase_element: unsupported relay phase");
}

double phase_flatness(const PhaseElement& element, double band_lo, double band_hi, int n_points) {
    if (n_points < 2) throw std::invalid_argument("phase_flatness: need at least 2 points");
    if (!(band_lo > 0.0) || !(band_hi > band_lo))
        throw std::invalid_argument("phase_flatness: bad band");
    if (band_lo < element.band_lo || band_hi > element.band_hi)
        throw std::invalid_argument("phase_flatness: band outside the element's valid band");

    const double log_lo = std::log10(band_lo);
    const double log_hi = std::log10(band_hi);
    double worst = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double omega = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (n_points - 1));
        const double dev = std::abs(freq_response(element.tf, omega).phase_deg - element.gamma_deg);
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace prtune
