#include "prtune/freq_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {

constexpr double kResonanceWindow = 1e-6;  // relative half-width skipped around j-axis poles

std::vector<double> resonance_frequencies(const TransferFunction& l) {
    std::vector<double> out;
    for (const auto& p : l.poles())
        if (p.imag() > 0.0 && std::abs(p.real()) <= 1e-9 * std::abs(p)) out.push_back(p.imag());
    return out;
}

bool inside_resonance(double omega, const std::vector<double>& resonances) {
    for (double w : resonances)
        if (omega >= w * (1.0 - kResonanceWindow) && omega <= w * (1.0 + kResonanceWindow))
            return true;
    return false;
}

// bisection on a smooth scalar of the frequency response, to 1e-9 relative
template <typename F>
double refine_crossing(const F& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
        const double mid = std::sqrt(lo * hi);
        const double fm = f(mid);
        if ((flo > 0.0) == (fm > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

}  // namespace

SweepResult sweep(const TransferFunction& l, double band_lo, double band_hi, int n_points) {
    if (n_points < 2) throw std::invalid_argument("sweep: need at least 2 points");
    if (!(band_lo > 0.0) || !(band_hi > band_lo)) throw std::invalid_argument("sweep: bad band");

    const std::vector<double> resonances = resonance_frequencies(l);
    const double log_lo = std::log10(band_lo);
    const double log_hi = std::log10(band_hi);

    SweepResult out;
    out.points.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double omega = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (n_points - 1));
        if (inside_resonance(omega, resonances)) {
            out.excluded.push_back(omega);
            continue;
        }
        out.points.push_back(freq_response(l, omega));
    }
    return out;
}

MarginReport margins(const TransferFunction& l) {
    if (!l.is_proper()) throw std::invalid_argument("margins: improper loop");

    const std::vector<double> resonances = resonance_frequencies(l);
    double omega_res = 0.0;
    for (double w : resonances) omega_res = std::max(omega_res, w);

    const double lo = std::max(1e-5, omega_res * (1.0 + 10.0 * kResonanceWindow));
    const double hi = 1e5;
    const int n = 2400;

    const auto log_mag = [&](double w) { return std::log(freq_response(l, w).magnitude); };
    const auto phase_plus_180 = [&](double w) { return freq_response(l, w).phase_deg + 180.0; };

    // unity-magnitude crossings above the resonance
    std::vector<double> crossings;
    double prev_w = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        const double w = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1.0));
        if (inside_resonance(w, resonances)) {
            have_prev = false;
            continue;
        }
        const double f = log_mag(w);
        if (have_prev && (prev_f > 0.0) != (f > 0.0))
            crossings.push_back(refine_crossing(log_mag, prev_w, w));
        prev_w = w;
        prev_f = f;
        have_prev = true;
    }
    if (crossings.empty()) throw std::domain_error("margins: no gain crossover");

    MarginReport report;
    report.gain_crossover = crossings.front();
    report.phase_margin_deg = 180.0 + freq_response(l, report.gain_crossover).phase_deg;
    report.crossover_unique = crossings.size() == 1;

    // first -180 deg phase crossing, searched from the bottom of the band
    have_prev = false;
    for (int i = 0; i < n && !report.phase_crossover; ++i) {
        const double w = std::pow(10.0, -5.0 + (std::log10(hi) + 5.0) * i / (n - 1.0));
        if (inside_resonance(w, resonances)) {
            have_prev = false;
            continue;
        }
        const double f = phase_plus_180(w);
        if (have_prev && (prev_f > 0.0) != (f > 0.0)) {
            const double wc = refine_crossing(phase_plus_180, prev_w, w);
            report.phase_crossover = wc;
            report.gain_margin_db = -20.0 * std::log10(freq_response(l, wc).magnitude);
        }
        prev_w = w;
        prev_f = f;
        have_prev = true;
    }
    return report;
}

std::vector<NyquistPoint> nyquist_data(const TransferFunction& l, double band_lo, double band_hi,
                                       int n_points) {
    const SweepResult s = sweep(l, band_lo, band_hi, n_points);
    std::vector<NyquistPoint> out;
    out.reserve(s.points.size());
    constexpr double kDegToRad = std::numbers::pi / 180.0;
    for (const auto& p : s.points)
        out.push_back(NyquistPoint{p.magnitude * std::cos(p.phase_deg * kDegToRad),
                                   p.magnitude * std::sin(p.phase_deg * kDegToRad)});
    return out;
}

}  // namespace prtune
