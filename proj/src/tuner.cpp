#include "prtune/tuner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

PRController tune_generic(double m_nu, double omega_nu, double nu_deg, const DesignPoint& p,
                          double omega_r, double xi, double eta) {
    if (!(m_nu > 0.0)) throw std::invalid_argument("tune_generic: m_nu must be > 0");
    if (!(p.m_rho > 0.0)) throw std::invalid_argument("tune_generic: m_rho must be > 0");
    if (!(xi >= 0.0)) throw std::invalid_argument("tune_generic: xi must be >= 0");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("tune_generic: eta must be in (0, 1)");
    if (!(omega_r > 0.0) || omega_r >= omega_nu)
        throw std::invalid_argument("tune_generic: resonance above identified frequency");

    const double delta = (p.rho_deg - nu_deg) * kDegToRad;
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    const double wr2 = omega_r * omega_r;
    const double wn2 = omega_nu * omega_nu;
    const double denom = m_nu * (eta * eta * wr2 - wn2);  // < 0 under the preconditions

    PRController out;
    out.omega_r = omega_r;
    out.xi = xi;
    out.eta = eta;
    out.kp = p.m_rho * ((wr2 - wn2) * c - 2.0 * omega_nu * xi * omega_r * s) / denom;
    out.kr2 = (eta * eta - 1.0) * wr2 * out.kp;
    out.kr1 = p.m_rho * ((wr2 - wn2) * s + 2.0 * omega_nu * xi * omega_r * c) / (m_nu * omega_nu) -
              2.0 * xi * omega_r * out.kp;
    return out;
}

DesignPoint design_point_for(PlantClass plant_class, double ratio) {
    switch (plant_class) {
        case PlantClass::A:
            return ratio < 0.5 ? DesignPoint{0.4, -183.0} : DesignPoint{0.4, -181.0};
        case PlantClass::B:
            return DesignPoint{1.0, -130.0};
        case PlantClass::C:
            return DesignPoint{1.0, -90.0};
    }
    throw std::logic_error("design_point_for: bad class");
}

TuneResult tune(const IdentifiedPoint& point, double omega_r, double xi, double eta) {
    const double ratio = omega_r / point.omega_nu;
    TuneResult result;
    result.p = design_point_for(point.plant_class, ratio);
    result.controller =
        tune_generic(point.m_nu, point.omega_nu, point.nu_deg, result.p, omega_r, xi, eta);
    if (ratio > 0.9)
        result.warnings.push_back(
            "omega_r exceeds 0.9 of the identified frequency; expect degraded performance");
    return result;
}

TransferFunction pr_transfer_function(const PRController& c) {
    const double wr2 = c.omega_r * c.omega_r;
    return TransferFunction(
        {c.kp, 2.0 * c.xi * c.omega_r * c.kp + c.kr1, c.kr2 + c.kp * wr2},
        {1.0, 2.0 * c.xi * c.omega_r, wr2});
}

double verify_tuning_equation(const PRController& c, const IdentifiedPoint& point,
                              const DesignPoint& p) {
    const std::complex<double> actual =
        pr_transfer_function(c).evaluate(std::complex<double>(0.0, point.omega_nu));
    const double delta = (p.rho_deg - point.nu_deg) * kDegToRad;
    const std::complex<double> target =
        p.m_rho / point.m_nu * std::complex<double>(std::cos(delta), std::sin(delta));
    return std::abs(actual - target);
}

}  // namespace prtune
