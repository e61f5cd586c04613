#pragma once

#include "prtune/identify.hpp"
#include "prtune/transfer_function.hpp"

#include <string>
#include <vector>

namespace prtune {

/// Target value p = m_rho * exp(j rho) for the loop response at the
/// identified frequency.
struct DesignPoint {
    double m_rho;
    double rho_deg;
};

/// Proportional-resonant controller
///   C(s) = kp + (kr1 s + kr2) / (s^2 + 2 xi omega_r s + omega_r^2).
/// Gains produced by tune_generic satisfy kr2 = (eta^2 - 1) omega_r^2 kp,
/// which pins the controller zero product at (eta omega_r)^2.
struct PRController {
    double kp = 0.0;
    double kr1 = 0.0;
    double kr2 = 0.0;
    double omega_r = 0.0;
    double xi = 0.0;
    double eta = 0.1;
};

/// Solves C(j omega_nu) = (m_rho / m_nu) * exp(j (rho - nu)) for the PR gains
/// under the zero-product constraint. Requires 0 < omega_r < omega_nu and
/// eta in (0, 1).
PRController tune_generic(double m_nu, double omega_nu, double nu_deg, const DesignPoint& p,
                          double omega_r, double xi, double eta);

/// Recommended design point per class; class A switches at an
/// omega_r / omega_u ratio of 0.5.
DesignPoint design_point_for(PlantClass plant_class, double ratio);

struct TuneResult {
    PRController controller;
    DesignPoint p;
    std::vector<std::string> warnings;
};

/// Class-dispatched tuning of an identified point with eta = 0.1; warns when
/// omega_r crowds the identified frequency (ratio above 0.9).
TuneResult tune(const IdentifiedPoint& point, double omega_r, double xi, double eta = 0.1);

/// Biproper rational form of the controller.
TransferFunction pr_transfer_function(const PRController& c);

/// |C(j omega_nu) - (m_rho / m_nu) exp(j (rho - nu))|; zero (to rounding) for
/// any controller produced by tune_generic.
double verify_tuning_equation(const PRController& c, const IdentifiedPoint& point,
                              const DesignPoint& p);

}  // namespace prtune
