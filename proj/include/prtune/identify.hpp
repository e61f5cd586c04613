#pragma once

#include "prtune/relay.hpp"

#include <optional>

namespace prtune {

/// A: phase reaches -180 deg; B: only -120 deg; C: only -60 deg.
enum class PlantClass { A, B, C };

enum class IdentifyMethod { relay, analytic };

const char* to_string(PlantClass c);
const char* to_string(IdentifyMethod m);

/// One identified point of the plant's frequency response, G(j omega_nu) =
/// m_nu at phase nu. nu carries the nominal class phase; the relay path's
/// realized phase differs from it by at most the flat-phase element's ripple.
struct IdentifiedPoint {
    PlantClass plant_class;
    double nu_deg;
    double omega_nu;
    double m_nu;
    IdentifyMethod method;
    double gamma_deg;
    std::optional<LimitCycle> cycle;
};

/// Frequency-response point recovered from a measured limit cycle through the
/// first-harmonic balance: |G| = pi A / (4 d |F|), phase = -180 - angle(F),
/// both using the realized (not ideal) element response at omega = 2 pi / T.
struct CyclePoint {
    double omega;
    double magnitude;
    double phase_deg;
};

CyclePoint point_from_cycle(const LimitCycle& cycle, double d, const PhaseElement& f);

struct AnalyticPoint {
    double omega;
    double magnitude;
};

/// Desk-scale oracle for omega_nu = min omega with angle(G) = nu: first sign
/// change of (phase - nu) on a log grid over [1e-4, 1e4], refined by bisection
/// to 1e-8 degrees. nullopt when the phase never attains nu.
std::optional<AnalyticPoint> analytic_identify(const TransferFunction& g, double nu_deg);

/// Staged relay experiment: relay phases 0, -60, -120 are tried in order and
/// the first sustained oscillation fixes the class (A, B, C respectively).
IdentifiedPoint rap_identify(const TransferFunction& g, const RelayConfig& cfg = {});

/// Same staging against the analytic oracle: the first nu in {-180, -120,
/// -60} the phase reaches defines the class.
IdentifiedPoint analytic_classify(const TransferFunction& g);

IdentifiedPoint identify(const TransferFunction& g, IdentifyMethod method,
                         const RelayConfig& cfg = {});

}  // namespace prtune
