#include "prtune/identify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {

struct Stage {
    double gamma_deg;
    double nu_deg;
    PlantClass plant_class;
};

constexpr Stage kStages[3] = {{0.0, -180.0, PlantClass::A},
                              {-60.0, -120.0, PlantClass::B},
                              {-120.0, -60.0, PlantClass::C}};

}  // namespace

const char* to_string(PlantClass c) {
    switch (c) {
        case PlantClass::A: return "A";
        case PlantClass::B: return "B";
        case PlantClass::C: return "C";
    }
    return "?";
}

const char* to_string(IdentifyMethod m) {
    return m == IdentifyMethod::relay ? "relay" : "analytic";
}

CyclePoint point_from_cycle(const LimitCycle& cycle, double d, const PhaseElement& f) {
    if (!cycle.converged)
        throw std::invalid_argument("point_from_cycle: cycle did not converge");
    if (!(d > 0.0)) throw std::invalid_argument("point_from_cycle: d must be > 0");
    const double omega = 2.0 * std::numbers::pi / cycle.period;
    if (omega < f.band_lo || omega > f.band_hi)
        throw std::domain_error(
            "point_from_cycle: identified frequency outside approximation band");
    const FrequencyPoint fr = freq_response(f.tf, omega);
    return CyclePoint{omega, std::numbers::pi * cycle.amplitude / (4.0 * d * fr.magnitude),
                      -180.0 - fr.phase_deg};
}

std::optional<AnalyticPoint> analytic_identify(const TransferFunction& g, double nu_deg) {
    if (nu_deg != -180.0 && nu_deg != -120.0 && nu_deg != -60.0)
        throw std::invalid_argument("analytic_identify: nu must be -180, -120 or -60 degrees");

    const int n = 4000;
    const auto omega_at = [](int i) { return std::pow(10.0, -4.0 + 8.0 * i / (n - 1.0)); };

    double prev_omega = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        const double omega = omega_at(i);
        double f;
        try {
            f = freq_response(g, omega).phase_deg - nu_deg;
        } catch (const std::domain_error&) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_f > 0.0 && f <= 0.0) {
            double lo = prev_omega, hi = omega;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = freq_response(g, mid).phase_deg - nu_deg;
                if (std::abs(fm) <= 1e-8) {
                    lo = hi = mid;
                    break;
                }
                (fm > 0.0 ? lo : hi) = mid;
                if (hi - lo <= 1e-15 * hi) break;
            }
            const double root = 0.5 * (lo + hi);
            return AnalyticPoint{root, freq_response(g, root).magnitude};
        }
        prev_omega = omega;
        prev_f = f;
        have_prev = true;
    }
    return std::nullopt;
}

IdentifiedPoint rap_identify(const TransferFunction& g, const RelayConfig& cfg) {
    for (const Stage& stage : kStages) {
        const PhaseElement f = make_phase_element(stage.gamma_deg);
        const RelayConfig resolved = resolve_relay_config(f, g, cfg);
        RelaySimResult res = simulate_relay_loop(f, g, resolved, /*record_series=*/false);
        if (!res.cycle) continue;

        // A well-defined oscillation must be step-size independent; a cycle
        // sustained only by the discrete switching lag shifts when the step
        // is halved and does not count as self-oscillatory behavior.
        RelayConfig confirm_cfg = resolved;
        confirm_cfg.h = resolved.h / 2.0;
        RelaySimResult confirm = simulate_relay_loop(f, g, confirm_cfg, /*record_series=*/false);
        if (!confirm.cycle) continue;
        if (std::abs(confirm.cycle->period - res.cycle->period) > 0.02 * res.cycle->period ||
            std::abs(confirm.cycle->amplitude - res.cycle->amplitude) > 0.05 * res.cycle->amplitude)
            continue;

        const CyclePoint pt = point_from_cycle(*confirm.cycle, cfg.d, f);
        return IdentifiedPoint{stage.plant_class, stage.nu_deg,     pt.omega,
                               pt.magnitude,      IdentifyMethod::relay, stage.gamma_deg,
                               std::move(confirm.cycle)};
    }
    throw std::domain_error("rap_identify: unclassifiable plant (no stage oscillates)");
}

IdentifiedPoint analytic_classify(const TransferFunction& g) {
    for (const Stage& stage : kStages) {
        if (const auto pt = analytic_identify(g, stage.nu_deg))
            return IdentifiedPoint{stage.plant_class, stage.nu_deg, pt->omega,       pt->magnitude,
                                   IdentifyMethod::analytic,        stage.gamma_deg, std::nullopt};
    }
    throw std::domain_error("analytic_classify: unclassifiable plant (phase never reaches -60)");
}

IdentifiedPoint identify(const TransferFunction& g, IdentifyMethod method,
                         const RelayConfig& cfg) {
    return method == IdentifyMethod::relay ? rap_identify(g, cfg) : analytic_classify(g);
}

}  // namespace prtune
