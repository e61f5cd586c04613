#pragma once

#include "prtune/identify.hpp"
#include "prtune/tracking.hpp"

#include <string>
#include <vector>

namespace prtune {

struct BatchPlant {
    std::string name;
    std::string file;
};

/// One batch run: identify each plant once, then tune and evaluate at every
/// omega_r = ratio * omega_nu. Outputs one CSV per plant plus a JSON index.
struct BatchSpec {
    std::vector<BatchPlant> plants;
    std::vector<double> ratios{0.1, 0.3, 0.5, 0.7, 0.9};
    double xi = 0.0;
    IdentifyMethod method = IdentifyMethod::relay;
    std::string output = ".";
    double step = 0.0;  ///< fixed integration step override; 0 = automatic
};

struct BatchRow {
    std::string plant;
    double ratio = 0.0;
    double omega_r = 0.0;
    double xi = 0.0;
    double kp = 0.0, kr1 = 0.0, kr2 = 0.0;
    double t_s = 0.0, n_s = 0.0, m_o = 0.0;
    std::string status = "ok";  ///< "ok", "unstable", "unsettled" or "error: ..."
};

struct BatchReport {
    std::vector<BatchRow> rows;
    int failures = 0;
};

/// Spec file: {"plants": [{"name", "file"}...], "ratios": [...], "xi": 0,
/// "method": "relay"|"analytic", "output": dir}. Plant paths are resolved
/// relative to the spec file's directory.
BatchSpec load_batch_spec(const std::string& path);

BatchReport run_batch(const BatchSpec& spec);

}  // namespace prtune
