#include "prtune/batch.hpp"
#include "prtune/foi.hpp"
#include "prtune/freq_analysis.hpp"
#include "prtune/identify.hpp"
#include "prtune/plant_io.hpp"
#include "prtune/tracking.hpp"
#include "prtune/tuner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using nlohmann::json;
namespace fs = std::filesystem;
using namespace prtune;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysisFailure = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::string output_dir = ".";
    double step = 0.0;
    std::string format = "json";
};

void print_object(const json& j, const GlobalOptions& opts) {
    if (opts.format == "csv") {
        std::string header, row;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += it.key();
            const json& v = it.value();
            if (v.is_number())
                row += format_sig(v.get<double>());
            else if (v.is_null())
                row += "nan";
            else
                row += v.is_string() ? v.get<std::string>() : v.dump();
        }
        std::cout << header << '\n' << row << '\n';
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

std::pair<double, double> parse_band(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--band", "expected lo,hi");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

RelayConfig relay_config_from(const GlobalOptions& opts, double d, double r) {
    RelayConfig cfg;
    cfg.d = d;
    cfg.r = r;
    if (opts.step > 0.0) cfg.h = opts.step;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PR controller autotuning via staged relay identification"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--seed-output-dir", opts.output_dir,
                   "directory for generated series/batch files");
    app.add_option("--step", opts.step, "fixed integration step (default: automatic)");
    app.add_option("--format", opts.format, "summary format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string plant_path, controller_path, spec_path, kind = "bode", method = "relay";
    std::string band_text = "0.01,100";
    double omega_r = 0.0, xi = 0.0, eta = 0.1, amplitude = 1.0, gamma = -60.0, d = 1.0,
           r_step = 0.0;
    int points = 200;

    CLI::App* cmd_identify = app.add_subcommand("identify", "classify a plant and identify its tuning point");
    cmd_identify->add_option("--plant", plant_path, "plant JSON file")->required();
    cmd_identify->add_option("--method", method)->check(CLI::IsMember({"relay", "analytic"}));
    cmd_identify->add_option("-d,--relay-amplitude", d);
    cmd_identify->add_option("-r,--reference", r_step);

    CLI::App* cmd_tune = app.add_subcommand("tune", "compute PR gains for a reference frequency");
    cmd_tune->add_option("--plant", plant_path)->required();
    cmd_tune->add_option("--omega-r", omega_r, "reference/resonance frequency, rad/s")->required();
    cmd_tune->add_option("--xi", xi);
    cmd_tune->add_option("--eta", eta);
    cmd_tune->add_option("--method", method)->check(CLI::IsMember({"relay", "analytic"}));
    cmd_tune->add_option("-d,--relay-amplitude", d);

    CLI::App* cmd_sim = app.add_subcommand("simulate", "closed-loop sinusoid tracking run");
    cmd_sim->add_option("--plant", plant_path)->required();
    cmd_sim->add_option("--controller", controller_path, "controller JSON file")->required();
    cmd_sim->add_option("--omega-r", omega_r, "reference frequency (default: controller resonance)");
    cmd_sim->add_option("--amplitude", amplitude);

    CLI::App* cmd_relay = app.add_subcommand("simulate-relay", "single relay experiment");
    cmd_relay->add_option("--plant", plant_path)->required();
    cmd_relay->add_option("--gamma", gamma, "relay phase: 0, -60 or -120");
    cmd_relay->add_option("-d,--relay-amplitude", d);
    cmd_relay->add_option("-r,--reference", r_step);

    CLI::App* cmd_freq = app.add_subcommand("freqresp", "frequency response sweep as CSV");
    cmd_freq->add_option("--plant", plant_path)->required();
    cmd_freq->add_option("--controller", controller_path);
    cmd_freq->add_option("--kind", kind)->check(CLI::IsMember({"bode", "nyquist"}));
    cmd_freq->add_option("--band", band_text, "lo,hi in rad/s");
    cmd_freq->add_option("--points", points);

    CLI::App* cmd_margins = app.add_subcommand("margins", "gain/phase margins of plant or loop");
    cmd_margins->add_option("--plant", plant_path)->required();
    cmd_margins->add_option("--controller", controller_path);

    CLI::App* cmd_foi = app.add_subcommand("foi-check", "flat-phase element sweep as CSV");
    cmd_foi->add_option("--gamma", gamma, "element phase: 0, -60 or -120");
    cmd_foi->add_option("--band", band_text);
    cmd_foi->add_option("--points", points);

    CLI::App* cmd_batch = app.add_subcommand("batch", "identify/tune/simulate a plant set");
    cmd_batch->add_option("--spec", spec_path, "batch spec JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_identify) {
            const TransferFunction g = load_plant(plant_path);
            const IdentifiedPoint p =
                identify(g, method == "relay" ? IdentifyMethod::relay : IdentifyMethod::analytic,
                         relay_config_from(opts, d, r_step));
            print_object(identified_point_to_json(p), opts);
        } else if (*cmd_tune) {
            const TransferFunction g = load_plant(plant_path);
            const IdentifiedPoint p =
                identify(g, method == "relay" ? IdentifyMethod::relay : IdentifyMethod::analytic,
                         relay_config_from(opts, d, r_step));
            const TuneResult result = tune(p, omega_r, xi, eta);
            json out{{"class", to_string(p.plant_class)},
                     {"point", identified_point_to_json(p)},
                     {"p", {{"m_rho", result.p.m_rho}, {"rho_deg", result.p.rho_deg}}},
                     {"kp", result.controller.kp},
                     {"kr1", result.controller.kr1},
                     {"kr2", result.controller.kr2},
                     {"warnings", result.warnings}};
            if (opts.format == "csv")
                print_object(json{{"class", to_string(p.plant_class)},
                                  {"kp", result.controller.kp},
                                  {"kr1", result.controller.kr1},
                                  {"kr2", result.controller.kr2}},
                             opts);
            else
                print_object(out, opts);
        } else if (*cmd_sim) {
            const TransferFunction g = load_plant(plant_path);
            const PRController c = load_controller(controller_path);
            TrackingConfig cfg;
            cfg.omega_r = omega_r > 0.0 ? omega_r : c.omega_r;
            cfg.a_r = amplitude;
            if (opts.step > 0.0) cfg.h = opts.step;
            const TrackingResult run = simulate_tracking(g, c, cfg);
            fs::create_directories(opts.output_dir);
            write_series_csv((fs::path(opts.output_dir) / "simulate.csv").string(), run.series);
            PerformanceReport report;
            if (run.diverged) {
                report.unstable = true;
                report.t_s = report.n_s = report.m_o = report.y_r =
                    std::numeric_limits<double>::quiet_NaN();
            } else {
                report = evaluate_tracking(g, c, cfg);
            }
            print_object(performance_to_json(report), opts);
            if (report.unstable || !report.converged) return kExitAnalysisFailure;
        } else if (*cmd_relay) {
            const TransferFunction g = load_plant(plant_path);
            const PhaseElement f = make_phase_element(gamma);
            const RelaySimResult res =
                simulate_relay_loop(f, g, relay_config_from(opts, d, r_step));
            fs::create_directories(opts.output_dir);
            write_series_csv((fs::path(opts.output_dir) / "relay.csv").string(), res.series);
            if (res.cycle) {
                print_object(limit_cycle_to_json(*res.cycle), opts);
            } else {
                print_object(json{{"converged", false}, {"A", nullptr}, {"T", nullptr},
                                  {"bias", nullptr}, {"cycles_used", nullptr}},
                             opts);
                return kExitAnalysisFailure;
            }
        } else if (*cmd_freq) {
            TransferFunction l = load_plant(plant_path);
            if (!controller_path.empty())
                l = series(pr_transfer_function(load_controller(controller_path)), l);
            const auto [lo, hi] = parse_band(band_text);
            if (kind == "bode") {
                std::cout << "omega,magnitude_db,phase_deg\n";
                for (const auto& p : sweep(l, lo, hi, points).points)
                    std::cout << format_sig(p.omega) << ','
                              << format_sig(20.0 * std::log10(p.magnitude)) << ','
                              << format_sig(p.phase_deg) << '\n';
            } else {
                std::cout << "re,im\n";
                for (const auto& p : nyquist_data(l, lo, hi, points))
                    std::cout << format_sig(p.re) << ',' << format_sig(p.im) << '\n';
            }
        } else if (*cmd_margins) {
            TransferFunction l = load_plant(plant_path);
            if (!controller_path.empty())
                l = series(pr_transfer_function(load_controller(controller_path)), l);
            print_object(margin_report_to_json(margins(l)), opts);
        } else if (*cmd_foi) {
            const PhaseElement element = make_phase_element(gamma);
            const auto [lo, hi] = parse_band(band_text);
            std::cout << "omega,magnitude_db,phase_deg\n";
            for (const auto& p : sweep(element.tf, lo, hi, points).points)
                std::cout << format_sig(p.omega) << ','
                          << format_sig(20.0 * std::log10(p.magnitude)) << ','
                          << format_sig(p.phase_deg) << '\n';
        } else if (*cmd_batch) {
            BatchSpec spec = load_batch_spec(spec_path);
            if (spec.output == ".") spec.output = opts.output_dir;
            if (opts.step > 0.0) spec.step = opts.step;
            const BatchReport report = run_batch(spec);
            std::cout << "batch: " << report.rows.size() << " cases, " << report.failures
                      << " failures\n";
            if (report.failures > 0) return kExitAnalysisFailure;
        }
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitAnalysisFailure;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
