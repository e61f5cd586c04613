#include "prtune/batch.hpp"

#include "prtune/plant_io.hpp"
#include "prtune/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace prtune {

using nlohmann::json;
namespace fs = std::filesystem;

BatchSpec load_batch_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open batch spec: " + path);
    json j;
    in >> j;

    BatchSpec spec;
    const fs::path base = fs::path(path).parent_path();
    for (const auto& p : j.at("plants")) {
        const std::string file = p.at("file").get<std::string>();
        const fs::path resolved = fs::path(file).is_absolute() ? fs::path(file) : base / file;
        spec.plants.push_back(BatchPlant{p.at("name").get<std::string>(), resolved.string()});
    }
    if (j.contains("ratios")) spec.ratios = j["ratios"].get<std::vector<double>>();
    spec.xi = j.value("xi", 0.0);
    const std::string method = j.value("method", "relay");
    if (method == "relay")
        spec.method = IdentifyMethod::relay;
    else if (method == "analytic")
        spec.method = IdentifyMethod::analytic;
    else
        throw std::runtime_error("batch spec: method must be \"relay\" or \"analytic\"");
    spec.output = j.value("output", ".");
    return spec;
}

BatchReport run_batch(const BatchSpec& spec) {
    std::set<std::string> names;
    for (const auto& p : spec.plants)
        if (!names.insert(p.name).second)
            throw std::invalid_argument("run_batch: duplicate plant name " + p.name);
    for (double ratio : spec.ratios)
        if (!(ratio > 0.0 && ratio < 1.0))
            throw std::invalid_argument("run_batch: ratios must lie in (0, 1)");

    std::vector<double> ratios = spec.ratios;
    std::sort(ratios.begin(), ratios.end());

    fs::create_directories(spec.output);

    BatchReport report;
    json index;
    index["plants"] = json::array();

    for (const auto& plant : spec.plants) {
        json plant_entry{{"name", plant.name}, {"csv", plant.name + ".csv"}};
        plant_entry["rows"] = json::array();

        std::string identify_error;
        IdentifiedPoint point{PlantClass::A, 0, 0, 0, spec.method, 0, std::nullopt};
        try {
            const TransferFunction g = load_plant(plant.file);
            point = identify(g, spec.method);
            plant_entry["identified"] = identified_point_to_json(point);

            std::ofstream csv(fs::path(spec.output) / (plant.name + ".csv"));
            csv << "omega_r,xi,kp,kr1,kr2,t_s,n_s,m_o\n";
            for (double ratio : ratios) {
                BatchRow row;
                row.plant = plant.name;
                row.ratio = ratio;
                row.omega_r = ratio * point.omega_nu;
                row.xi = spec.xi;
                try {
                    const TuneResult tuned = tune(point, row.omega_r, spec.xi);
                    row.kp = tuned.controller.kp;
                    row.kr1 = tuned.controller.kr1;
                    row.kr2 = tuned.controller.kr2;
                    TrackingConfig cfg;
                    cfg.omega_r = row.omega_r;
                    if (spec.step > 0.0) cfg.h = spec.step;
                    const PerformanceReport perf = evaluate_tracking(g, tuned.controller, cfg);
                    row.t_s = perf.t_s;
                    row.n_s = perf.n_s;
                    row.m_o = perf.m_o;
                    if (perf.unstable)
                        row.status = "unstable";
                    else if (!perf.converged)
                        row.status = "unsettled";
                } catch (const std::exception& ex) {
                    row.status = std::string("error: ") + ex.what();
                    row.t_s = row.n_s = row.m_o = std::numeric_limits<double>::quiet_NaN();
                }
                if (row.status != "ok") ++report.failures;
                csv << format_sig(row.omega_r) << ',' << format_sig(row.xi) << ','
                    << format_sig(row.kp) << ',' << format_sig(row.kr1) << ','
                    << format_sig(row.kr2) << ',' << format_sig(row.t_s) << ','
                    << format_sig(row.n_s) << ',' << format_sig(row.m_o) << '\n';
                plant_entry["rows"].push_back(json{{"ratio", ratio}, {"status", row.status}});
                report.rows.push_back(std::move(row));
            }
        } catch (const std::exception& ex) {
            identify_error = ex.what();
            for (double ratio : ratios) {
                BatchRow row;
                row.plant = plant.name;
                row.ratio = ratio;
                row.status = std::string("error: ") + identify_error;
                row.t_s = row.n_s = row.m_o = std::numeric_limits<double>::quiet_NaN();
                ++report.failures;
                plant_entry["rows"].push_back(json{{"ratio", ratio}, {"status", row.status}});
                report.rows.push_back(std::move(row));
            }
            plant_entry["error"] = identify_error;
        }
        index["plants"].push_back(std::move(plant_entry));
    }

    std::ofstream out(fs::path(spec.output) / "index.json");
    out << index.dump(2) << '\n';
    return report;
}

}  // namespace prtune
