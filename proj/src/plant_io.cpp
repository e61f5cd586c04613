#include "prtune/plant_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace prtune {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

Eigen::VectorXd coeffs_from_json(const json& arr, const char* what) {
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error(std::string("plant file: ") + what +
                                 " must be a non-empty array");
    Eigen::VectorXd v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
    return v;
}

}  // namespace

TransferFunction plant_from_json(const json& j) {
    if (!j.contains("num") || !j.contains("den"))
        throw std::runtime_error("plant file: expected {\"num\": [...], \"den\": [...]}");
    return TransferFunction(coeffs_from_json(j["num"], "num"), coeffs_from_json(j["den"], "den"),
                            j.value("delay", 0.0));
}

TransferFunction load_plant(const std::string& path) { return plant_from_json(load_json_file(path)); }

PRController controller_from_json(const json& j) {
    PRController c;
    c.kp = j.at("kp").get<double>();
    c.kr1 = j.at("kr1").get<double>();
    c.kr2 = j.at("kr2").get<double>();
    c.omega_r = j.at("omega_r").get<double>();
    c.xi = j.value("xi", 0.0);
    c.eta = j.value("eta", 0.1);
    return c;
}

PRController load_controller(const std::string& path) {
    return controller_from_json(load_json_file(path));
}

json controller_to_json(const PRController& c) {
    return json{{"kp", c.kp},           {"kr1", c.kr1}, {"kr2", c.kr2},
                {"omega_r", c.omega_r}, {"xi", c.xi},   {"eta", c.eta}};
}

json identified_point_to_json(const IdentifiedPoint& p) {
    return json{{"class", to_string(p.plant_class)}, {"nu_deg", p.nu_deg},
                {"omega", p.omega_nu},               {"magnitude", p.m_nu},
                {"method", to_string(p.method)},     {"gamma_deg", p.gamma_deg}};
}

json performance_to_json(const PerformanceReport& r) {
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"t_s", num(r.t_s)},         {"n_s", num(r.n_s)},
                {"m_o", num(r.m_o)},         {"y_r", num(r.y_r)},
                {"converged", r.converged},  {"unstable", r.unstable}};
}

json margin_report_to_json(const MarginReport& r) {
    json j{{"phase_margin_deg", r.phase_margin_deg},
           {"gain_crossover", r.gain_crossover},
           {"crossover_unique", r.crossover_unique}};
    j["gain_margin_db"] = r.gain_margin_db ? json(*r.gain_margin_db) : json(nullptr);
    j["phase_crossover"] = r.phase_crossover ? json(*r.phase_crossover) : json(nullptr);
    return j;
}

json limit_cycle_to_json(const LimitCycle& c) {
    return json{{"A", c.amplitude},
                {"T", c.period},
                {"bias", c.bias_final},
                {"converged", c.converged},
                {"cycles_used", c.cycles_used}};
}

std::string format_sig(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "t,r,e,u,y\n";
    for (size_t i = 0; i < series.size(); ++i)
        out << format_sig(series.t[i]) << ',' << format_sig(series.r[i]) << ','
            << format_sig(series.e[i]) << ',' << format_sig(series.u[i]) << ','
            << format_sig(series.y[i]) << '\n';
}

}  // namespace prtune
