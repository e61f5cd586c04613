#pragma once

#include "prtune/freq_analysis.hpp"
#include "prtune/identify.hpp"
#include "prtune/tracking.hpp"
#include "prtune/tuner.hpp"

#include <json.hpp>

#include <string>

namespace prtune {

/// Plant file: {"num": [...], "den": [...], "delay": seconds}, coefficients
/// in descending powers of s, delay optional (default 0).
TransferFunction plant_from_json(const nlohmann::json& j);
TransferFunction load_plant(const std::string& path);

/// Controller file: {"kp", "kr1", "kr2", "omega_r", "xi", "eta"}, the last
/// two optional (0 and 0.1).
PRController controller_from_json(const nlohmann::json& j);
PRController load_controller(const std::string& path);
nlohmann::json controller_to_json(const PRController& c);

nlohmann::json identified_point_to_json(const IdentifiedPoint& p);
nlohmann::json performance_to_json(const PerformanceReport& r);
nlohmann::json margin_report_to_json(const MarginReport& r);
nlohmann::json limit_cycle_to_json(const LimitCycle& c);

/// Fixed-point-free decimal with 6 significant digits, '.' separator; the
/// CSV number format used across the CLI.
std::string format_sig(double v);

void write_series_csv(const std::string& path, const TimeSeries& series);

}  // namespace prtune
