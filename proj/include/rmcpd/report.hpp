#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rmcpd/detect.hpp"
#include "rmcpd/segmentation.hpp"
#include "rmcpd/simulate.hpp"

namespace rmcpd {

// Machine-readable reports. Key order is fixed (ordered_json) and all inputs
// are deterministic given the seed, so identical runs serialize identically.
using json = nlohmann::ordered_json;

json report_header(const std::string& command, std::uint64_t seed);
json detect_report(const DetectResult& res, std::uint64_t seed);
json segmentation_report(const SegmentationResult& res, const DetectResult* top, std::uint64_t seed);
json critical_value_report(int n, int n0, int n1, double alpha,
                           const std::vector<std::pair<std::string, json>>& tables, std::uint64_t seed);
json simulate_report(const SimulateOptions& options, const std::vector<SettingPower>& table);

std::string to_csv(const std::vector<SettingPower>& table);

}  // namespace rmcpd
