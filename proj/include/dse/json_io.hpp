#pragma once

// JSON documents for models, design reports, scenario configurations and
// plug-in requests, plus plain-text file helpers.  Every document carries a
// schema_version field that parsing validates.  Numbers are written with
// shortest round-trip precision, so serialize-then-parse reproduces every
// double bit for bit.  The layouts are documented in docs/formats.md.

#include <string>

#include "dse/design.hpp"
#include "dse/network_model.hpp"
#include "dse/power_network.hpp"

namespace dse {

inline constexpr int kSchemaVersion = 1;

std::string model_to_json(const NetworkModel& model);
NetworkModel model_from_json(const std::string& text);

std::string report_to_json(const DesignReport& report);
DesignReport report_from_json(const std::string& text);

std::string scenario_to_json(const PowerScenario& scenario);
PowerScenario scenario_from_json(const std::string& text);

std::string plugin_request_to_json(const PlugInRequest& request);
PlugInRequest plugin_request_from_json(const std::string& text);

// Whole-file helpers; IoError with the path on any failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dse
