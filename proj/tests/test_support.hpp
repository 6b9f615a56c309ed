#pragma once

#include <string>

#include "hfcal/analysis.hpp"
#include "hfcal/detector.hpp"
#include "hfcal/evtgen.hpp"

namespace hfcal::test {

inline std::string config_path(const std::string& name) { return std::string(HFCAL_CONFIG_DIR) + "/" + name; }

inline const GeneratorConfig& generator_config() {
  static const GeneratorConfig c = GeneratorConfig::load(config_path("generator.cfg"));
  return c;
}

inline DetectorScenario scenario(const std::string& name) { return load_scenario(config_path("scenarios.cfg"), name); }

inline const Cuts& cuts() {
  static const Cuts c = Cuts::load(config_path("cuts.cfg"));
  return c;
}

}  // namespace hfcal::test
