#include "jdf/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "jdf/error.hpp"

namespace jdf {

using nlohmann::json;

Scenario RunConfig::resolved() const {
  Scenario s = scenario;
  if (snr_db) s.sigma2 = calibrate_sigma2(s, *snr_db);
  return s;
}

RunConfig RunConfig::with_snr(double snr) const {
  RunConfig c = *this;
  c.snr_db = snr;
  return c;
}

double RunConfig::freq_tolerance() const {
  return freq_tolerance_hz > 0.0 ? freq_tolerance_hz : 0.002 * scenario.constants.f_nyq;
}

namespace {

SourceParams parse_source(const json& j) {
  SourceParams s;
  s.f_hz = j.at("f_hz").get<double>();
  s.theta_deg = j.at("theta_deg").get<double>();
  s.power = j.value("power", 1.0);
  s.kind = baseband_kind_from_string(j.value("kind", std::string("complex-sinusoid")));
  s.bandwidth_hz = j.value("bandwidth_hz", 0.0);
  return s;
}

DelayPattern parse_pattern(const json& j) {
  if (j.is_number_integer()) return DelayPattern::mra(j.get<int>());
  if (j.is_object()) return DelayPattern::mra(j.at("mra").get<int>());
  return DelayPattern{j.get<std::vector<int>>()};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  RunConfig cfg;
  try {
    const json j = json::parse(json_text);
    const auto& array = j.at("array");
    cfg.scenario.constants = ArrayConstants(array.at("f_nyq").get<double>(), array.value("tau", 0.0),
                                            array.value("c_light", kSpeedOfLight));
    cfg.scenario.pattern = parse_pattern(j.at("pattern"));
    cfg.scenario.L = j.at("L").get<int>();
    for (const auto& src : j.at("sources")) cfg.scenario.sources.push_back(parse_source(src));
    if (j.contains("snr_db") && j.contains("sigma2")) {
      throw Error(ErrorCode::InvalidScenario, "give either snr_db or sigma2, not both");
    }
    if (j.contains("snr_db")) {
      cfg.snr_db = j.at("snr_db").get<double>();
    } else {
      cfg.scenario.sigma2 = j.at("sigma2").get<double>();
    }
    cfg.scenario.n_snapshots = j.at("n_snapshots").get<int>();

    if (j.contains("synthesis")) cfg.synth = synth_mode_from_string(j.at("synthesis").get<std::string>());
    cfg.synth_options.sinusoid_dither_hz = j.value("sinusoid_dither_hz", 0.0);
    if (j.contains("grids")) {
      cfg.grids.freq_points = j.at("grids").value("frequency", cfg.grids.freq_points);
      cfg.grids.doa_points = j.at("grids").value("doa", cfg.grids.doa_points);
    }
    if (j.contains("tolerance")) {
      cfg.freq_tolerance_hz = j.at("tolerance").value("frequency_hz", 0.0);
      cfg.doa_tolerance_deg = j.at("tolerance").value("doa_deg", cfg.doa_tolerance_deg);
    }
    cfg.noise_scale = j.value("noise_scale", 1.0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  }
  validate_scenario(cfg.scenario);
  if (cfg.grids.freq_points < 3 || cfg.grids.doa_points < 3) {
    throw Error(ErrorCode::GridEmpty, "grids need at least three points");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace jdf
