#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "jdf/scenario.hpp"
#include "jdf/subspace.hpp"
#include "jdf/synth.hpp"

namespace jdf {

/// Everything needed to run one scenario end to end.
struct RunConfig {
  Scenario scenario;
  std::optional<double> snr_db;  // when set, sigma2 is calibrated from it
  SynthMode synth = SynthMode::ExactDelay;
  SynthOptions synth_options;
  Grids grids;
  double noise_scale = 1.0;  // analytic-covariance shortcut only
  double freq_tolerance_hz = 0.0;  // 0 selects 0.2% of f_nyq
  double doa_tolerance_deg = 3.0;

  /// The scenario with sigma2 resolved from snr_db when present.
  Scenario resolved() const;
  RunConfig with_snr(double snr) const;
  double freq_tolerance() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace jdf
