#include "jdf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jdf/error.hpp"

namespace jdf {

ArrayConstants::ArrayConstants(double f_nyq_hz, double tau_s, double c)
    : f_nyq(f_nyq_hz), tau(tau_s > 0.0 ? tau_s : 1.0 / f_nyq_hz), c_light(c) {
  if (!(f_nyq > 0.0) || !(tau > 0.0) || !(c_light > 0.0) || !std::isfinite(f_nyq)) {
    throw Error(ErrorCode::InvalidScenario, "array constants must be positive and finite");
  }
}

DelayPattern DelayPattern::mra(int M) {
  switch (M) {
    case 2: return {{0, 1}};
    case 3: return {{0, 1, 3}};
    case 4: return {{0, 1, 4, 6}};
    case 5: return {{0, 1, 4, 7, 9}};
    case 6: return {{0, 1, 6, 9, 11, 13}};
    default:
      throw Error(ErrorCode::InvalidScenario,
                  "no built-in minimum-redundancy pattern for M = " + std::to_string(M));
  }
}

std::string_view to_string(BasebandKind kind) {
  switch (kind) {
    case BasebandKind::ComplexSinusoid: return "complex-sinusoid";
    case BasebandKind::Qpsk: return "qpsk";
    case BasebandKind::BandlimitedNoise: return "bandlimited-noise";
  }
  return "unknown";
}

BasebandKind baseband_kind_from_string(std::string_view name) {
  if (name == "complex-sinusoid" || name == "sinusoid") return BasebandKind::ComplexSinusoid;
  if (name == "qpsk") return BasebandKind::Qpsk;
  if (name == "bandlimited-noise" || name == "noise") return BasebandKind::BandlimitedNoise;
  throw Error(ErrorCode::InvalidScenario, "unknown baseband kind '" + std::string(name) + "'");
}

std::string_view to_string(EstimatorMode mode) {
  return mode == EstimatorMode::Etm ? "etm" : "plain";
}

EstimatorMode estimator_mode_from_string(std::string_view name) {
  if (name == "plain") return EstimatorMode::Plain;
  if (name == "etm") return EstimatorMode::Etm;
  throw Error(ErrorCode::InvalidScenario, "unknown estimator mode '" + std::string(name) + "'");
}

std::map<int, int> difference_coarray(const DelayPattern& pattern) {
  std::map<int, int> lags;
  for (int ci : pattern.coeffs) {
    for (int cj : pattern.coeffs) ++lags[ci - cj];
  }
  return lags;
}

void check_pattern_shape(const DelayPattern& pattern) {
  if (pattern.M() < 2) {
    throw Error(ErrorCode::InvalidScenario, "delay pattern needs at least two branches");
  }
  if (pattern.coeffs.front() != 0) {
    throw Error(ErrorCode::FirstNotZero, "first delay coefficient must be 0");
  }
  for (std::size_t i = 1; i < pattern.coeffs.size(); ++i) {
    if (pattern.coeffs[i] <= pattern.coeffs[i - 1]) {
      throw Error(ErrorCode::NotAscending, "delay coefficients must be strictly ascending");
    }
  }
}

int validate_pattern(const DelayPattern& pattern) {
  check_pattern_shape(pattern);
  const auto lags = difference_coarray(pattern);
  const int max_lag = pattern.max_lag();
  for (int lag = 1; lag <= max_lag; ++lag) {
    if (!lags.contains(lag)) {
      throw Error(ErrorCode::NonContiguousCoarray,
                  "difference coarray misses lag " + std::to_string(lag));
    }
  }
  return max_lag + 1;
}

namespace {

void invalid(const std::string& what) { throw Error(ErrorCode::InvalidScenario, what); }

}  // namespace

void validate_scenario(const Scenario& s) {
  const auto& c = s.constants;
  if (!(c.f_nyq > 0.0) || !(c.tau > 0.0) || !(c.c_light > 0.0)) {
    invalid("array constants must be positive");
  }
  check_pattern_shape(s.pattern);
  if (s.L < 1) invalid("reduction factor L must be >= 1");
  if (s.n_snapshots < 1) invalid("n_snapshots must be >= 1");
  if (!(s.sigma2 >= 0.0) || !std::isfinite(s.sigma2)) invalid("sigma2 must be finite and >= 0");
  if (s.sources.empty()) invalid("scenario needs at least one source (K >= 1)");

  for (std::size_t k = 0; k < s.sources.size(); ++k) {
    const auto& src = s.sources[k];
    const std::string tag = "source " + std::to_string(k) + ": ";
    if (!(src.f_hz >= 0.0 && src.f_hz < c.f_nyq)) invalid(tag + "carrier must lie in [0, f_nyq)");
    if (!(src.theta_deg >= -90.0 && src.theta_deg <= 90.0)) invalid(tag + "DOA must lie in [-90, 90]");
    if (!(src.power > 0.0) || !std::isfinite(src.power)) invalid(tag + "power must be > 0");
    if (!(src.bandwidth_hz >= 0.0) || !std::isfinite(src.bandwidth_hz)) {
      invalid(tag + "bandwidth must be >= 0");
    }
    const bool sinusoid = src.kind == BasebandKind::ComplexSinusoid;
    if (sinusoid && src.bandwidth_hz != 0.0) invalid(tag + "complex sinusoid must have zero bandwidth");
    if (!sinusoid && src.bandwidth_hz == 0.0) invalid(tag + "modulated source needs a bandwidth");
  }

  std::vector<const SourceParams*> order;
  for (const auto& src : s.sources) order.push_back(&src);
  std::sort(order.begin(), order.end(),
            [](const SourceParams* a, const SourceParams* b) { return a->f_hz < b->f_hz; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double upper = order[k - 1]->f_hz + order[k - 1]->bandwidth_hz / 2.0;
    const double lower = order[k]->f_hz - order[k]->bandwidth_hz / 2.0;
    if (!(upper < lower)) invalid("information bands of distinct sources overlap");
  }
}

RateCheck check_rate_condition(const Scenario& s, EstimatorMode mode) {
  RateCheck r;
  r.f_sub = s.f_sub();
  for (const auto& src : s.sources) r.max_bandwidth = std::max(r.max_bandwidth, src.bandwidth_hz);
  r.margin_hz = r.f_sub - r.max_bandwidth;
  r.rate_ok = r.f_sub >= r.max_bandwidth;
  r.K = s.K();
  if (mode == EstimatorMode::Etm) {
    try {
      r.dof = validate_pattern(s.pattern);
    } catch (const Error&) {
      r.dof = 0;  // ETM cannot run on this pattern at all
    }
  } else {
    r.dof = s.M();
  }
  r.identifiable = r.dof >= r.K + 1;
  return r;
}

double unit_omega(double f_hz, const ArrayConstants& constants) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double cycles = f_hz * constants.tau;
  cycles -= std::floor(cycles);
  return two_pi * cycles;
}

double unit_phi(double f_hz, double theta_rad, const ArrayConstants& constants) {
  return 2.0 * std::numbers::pi * constants.d() * f_hz * std::sin(theta_rad) / constants.c_light;
}

std::vector<UnitPhase> unit_phases(const Scenario& s) {
  std::vector<UnitPhase> out;
  out.reserve(s.sources.size());
  for (const auto& src : s.sources) {
    out.push_back({unit_omega(src.f_hz, s.constants),
                   unit_phi(src.f_hz, deg2rad(src.theta_deg), s.constants)});
  }
  return out;
}

}  // namespace jdf
