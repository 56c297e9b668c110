#pragma once

#include <map>
#include <numbers>
#include <string_view>
#include <vector>

namespace jdf {

inline constexpr double kSpeedOfLight = 2.99792458e8;

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Physical constants of the two-element receiver.
///
/// The element spacing is always half a wavelength at the Nyquist rate,
/// d = c / (2 f_nyq), so the inter-element phase stays inside (-pi, pi)
/// for every carrier below f_nyq.
struct ArrayConstants {
  double f_nyq = 10e9;  // Hz
  double tau = 1e-10;   // s, minimal delay unit
  double c_light = kSpeedOfLight;

  ArrayConstants() = default;
  /// tau <= 0 selects the default tau = T = 1/f_nyq.
  explicit ArrayConstants(double f_nyq_hz, double tau_s = 0.0, double c = kSpeedOfLight);

  double T() const { return 1.0 / f_nyq; }
  double d() const { return c_light / (2.0 * f_nyq); }
  /// Upper end of the unambiguous frequency scan, 1/tau.
  double scan_span() const { return 1.0 / tau; }
};

/// Integer delay coefficients c_1 = 0 < c_2 < ... < c_M of one multi-coset
/// branch set.  Structural checks live in validate_pattern().
struct DelayPattern {
  std::vector<int> coeffs;

  int M() const { return static_cast<int>(coeffs.size()); }
  int max_lag() const { return coeffs.empty() ? 0 : coeffs.back(); }

  /// Minimum-redundancy pattern for 2 <= M <= 6.
  static DelayPattern mra(int M);
};

enum class BasebandKind { ComplexSinusoid, Qpsk, BandlimitedNoise };

std::string_view to_string(BasebandKind kind);
BasebandKind baseband_kind_from_string(std::string_view name);

struct SourceParams {
  double f_hz = 0.0;
  double theta_deg = 0.0;
  double power = 1.0;  // linear
  BasebandKind kind = BasebandKind::ComplexSinusoid;
  double bandwidth_hz = 0.0;  // two-sided, 0 for sinusoids
};

struct Scenario {
  ArrayConstants constants;
  DelayPattern pattern;
  int L = 1;
  std::vector<SourceParams> sources;
  double sigma2 = 0.0;
  int n_snapshots = 1024;

  int K() const { return static_cast<int>(sources.size()); }
  int M() const { return pattern.M(); }
  double f_sub() const { return constants.f_nyq / L; }
};

enum class EstimatorMode { Plain, Etm };

std::string_view to_string(EstimatorMode mode);
EstimatorMode estimator_mode_from_string(std::string_view name);

/// Every lag c_i - c_j over all ordered pairs, with multiplicity.
std::map<int, int> difference_coarray(const DelayPattern& pattern);

/// Returns Q = c_M + 1 when the pattern is well formed and its difference
/// coarray covers every lag in [-c_M, c_M]; throws otherwise.
int validate_pattern(const DelayPattern& pattern);

/// Checks the structural invariants of a pattern (M >= 2, c_1 = 0, strictly
/// ascending) without requiring a contiguous coarray.
void check_pattern_shape(const DelayPattern& pattern);

/// Throws InvalidScenario (or a pattern error) when any invariant is broken.
void validate_scenario(const Scenario& scenario);

struct RateCheck {
  double f_sub = 0.0;
  double max_bandwidth = 0.0;
  double margin_hz = 0.0;  // f_sub - max B_k
  bool rate_ok = false;
  int dof = 0;  // Q with ETM, M without
  int K = 0;
  bool identifiable = false;  // dof >= K + 1

  bool ok() const { return rate_ok && identifiable; }
};

RateCheck check_rate_condition(const Scenario& scenario, EstimatorMode mode);

struct UnitPhase {
  double omega = 0.0;  // 2 pi f tau, wrapped to [0, 2 pi)
  double phi = 0.0;    // 2 pi d f sin(theta) / c
};

double unit_omega(double f_hz, const ArrayConstants& constants);
double unit_phi(double f_hz, double theta_rad, const ArrayConstants& constants);

std::vector<UnitPhase> unit_phases(const Scenario& scenario);

}  // namespace jdf
