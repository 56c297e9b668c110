#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jdf/scenario.hpp"

namespace jdf {

using cdouble = std::complex<double>;

enum class SynthMode {
  PhaseModel,  // narrowband model: every branch reads the envelope at n L
  ExactDelay,  // branch m reads the Nyquist-rate trace at n L - c_m
};

std::string_view to_string(SynthMode mode);
SynthMode synth_mode_from_string(std::string_view name);

inline constexpr double kRrcRolloff = 0.25;
inline constexpr int kRrcSpanSymbols = 8;
inline constexpr int kNoiseSpanSymbols = 16;

struct SynthOptions {
  /// Complex sinusoids get a uniform random offset in [-dither, dither] Hz.
  double sinusoid_dither_hz = 0.0;
};

/// Sub-Nyquist channel outputs, rows 0..M-1 from the reference element and
/// rows M..2M-1 from the second element.  Columns are snapshots.
struct SnapshotMatrix {
  Eigen::MatrixXcd data;
  int M = 0;
  int L = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  int N() const { return static_cast<int>(data.cols()); }
};

/// Band-limited complex envelope evaluated lazily at integer Nyquist-rate
/// sample indices.  Random symbols are drawn once for the index window
/// given at construction, so evaluation is a pure lookup afterwards.
class BasebandGenerator {
 public:
  BasebandGenerator(const SourceParams& source, double f_nyq, std::int64_t first_index,
                    std::int64_t last_index, std::uint64_t seed, const SynthOptions& options = {});

  cdouble operator()(std::int64_t index) const;

  /// Whether the envelope is constant in time (sinusoid without dither).
  bool constant() const { return kind_ == BasebandKind::ComplexSinusoid && dither_cycles_ == 0.0; }

 private:
  BasebandKind kind_;
  double amplitude_ = 1.0;
  double dither_cycles_ = 0.0;  // per Nyquist sample
  cdouble phasor_{1.0, 0.0};

  // Pulse-shaped kinds.
  double samples_per_symbol_ = 1.0;
  double timing_offset_ = 0.0;
  int half_span_ = 0;
  std::int64_t first_symbol_ = 0;
  std::vector<cdouble> symbols_;
};

/// Root-raised-cosine impulse response at time t (in symbol periods).
double rrc_pulse(double t, double rolloff);

/// Baseband stream of `length` Nyquist-rate samples scaled to the source power.
std::vector<cdouble> gen_baseband(const SourceParams& source, double f_nyq, std::size_t length,
                                  std::uint64_t seed, const SynthOptions& options = {});

SnapshotMatrix simulate_snapshots(const Scenario& scenario, SynthMode mode, std::uint64_t seed,
                                  const SynthOptions& options = {});

/// Noise variance per complex sample giving the requested per-branch SNR.
double calibrate_sigma2(const Scenario& scenario, double target_snr_db);

void write_snapshots(const SnapshotMatrix& snapshots, const std::filesystem::path& path);
SnapshotMatrix read_snapshots(const std::filesystem::path& path);

}  // namespace jdf
