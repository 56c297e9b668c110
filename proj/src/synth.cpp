#include "jdf/synth.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "jdf/error.hpp"

namespace jdf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  return rng();
}

// Energy of the truncated pulse in symbol-period units.
double pulse_energy(int half_span, double rolloff) {
  constexpr int kPerSymbol = 256;
  double e = 0.0;
  for (int i = -half_span * kPerSymbol; i <= half_span * kPerSymbol; ++i) {
    const double h = rrc_pulse(static_cast<double>(i) / kPerSymbol, rolloff);
    e += h * h;
  }
  return e / kPerSymbol;
}

// Fractional part of f*T*index, kept small before the 2 pi scaling.
double cycles_at(double f_times_T, std::int64_t index) {
  const double c = f_times_T * static_cast<double>(index);
  return c - std::floor(c);
}

}  // namespace

std::string_view to_string(SynthMode mode) {
  return mode == SynthMode::ExactDelay ? "exact-delay" : "phase-model";
}

SynthMode synth_mode_from_string(std::string_view name) {
  if (name == "phase-model" || name == "phase") return SynthMode::PhaseModel;
  if (name == "exact-delay" || name == "exact") return SynthMode::ExactDelay;
  throw Error(ErrorCode::InvalidScenario, "unknown synthesis mode '" + std::string(name) + "'");
}

double rrc_pulse(double t, double rolloff) {
  const double b = rolloff;
  constexpr double pi = std::numbers::pi;
  if (std::abs(t) < 1e-12) return 1.0 - b + 4.0 * b / pi;
  const double x = 4.0 * b * t;
  if (std::abs(std::abs(x) - 1.0) < 1e-9) {
    const double a = pi / (4.0 * b);
    return b / std::sqrt(2.0) * ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
  }
  const double num = std::sin(pi * t * (1.0 - b)) + x * std::cos(pi * t * (1.0 + b));
  return num / (pi * t * (1.0 - x * x));
}

BasebandGenerator::BasebandGenerator(const SourceParams& source, double f_nyq,
                                     std::int64_t first_index, std::int64_t last_index,
                                     std::uint64_t seed, const SynthOptions& options)
    : kind_(source.kind), amplitude_(std::sqrt(source.power)) {
  auto rng = make_rng(seed, 0x5eed);
  if (kind_ == BasebandKind::ComplexSinusoid) {
    if (options.sinusoid_dither_hz > 0.0) {
      std::uniform_real_distribution<double> dither(-options.sinusoid_dither_hz,
                                                    options.sinusoid_dither_hz);
      dither_cycles_ = dither(rng) / f_nyq;
    }
    return;
  }

  if (!(source.bandwidth_hz > 0.0)) {
    throw Error(ErrorCode::InvalidScenario, "pulse-shaped baseband needs a positive bandwidth");
  }
  const double symbol_rate = source.bandwidth_hz / (1.0 + kRrcRolloff);
  samples_per_symbol_ = f_nyq / symbol_rate;
  half_span_ = (kind_ == BasebandKind::Qpsk ? kRrcSpanSymbols : kNoiseSpanSymbols) / 2;
  amplitude_ /= std::sqrt(pulse_energy(half_span_, kRrcRolloff));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  timing_offset_ = unit(rng);

  first_symbol_ = static_cast<std::int64_t>(
                      std::floor(static_cast<double>(first_index) / samples_per_symbol_ - timing_offset_)) -
                  half_span_ - 1;
  const auto last_symbol = static_cast<std::int64_t>(std::ceil(
                               static_cast<double>(last_index) / samples_per_symbol_ - timing_offset_)) +
                           half_span_ + 1;
  symbols_.resize(static_cast<std::size_t>(last_symbol - first_symbol_ + 1));

  if (kind_ == BasebandKind::Qpsk) {
    const double r = 1.0 / std::sqrt(2.0);
    std::uniform_int_distribution<int> quadrant(0, 3);
    for (auto& s : symbols_) {
      const int q = quadrant(rng);
      s = {(q & 1) ? -r : r, (q & 2) ? -r : r};
    }
  } else {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (auto& s : symbols_) {
      const double re = gauss(rng);
      s = {re, gauss(rng)};
    }
  }
}

cdouble BasebandGenerator::operator()(std::int64_t index) const {
  if (kind_ == BasebandKind::ComplexSinusoid) {
    if (dither_cycles_ == 0.0) return amplitude_ * phasor_;
    return amplitude_ * std::polar(1.0, kTwoPi * cycles_at(dither_cycles_, index));
  }
  const double t = static_cast<double>(index) / samples_per_symbol_ - timing_offset_;
  const auto lo = static_cast<std::int64_t>(std::ceil(t - half_span_));
  const auto hi = static_cast<std::int64_t>(std::floor(t + half_span_));
  cdouble acc{0.0, 0.0};
  for (std::int64_t i = lo; i <= hi; ++i) {
    const auto slot = i - first_symbol_;
    if (slot < 0 || slot >= static_cast<std::int64_t>(symbols_.size())) {
      throw Error(ErrorCode::DimensionMismatch, "baseband index outside generated window");
    }
    acc += symbols_[static_cast<std::size_t>(slot)] * rrc_pulse(t - static_cast<double>(i), kRrcRolloff);
  }
  return amplitude_ * acc;
}

std::vector<cdouble> gen_baseband(const SourceParams& source, double f_nyq, std::size_t length,
                                  std::uint64_t seed, const SynthOptions& options) {
  std::vector<cdouble> out(length);
  if (length == 0) return out;
  const BasebandGenerator gen(source, f_nyq, 0, static_cast<std::int64_t>(length) - 1, seed, options);
  for (std::size_t i = 0; i < length; ++i) out[i] = gen(static_cast<std::int64_t>(i));
  return out;
}

SnapshotMatrix simulate_snapshots(const Scenario& s, SynthMode mode, std::uint64_t seed,
                                  const SynthOptions& options) {
  validate_scenario(s);
  const auto& constants = s.constants;
  if (mode == SynthMode::ExactDelay && std::abs(constants.tau * constants.f_nyq - 1.0) > 1e-9) {
    throw Error(ErrorCode::ModeUnavailable, "exact-delay synthesis requires tau = T");
  }

  const int M = s.M();
  const int N = s.n_snapshots;
  const std::int64_t L = s.L;
  const auto& coeffs = s.pattern.coeffs;

  SnapshotMatrix out;
  out.M = M;
  out.L = s.L;
  out.seed = seed;
  out.data = Eigen::MatrixXcd::Zero(2 * M, N);

  const double f_sub = s.f_sub();
  for (std::size_t k = 0; k < s.sources.size(); ++k) {
    if (s.sources[k].bandwidth_hz > f_sub) {
      out.warnings.push_back("BandwidthExceedsSub: source " + std::to_string(k) + " bandwidth " +
                             std::to_string(s.sources[k].bandwidth_hz) + " Hz exceeds f_sub " +
                             std::to_string(f_sub) + " Hz");
    }
  }

  const auto phases = unit_phases(s);
  std::vector<cdouble> delay(static_cast<std::size_t>(M));
  for (std::size_t k = 0; k < s.sources.size(); ++k) {
    const auto& src = s.sources[k];
    auto rng = make_rng(seed, 2 * k + 1);
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    const double carrier_phase = phase_dist(rng);

    const BasebandGenerator gen(src, constants.f_nyq, -s.pattern.max_lag(), (N - 1) * L,
                                derive_seed(seed, 2 * k + 2), options);
    for (int m = 0; m < M; ++m) delay[static_cast<std::size_t>(m)] = std::polar(1.0, -phases[k].omega * coeffs[static_cast<std::size_t>(m)]);
    const cdouble spatial = std::polar(1.0, -phases[k].phi);
    const double fT = src.f_hz * constants.T();

    for (int n = 0; n < N; ++n) {
      const std::int64_t base_index = n * L;
      const cdouble carrier = std::polar(1.0, kTwoPi * cycles_at(fT, base_index) + carrier_phase);
      for (int m = 0; m < M; ++m) {
        const std::int64_t index =
            mode == SynthMode::PhaseModel ? base_index : base_index - coeffs[static_cast<std::size_t>(m)];
        cdouble v = gen(index) * carrier;
        v *= delay[static_cast<std::size_t>(m)];
        out.data(m, n) += v;
        out.data(M + m, n) += v * spatial;
      }
    }
  }

  if (s.sigma2 > 0.0) {
    auto rng = make_rng(seed, 0);
    std::normal_distribution<double> gauss(0.0, std::sqrt(s.sigma2 / 2.0));
    for (int n = 0; n < N; ++n) {
      for (int r = 0; r < 2 * M; ++r) {
        const double re = gauss(rng);
        out.data(r, n) += cdouble(re, gauss(rng));
      }
    }
  }
  return out;
}

double calibrate_sigma2(const Scenario& s, double target_snr_db) {
  double signal = 0.0;
  for (const auto& src : s.sources) signal += src.power;
  return signal / std::pow(10.0, target_snr_db / 10.0);
}

// Dump layout: 8-byte magic, then M, N, L as little-endian u64, then the
// 2M x N matrix row-major as interleaved little-endian f64 (re, im).
namespace {

constexpr std::array<char, 8> kMagic{'J', 'D', 'F', 'S', 'N', 'A', 'P', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

void write_snapshots(const SnapshotMatrix& snapshots, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, static_cast<std::uint64_t>(snapshots.M));
  put_u64(os, static_cast<std::uint64_t>(snapshots.N()));
  put_u64(os, static_cast<std::uint64_t>(snapshots.L));
  for (Eigen::Index r = 0; r < snapshots.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < snapshots.data.cols(); ++c) {
      put_u64(os, std::bit_cast<std::uint64_t>(snapshots.data(r, c).real()));
      put_u64(os, std::bit_cast<std::uint64_t>(snapshots.data(r, c).imag()));
    }
  }
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

SnapshotMatrix read_snapshots(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error(ErrorCode::Io, path.string() + " is not a snapshot dump");
  SnapshotMatrix out;
  out.M = static_cast<int>(get_u64(is));
  const auto N = static_cast<Eigen::Index>(get_u64(is));
  out.L = static_cast<int>(get_u64(is));
  out.data.resize(2 * out.M, N);
  for (Eigen::Index r = 0; r < out.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < N; ++c) {
      const double re = std::bit_cast<double>(get_u64(is));
      out.data(r, c) = {re, std::bit_cast<double>(get_u64(is))};
    }
  }
  if (!is) throw Error(ErrorCode::Io, path.string() + " is truncated");
  return out;
}

}  // namespace jdf
