#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acquire/certificates.hpp"

namespace acquire {

inline constexpr std::string_view kCsvSchema = "trial-v1";

enum class Regime { Sparse, Mid, Dense };

std::string to_string(Regime r);

/// Sparse when r < 1, Dense when r lg r > sqrt n, Mid otherwise (the
/// boundary r lg r == sqrt n is Mid).
Regime regime_of(double n, double r);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  int version = 1;
  std::vector<double> n;
  std::vector<double> r;
  std::size_t seeds = 1;
  std::uint64_t seed_base = 1;
  /// Any of: dangerous, ball, tessellation, fallback, greedy.
  std::vector<std::string> methods{"dangerous", "ball", "tessellation", "fallback", "greedy"};
  double c = 0.5;
  double eps = 0.9;
  /// Auxiliary-line spacing as a multiple of r; 0 keeps the default 10 y r.
  double aux_spacing_r = 0;
  bool strict_level_check = true;
  Weight ball_budget = 1 << 20;
  BallMode ball_mode = BallMode::CellBound;
  unsigned workers = 1;
  bool poisson = false;
  /// Replay every emitted protocol with provenance and fail the trial on any
  /// weight-cap violation. Slower and memory hungry; meant for tests.
  bool check_caps = false;
  /// When set, every emitted protocol is saved here as
  /// n<n>_r<r>_s<seed>_<method>.atp.
  std::string protocol_dir;

  bool runs(std::string_view method) const;
};

/// Parses the YAML sweep description. Throws ConfigError naming the key.
SweepConfig parse_config(std::string_view yaml);
SweepConfig load_config(const std::filesystem::path& path);

struct TrialRecord {
  double n = 0;
  double r = 0;
  std::uint64_t seed = 0;
  Regime regime = Regime::Mid;
  std::size_t vertices = 0;
  std::optional<std::size_t> lower_dangerous;
  bool dangerous_conditional = false;
  std::optional<std::size_t> lower_ball;
  std::optional<std::size_t> upper_tessellation;
  std::optional<std::size_t> upper_fallback_only;
  std::optional<std::size_t> upper_greedy;
  std::optional<double> good_square_fraction;
  std::size_t error1 = 0;
  std::size_t error2 = 0;
  std::size_t error3 = 0;
  std::size_t demoted = 0;
  bool sandwich_ok = true;
  std::string error;

  // Wall-clock seconds per phase; written to the timing sidecar only.
  double build_seconds = 0;
  double certify_seconds = 0;
  double protocol_seconds = 0;
  double replay_seconds = 0;

  std::optional<std::size_t> best_lower() const;
  std::optional<std::size_t> best_upper() const;
};

/// Runs one (n, r, seed) trial. Every emitted protocol is replayed on the
/// engine and its residual compared with the reported count; mismatches and
/// exceptions land in `error`.
TrialRecord run_trial(const SweepConfig& config, double n, double r, std::uint64_t seed);

std::string csv_header();
std::string csv_row(const TrialRecord& t);
std::string timing_header();
std::string timing_row(const TrialRecord& t);

/// Runs every trial in config order on `config.workers` threads. Rows are
/// written to `csv` (and `timing`, if given) in config order as soon as all
/// earlier rows are done.
std::vector<TrialRecord> run_sweep(const SweepConfig& config, std::ostream& csv,
                                   std::ostream* timing = nullptr);

/// Reads rows produced by csv_row(); timing fields are left at zero.
std::vector<TrialRecord> parse_csv(std::string_view text);

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitResult {
  double n = 0;
  /// Least-squares slope of log(best upper) against log(r lg r).
  double slope = 0;
  double intercept = 0;
  /// min / max of residual (r lg r)^2 / n over trials.
  double band_low = 0;
  double band_high = 0;
  /// Slope of log(residual (r lg r)^2 / n) against log(r lg r); 0 when the
  /// residual follows n / (r lg r)^2 exactly.
  double drift = 0;
  /// |drift| > kMaxDrift or band_high / band_low > kMaxBandRatio.
  bool non_constant = false;
  std::size_t points = 0;
  std::size_t distinct_r = 0;
};

inline constexpr double kMaxDrift = 0.25;
inline constexpr double kMaxBandRatio = 10.0;
inline constexpr std::size_t kMinDistinctR = 4;
inline constexpr std::size_t kMinSeedsPerR = 10;

/// Fits the records of `regime` that carry an upper bound. All of them must
/// share one n (or pass `n`). Needs kMinDistinctR radii with kMinSeedsPerR
/// trials each; throws InsufficientData otherwise.
FitResult fit_scaling(const std::vector<TrialRecord>& records, Regime regime = Regime::Mid,
                      std::optional<double> n = std::nullopt);

}  // namespace acquire
