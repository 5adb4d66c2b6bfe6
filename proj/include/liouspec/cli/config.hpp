#ifndef LIOUSPEC_CLI_CONFIG_HPP_
#define LIOUSPEC_CLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouspec/lineshape.hpp"
#include "liouspec/liouvillian.hpp"
#include "liouspec/spectral.hpp"

namespace liouspec::cli {

// Malformed or out-of-range configuration (exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem trouble while writing results (exit code 3).
class IoError : public Error {
 public:
  using Error::Error;
};

// Frequency grid. Without an explicit range the grid is
// h ± half_span_gamma * gamma.
struct GridSpec {
  std::optional<double> min;
  std::optional<double> max;
  std::size_t n = 2001;
  double half_span_gamma = 50.0;

  std::vector<double> build(const ModelParams& params) const;
};

struct SourceSpec {
  SourceKind kind = SourceKind::Steady;
  std::optional<std::uint64_t> seed;  // random sources only

  // "steady", "infinite_temperature", "random_seed1", ...
  std::string label() const;
};

struct SweepSpec {
  std::vector<double> p{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
  std::vector<SpinLength> j{SpinLength::from_twice(10), SpinLength::from_twice(20),
                            SpinLength::from_twice(40)};
};

struct EigsSpec {
  std::vector<double> p{0.0, 0.5, 0.99};
  double threshold = 1e-6;
  // Compare eigenvalue distances in the λ/j plane instead of raw λ.
  bool rescale_by_j = false;
};

// Jordan-block demonstrations: λ0 = -gamma + i omega0, probe e0 and source
// e0 + κ e1 with κ chosen so the exact block has EP weight r0.
struct SyntheticSpec {
  double gamma = 0.05;
  double omega0 = 1.0;
  double r0 = 0.3;
  std::vector<double> epsilon{0.0, 0.0005, 0.001, 0.002, 0.005, 0.01, 0.015, 0.02};
  double grid_min = 0.0;
  double grid_max = 2.0;
  std::size_t grid_n = 2001;
};

struct RunConfig {
  ModelParams params = default_params();
  GridSpec grid;
  std::vector<SourceSpec> sources = default_sources();
  DiagnosticsOptions fit;
  SweepSpec sweep;
  EigsSpec eigs;
  SyntheticSpec synthetic;
  std::filesystem::path out = "out";
  unsigned threads = 0;  // 0: one per hardware thread

  static ModelParams default_params();
  static std::vector<SourceSpec> default_sources();

  // Throws ConfigError on any invalid field.
  void validate() const;
};

// Parses a config document. Unknown keys anywhere are rejected.
RunConfig config_from_json(const nlohmann::ordered_json& doc);
RunConfig load_config(const std::filesystem::path& path);
// Full document with every field, as shipped in configs/default.json.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

// Command-line overrides; unset fields leave the config untouched.
struct Overrides {
  std::optional<double> j;
  std::optional<double> p;
  std::optional<double> gamma;
  std::optional<double> gamma0;
  std::optional<double> h;
  std::optional<double> threshold;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> window_mult;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<std::size_t> grid_n;
  std::optional<unsigned> threads;
};

// --j and --p also replace the sweep and eigs lists with that single value;
// --seed replaces the random sources with one seeded source.
void apply_overrides(RunConfig& cfg, const Overrides& o);

}  // namespace liouspec::cli

#endif  // LIOUSPEC_CLI_CONFIG_HPP_
