#ifndef LIOUSPEC_CLI_COMMANDS_HPP_
#define LIOUSPEC_CLI_COMMANDS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liouspec/cli/config.hpp"
#include "liouspec/lineshape.hpp"
#include "liouspec/spectral.hpp"

namespace liouspec::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2, kIoError = 3 };

// Short machine-readable status for a failed source or sweep row.
std::string status_token(const std::exception& e);

struct SourceOutcome {
  SourceSpec source;
  std::optional<SpectrumTrace> trace;
  std::optional<EPDiagnostics> diagnostics;
  std::string status = "ok";
  std::string error;  // message when status != "ok"
};

struct PointResult {
  ModelParams params;
  std::vector<SourceOutcome> sources;
};

// Builds the Liouvillian once and runs every source through spectrum and
// diagnostics. Failures are recorded per source, never thrown.
PointResult analyze_point(const ModelParams& params, const GridSpec& grid,
                          const std::vector<SourceSpec>& sources,
                          const DiagnosticsOptions& fit);

// Density matrix for a source at the given point.
MatrixXc source_state(const SourceSpec& s, const Liouvillian& L, const SteadyState* ss);

// Runs fn(0..n-1) on a pool of worker threads (threads = 0: hardware
// concurrency). Callers store results by index so ordering stays fixed.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

int cmd_eigs(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_synthetic(const RunConfig& cfg);

// Column names of sweep.csv.
const std::vector<std::string>& sweep_header();

}  // namespace liouspec::cli

#endif  // LIOUSPEC_CLI_COMMANDS_HPP_
