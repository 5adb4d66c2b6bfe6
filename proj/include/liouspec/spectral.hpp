#ifndef LIOUSPEC_SPECTRAL_HPP_
#define LIOUSPEC_SPECTRAL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liouspec/liouvillian.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

struct SteadyState {
  MatrixXc rho;                     // Hermitian, unit trace, diagonal in Jz
  double residual = 0.0;            // ||L vec(rho)||_inf on the full Liouvillian
  double uniqueness_gap = 0.0;      // second-smallest |eigenvalue| of the M=0 block
  double hermitization_delta = 0.0; // ||rho - rho†||_inf / 2 before symmetrizing
};

// Zero mode of the M=0 block, Hermitized and trace-normalized.
// Throws NonUniqueSteadyState if two M=0 eigenvalues lie within 1e-9 of 0.
SteadyState steady_state(const Liouvillian& L);

struct LiouvSpectrum {
  std::vector<Complex> eigenvalues;
  std::vector<int> sector;             // M of each eigenvalue
  std::vector<bool> near_degenerate;   // another eigenvalue within threshold
  double pairing_threshold = 1e-6;
  // Flags compare |λa - λb| / scale against the threshold; 1 means raw
  // eigenvalues, j means the rescaled complex plane λ/j.
  double scale = 1.0;

  std::size_t flagged_count() const;
};

// Flag every entry with a distinct neighbour closer than threshold.
std::vector<bool> near_degenerate_flags(std::span<const Complex> values, double threshold);

// All (2j+1)² eigenvalues, computed block by block.
LiouvSpectrum full_spectrum(const Liouvillian& L, double threshold = 1e-6, double scale = 1.0);
LiouvSpectrum full_spectrum(const SectorDecomposition& sectors, double threshold = 1e-6,
                            double scale = 1.0);

enum class SourceKind { Steady, InfiniteTemperature, Random, Custom, Synthetic };

std::string_view to_string(SourceKind kind);

struct SpectrumTrace {
  std::vector<double> omegas;
  std::vector<double> values;
  SourceKind source = SourceKind::Custom;
  std::optional<std::uint64_t> seed;
  std::string rng;                  // generator behind random sources
  ModelParams params;
  int sector_used = 1;
  double dropped_fraction = 0.0;    // norm share of rho0 J+ outside M=1
  double max_imag_residue = 0.0;    // largest |Im Tr[...]| seen over the grid
  std::size_t perturbed_points = 0;  // grid points that needed the 1e-12 nudge

  std::size_t size() const { return omegas.size(); }
};

// n points from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);
// h ± half_span_in_gamma * gamma with n points.
std::vector<double> default_grid(const ModelParams& params, std::size_t n = 2001,
                                 double half_span_in_gamma = 50.0);

// Tr[J- (iω - L_M)^{-1} x] over a grid for a source already projected onto
// sector M (M=1 for emission). Each ω is an independent LU solve.
class SectorResolvent {
 public:
  SectorResolvent(const Liouvillian& L, int M);

  int sector() const { return M_; }
  const std::vector<Index>& indices() const { return indices_; }
  const MatrixXc& block() const { return block_; }

  // Restriction of vec(X) to this sector.
  VectorXc project(const MatrixXc& X) const;
  // Tr[probe · devec(y)] written as a bilinear form on sector vectors.
  VectorXc probe_for(const MatrixXc& probe_op) const;

  // probe · (iω - L_M)^{-1} source. Nudges ω by 1e-12 once if the shifted
  // block is numerically singular; throws SingularResolvent after that.
  Complex evaluate(double omega, const VectorXc& probe, const VectorXc& source,
                   bool* perturbed = nullptr) const;

 private:
  int M_;
  std::vector<Index> indices_;
  MatrixXc block_;
};

// Same quantity using the whole Liouville space; for cross-checks on small j.
// Singular at ω = 0, where the steady-state mode sits. No nudge is applied.
Complex resolvent_trace_full(const Liouvillian& L, const MatrixXc& probe_op,
                             const MatrixXc& source_op, double omega);

// ||X outside sector M||_F / ||X||_F (0 for X = 0).
double sector_leak_fraction(const MatrixXc& X, int M);

// Checks Hermiticity, unit trace and positivity (eigenvalues >= -tol).
void validate_density_matrix(const MatrixXc& rho, double tol = 1e-9);

SpectrumTrace emission_spectrum_steady(const Liouvillian& L, const SteadyState& ss,
                                       std::span<const double> grid);

SpectrumTrace emission_spectrum_source(const Liouvillian& L, const MatrixXc& rho0,
                                       std::span<const double> grid,
                                       SourceKind kind = SourceKind::Custom);

// G G† / Tr(G G†) with G filled by independent standard complex Gaussians.
MatrixXc random_full_rank_state(Index d, std::uint64_t seed);
inline constexpr std::string_view kRandomStateGenerator = "mt19937_64+normal_distribution";

}  // namespace liouspec

#endif  // LIOUSPEC_SPECTRAL_HPP_
