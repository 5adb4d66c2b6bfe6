#ifndef LIOUSPEC_JORDAN_ORACLE_HPP_
#define LIOUSPEC_JORDAN_ORACLE_HPP_

#include <span>
#include <vector>

#include "liouspec/lineshape.hpp"
#include "liouspec/spectral.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

// Two-dimensional defective generator L = λ0 I + N in its chain basis
// (r0, r1), with L r1 = λ0 r1 + r0, L r0 = λ0 r0 and ⟨ℓi|rj⟩ = δij.
// Only the overlaps of the probe A and source B with the chain enter.
struct JordanBlockSystem {
  Complex lambda0{-1.0, 0.0};  // -γ + iω0, γ > 0
  Complex A_r0{1.0, 0.0};      // ⟨A|r0⟩
  Complex A_r1{0.0, 0.0};      // ⟨A|r1⟩
  Complex l0_B{1.0, 0.0};      // ⟨ℓ0|B⟩
  Complex l1_B{0.0, 0.0};      // ⟨ℓ1|B⟩

  double gamma() const { return -lambda0.real(); }
  double omega0() const { return lambda0.imag(); }
};

// N = |r0⟩⟨ℓ1|, i.e. [[0, 1], [0, 0]] in the chain basis.
MatrixXc nilpotent_part();

// L = λ0 I + N.
MatrixXc jordan_generator(Complex lambda0);

// I/(z-λ0) + N/(z-λ0)². Throws InvalidArgument at z = λ0.
MatrixXc jordan_resolvent(Complex lambda0, Complex z);

struct PoleWeights {
  Complex alpha;  // ⟨A|r0⟩⟨ℓ0|B⟩ + ⟨A|r1⟩⟨ℓ1|B⟩
  Complex beta;   // ⟨A|r0⟩⟨ℓ1|B⟩
};

PoleWeights alpha_beta(const JordanBlockSystem& sys);

// ⟨A|(z-L)^{-1}|B⟩ by multiplying out the overlaps with jordan_resolvent.
Complex jordan_response(const JordanBlockSystem& sys, Complex z);

// Real-frequency amplitudes of (1/π) Re[α/(iω-λ0) + β/(iω-λ0)²]:
//   (1/π)[a L + b SL + a_disp Δ/(Δ²+γ²) + b_disp Δ/(Δ²+γ²)²]
// with L, SL the Lorentzian and super-Lorentzian of lineshape.hpp.
// a = γ Re α, b = Re β, a_disp = Im α, b_disp = 2γ Im β.
struct InducedAmplitudes {
  double a = 0.0;
  double b = 0.0;
  double a_disp = 0.0;
  double b_disp = 0.0;
};

InducedAmplitudes induced_amplitudes(const JordanBlockSystem& sys);

// r of the absorptive part, |b| / (|a| + |b|) = |Re β| / (γ|Re α| + |Re β|).
double analytic_ep_weight(const JordanBlockSystem& sys);

// (1/π) Re[α/(iω-λ0) + β/(iω-λ0)²] from the induced amplitudes.
double jordan_lineshape(const JordanBlockSystem& sys, double omega);

// Model B parameters (c = 0) matching the absorptive part of the line.
LineShapeParams model_b_params(const JordanBlockSystem& sys);

// [[λ0, 1], [ε², λ0]]: eigenvalues λ0 ± ε, exactly the Jordan block at ε = 0.
struct UnfoldedGenerator {
  Complex lambda0;
  double epsilon = 0.0;
  MatrixXc matrix;
};

UnfoldedGenerator embed_jordan_in_liouvillian(Complex lambda0, double epsilon);

// aᵀ (z - G)^{-1} b for a small dense generator (no conjugation of a).
Complex bilinear_resolvent(const MatrixXc& G, const VectorXc& a, const VectorXc& b, Complex z);

// (1/π) Re aᵀ (iω - G)^{-1} b over a grid, packaged as a synthetic trace.
SpectrumTrace generator_lineshape(const MatrixXc& G, const VectorXc& a, const VectorXc& b,
                                  std::span<const double> grid);

SpectrumTrace jordan_trace(const JordanBlockSystem& sys, std::span<const double> grid);

}  // namespace liouspec

#endif  // LIOUSPEC_JORDAN_ORACLE_HPP_
