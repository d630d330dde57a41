#pragma once

#include <span>

#include "coincsim/electronics.hpp"
#include "coincsim/sources.hpp"

namespace coincsim {

struct AlphaEstimate {
  double alpha{0.0};
  double sigma{0.0};
  CountSummary counts;  ///< counts the estimate was formed from (summed for averages)
};

/// alpha = Nc N / (N1 N2).
///
/// Uncertainty treats N1, N2, Nc as independent Poisson counts and N as
/// fixed:
///   sigma^2 = (N / (N1 N2))^2 max(Nc, 1) + alpha^2 (1/N1 + 1/N2)
/// The max(Nc, 1) floor gives zero-coincidence runs a finite error bar.
/// Throws UndefinedEstimate when N, N1 or N2 is zero.
AlphaEstimate alpha_estimate(const CountSummary& c);

/// Inverse-variance weighted mean. Throws std::invalid_argument on empty
/// input or a non-positive sigma.
AlphaEstimate weighted_mean(std::span<const AlphaEstimate> estimates);

/// |alpha - reference| / sigma. Throws std::invalid_argument if sigma <= 0.
double sigma_separation(const AlphaEstimate& e, double reference);

/// Per-gate parameters of the heralded-source oracle.
struct OracleParams {
  double t1{0.0};     ///< P(D1 detects the herald's own idler | idler on path 1)
  double t2{0.0};     ///< same for D2 / path 2
  double a1{0.0};     ///< mean uncorrelated D1 clicks per window
  double a2{0.0};
  double split{0.5};  ///< P(idler on path 1)
};

/// Expected alpha of a heralded single-photon source with exclusive paths and
/// Poisson accidentals, for binary per-gate counting. With A_i = 1 - exp(-a_i)
/// and q = split:
///   P1 = q [t1 + (1 - t1) A1] + (1 - q) A1
///   P2 = q A2 + (1 - q) [t2 + (1 - t2) A2]
///   Pc = q [t1 + (1 - t1) A1] A2 + (1 - q) A1 [t2 + (1 - t2) A2]
/// Returns Pc / (P1 P2), or NaN when P1 P2 == 0.
double expected_alpha_pdc(const OracleParams& p);

/// Any source whose two arms fire independently per gate.
constexpr double expected_alpha_independent() noexcept { return 1.0; }

/// Gate-phase average of sum_k l_k^2 / W^2, where l_k are the overlaps of a
/// window of width W with consecutive blocks of length tau and the window
/// start is uniform relative to the block grid. Evaluated by Gauss-Legendre
/// quadrature on the two pieces where the integrand is quadratic.
double block_overlap_factor(double window_ps, double tau_ps);

/// Linear-regime alpha of the shared single-mode thermal model:
/// 1 + block_overlap_factor(W, tau_c). Throws std::invalid_argument unless
/// both arguments are positive.
double expected_alpha_thermal_shared(double window_ps, double coherence_time_ps);

/// <I^2> / <I>^2 of the configured intensity distribution (1 constant,
/// 2 exponential, 1 + w for a mixture with exponential weight w).
double expected_alpha_classical_wave(const ClassicalWaveConfig& cfg);

/// Dilution of a correlated signal by independent background in the linear
/// regime: mean signal counts s_i and background counts b_i per window.
double expected_alpha_with_background(double signal_alpha, double s1, double s2, double b1, double b2);

}  // namespace coincsim
