#pragma once

#include <numbers>

namespace holab::defaults {

// Tolerance used when validating mesh-level boundary and gluing conditions.
inline constexpr double mesh_tol = 1e-8;

// Largest allowed rotation angle of one mesh step g_i^{-1} g_{i+1}
// (largest eigenvalue argument, i.e. the operator norm of its logarithm).
inline constexpr double step_bound = std::numbers::pi / 8.0;

// A unitary matrix is rejected by the principal logarithm when one of its
// eigenvalue arguments comes within this margin of +-pi.
inline constexpr double log_margin = 1e-6;

// Central finite-difference step for exterior derivatives of compiled forms.
inline constexpr double fd_step = 1e-3;

// Central finite-difference step for directional derivatives of the momentum.
inline constexpr double momentum_fd_step = 1e-4;

// Inner product scale for SU(2) chosen so that the bi-invariant 3-form has
// integral periods: 1/(4*pi^2).
inline constexpr double su2_metric_scale =
    1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

// Relative accuracy target of the exponential for n <= 4.
inline constexpr double exp_tol = 1e-12;

}  // namespace holab::defaults
