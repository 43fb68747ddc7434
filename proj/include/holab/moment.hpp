#pragma once

#include "holab/fiber.hpp"

namespace holab {

// Momentum value at a fiber point: -eta_theta(u), returned as the block
// algebra element that represents the coalgebra value through the metric.
// Depends only on the recorded path, never on q.
Mat momentum(const FiberPoint& p, const MapData& f);

// Fundamental tangent of the simultaneous conjugation action of x_block at
// p: the conjugation field at q, and pointwise Ad_{u(t)^-1} X - X along the
// recorded path.  Satisfies the FiberTangent boundary conditions exactly.
FiberTangent fundamental_tangent(const MapData& f, const FiberPoint& p,
                                 const Mat& x_block);

// | d<mu, X>(T) - zeta_fiber(p, T, X_P) | with the derivative taken by
// central differences of step h along the exp-curve
//   t -> (q exp(t v_q), u_i exp(t V_i)).
// The contraction slot of the fundamental tangent is the second one; with
// the conventions of beta_lambda and the word 2-form this is the pairing
// that the boundary term of the first variation reproduces, see the module
// tests for the refinement study.
double momentum_defect(const FiberPoint& p, const Mat& x_block,
                       const FiberTangent& t, const MapData& f,
                       double h = defaults::momentum_fd_step,
                       CocycleConvention conv = {});

struct FlatnessReport {
  // Metric norm of the principal logarithm of the relator value.
  double relator_defect = 0.0;
  // Metric norm of the momentum at the canonical completion.
  double momentum_norm = 0.0;
  bool pass = false;
};

// Evaluates the relator on the tuple, completes it to a fiber point with the
// geodesic from the identity to the relator value (the constant path when
// the tuple satisfies the relator), and reports both defects against tol.
FlatnessReport flatness_probe(const Mat& tuple, const MapData& f,
                              double tol = 1e-12, int samples = 16);

}  // namespace holab
