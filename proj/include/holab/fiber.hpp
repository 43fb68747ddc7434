#pragma once

#include <complex>

#include "holab/fd.hpp"
#include "holab/mesh.hpp"
#include "holab/quad.hpp"
#include "holab/words.hpp"

namespace holab {

// A point of the pulled-back path bundle over the arena: the base point q
// together with a recorded path u in the block group that starts at the
// identity and ends at w(q).
struct FiberPoint {
  Mat q;
  PathMesh u;

  void validate(const MapData& f, double tol = defaults::mesh_tol) const;
};

// Tangent at a FiberPoint: an arena tangent at q plus a left trivialized
// field along u.  The field vanishes at the start and reaches the word
// differential of v_q at the end.
struct FiberTangent {
  Mat v_q;
  SampleVec V;

  void validate(const MapData& f, const FiberPoint& p,
                double tol = defaults::mesh_tol) const;
};

// Endpoint of the string's path together with its upper edge.
FiberPoint fiber_point(const StringCD1& s, const MapData& f);

// Midpoint pairing of the invariant 3-form with two fields along u:
// sum over intervals of cartan3(delta_i, Vmid_i, Wmid_i), where delta_i is
// the chord log and the mid values average the two interval ends.
double beta_lambda(const PathMesh& u, const SampleVec& V, const SampleVec& W);

// The 2-form carried by the fiber construction: beta_lambda on the path
// parts minus the word 2-form on the base parts.
double zeta_fiber(const MapData& f, const FiberPoint& p, const FiberTangent& a,
                  const FiberTangent& b, CocycleConvention conv = {});

struct Holonomy {
  // Exponent at the finest level: the 3-form integral over the cube minus
  // the word 2-form integral over the base square.
  double area = 0.0;
  // Extrapolation over the built-in coarsening ladder {N/4, N/2, N}.
  Richardson fit;
  // exp(2 pi i fit.value).
  Cplx circle{1.0, 0.0};
  bool closed = false;
  bool strict = false;
  // Populated only in the closed case, on fit.value.
  Snap snap;
};

// Holonomy exponent of a family of strings.  The family is validated at full
// resolution; the two coarser ladder levels reuse its samples, so every mesh
// dimension and every seam must be divisible by four.
Holonomy holonomy(const HomotopyCD11& fam, const MapData& f,
                  CocycleConvention conv = {}, int workers = 1,
                  double tol = defaults::mesh_tol, double snap_tol = 1e-2);

// Concatenation of two families along the family axis, a after b's role as
// initial segment; the junction slices must agree within tol and the seam is
// recorded.  Samples of `a` survive bitwise, as do those of `b` past its
// first slice.
HomotopyCD11 stack(const HomotopyCD11& a, const HomotopyCD11& b,
                   double tol = defaults::mesh_tol);

struct RelPeriod {
  // Value at the finest level.
  double raw = 0.0;
  Richardson fit;
  Snap snap;
};

// Integral of the invariant 3-form over the cube minus the reference 2-form
// over the square, extrapolated over the coarsening ladder {N/4, N/2, N} and
// snapped to the nearest integer.  The cube must close up over the square:
// its bottom face is constant at the identity, its top face is the
// pushforward of h through the word, its two t1-faces are constant along t2,
// and its two t2-faces agree sample by sample.
RelPeriod relative_period(const SquareMesh& h, const CubeMesh& H,
                          const MapData& f, CocycleConvention conv = {},
                          int workers = 1, double tol = defaults::mesh_tol,
                          double snap_tol = 1e-2);

// Same with a conjugacy class as target: h lives on the class itself, the
// pushforward is the inclusion, and the reference 2-form is the class
// 2-form.  eval_tol is the tangency slack handed to ClassForm::eval; chord
// secants of a mesh sit off the exact tangent space by a step-squared
// amount, so it is much looser than mesh_tol.
RelPeriod relative_period(const SquareMesh& h, const CubeMesh& H,
                          const ClassForm& cls, int workers = 1,
                          double tol = defaults::mesh_tol,
                          double snap_tol = 1e-2, double eval_tol = 0.05);

// Prepends a loop-string to s along t1 with a recorded seam.  The loop must
// return to the basepoint and its upper edge must be constant at the
// identity; the result is again a valid string and its samples past the seam
// are those of s bitwise, so the fiber point persists.
StringCD1 juxtapose(const StringCD1& s, const StringCD1& loop,
                    const MapData& f, double tol = defaults::mesh_tol);

}  // namespace holab
