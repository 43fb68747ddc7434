#pragma once

#include <cstdint>
#include <utility>

#include "holab/fiber.hpp"
#include "holab/mesh.hpp"
#include "holab/rng.hpp"
#include "holab/words.hpp"

namespace holab::fixtures {

// Word data of the genus-g wedge: arena k^(2g), surface relator, identity
// basepoint.
MapData genus_map(const Group& k, int genus = 1);

// String over a genus-1 SU(2) arena: geodesic path from the basepoint to
// (exp(0.6 e1), exp(0.45 e2)), swept onto a fiber path that detours through
// exp(amp sin^2(pi t) e1).  amp = 0 keeps the plain pushforward square.
StringCD1 genus1_string(const MapData& f, int n1, int n2, double amp = 0.0);

// Pointwise geodesic interpolation in the family direction between two
// strings sharing the same path; the end slices are copied bitwise.
HomotopyCD11 interp_family(const StringCD1& s0, const StringCD1& s1, int ns);

// The same family with its cube multiplied by a radial bump supported in the
// interior of the parameter cube.  The bump wraps the block group exactly
// once, so the exponent of the family moves by one unit while all six
// boundary faces stay fixed.  The block group must be SU(2).
HomotopyCD11 bump_family(const HomotopyCD11& base);

// Family axis run backwards.
HomotopyCD11 reversed_family(const HomotopyCD11& fam);

// Every base sample conjugated slotwise by g_block, every square and cube
// sample conjugated in the block group.
HomotopyCD11 conjugated_family(const HomotopyCD11& fam, const Group& arena,
                               const Mat& g_block);

// Unit-degree chart of the conjugacy class through exp(rho e3) in SU(2):
// chart(x, y) = q exp(rho e3) q^-1 with q(x, y) = exp(2 pi y e3) exp(pi x e2).
SquareMesh class_chart(const Group& k, double rho, int n);

// Suspension of the chart, sliding the class parameter from 0 to rho:
// H(x, y, s) = q(x, y) exp(s rho e3) q(x, y)^-1.  Its bottom face is the
// identity, its top face is the chart, its x-faces are constant in y and its
// y-faces agree, so it closes up over the chart.
CubeMesh class_suspension(const Group& k, double rho, int n);

// Euler-style sweep exp(2 pi z n(x, y) . e) of SU(2) with the axis field
// n(x, y) = (sin(pi x) cos(2 pi y), sin(pi x) sin(2 pi y), cos(pi x)).  The
// cells cover the group once, so the invariant volume integral over the cube
// equals the total group volume.
CubeMesh euler_cube(const Group& k, int n);

// A fiber point over the genus-1 basepoint with two tangents, able to lay a
// small rectangular loop of strings around itself.  The family axis of the
// loop walks the boundary of the centered square [-eps/2, eps/2]^2 in the
// tangent coordinates spanned by (t1, t2); every fiber path carries an exact
// endpoint correction, so each slice is a valid string and the family closes
// up.
struct CurvatureProbe {
  MapData f;
  FiberPoint p;
  FiberTangent t1;
  FiberTangent t2;
  int n1 = 12;
  int n2 = 12;
  int legs = 8;

  HomotopyCD11 loop(double eps) const;
  double reference(CocycleConvention conv = {}) const;
};
CurvatureProbe curvature_probe(const Group& k, std::uint64_t seed);

// Random tuple whose slots commute: exp(c_i X) slotwise for one algebra
// element X and random coefficients.
Mat commuting_tuple(const Group& arena, Philox& rng);

// Fiber point over q completed by the geodesic from the identity to w(q).
FiberPoint geodesic_point(const MapData& f, const Mat& q, int n);

// Tangent sampled from the continuum profile
//   V(t) = sin^2(pi t) wiggle + smoothstep(t) omega_w(v_q),
// so ladders over resolutions probe one fixed direction.
FiberTangent profiled_tangent(const MapData& f, const FiberPoint& p,
                              const Mat& v_q, const Mat& wiggle);

// The shipped well-definedness pair: the plain interpolation between the
// genus-1 strings with amplitudes 0 and 0.8, and its bump-wrapped twin.
// Both connect the same two strings; their exponents differ by one unit.
std::pair<HomotopyCD11, HomotopyCD11> welldef_pair(const MapData& f,
                                                   int n = 32);

}  // namespace holab::fixtures
