#pragma once

#include <array>
#include <functional>

#include "holab/mesh.hpp"

namespace holab {

// Scalar differential forms evaluated against left-trivialized tangents: the
// first argument is the base point, the rest are algebra elements.
using Form1 = std::function<double(const Mat&, const Mat&)>;
using Form2 = std::function<double(const Mat&, const Mat&, const Mat&)>;
using Form3 = std::function<double(const Mat&, const Mat&, const Mat&, const Mat&)>;

// Midpoint rule: sum of a(g_i exp(d_i / 2), d_i) over interval chords
// d_i = log(g_i^-1 g_{i+1}).  Second order, and exact on geodesics paired
// with left invariant forms.
double integrate_1form(const PathMesh& m, const Form1& a);

// Per plaquette, average the frame evaluation at the two diagonal corners;
// each corner pairs the sample with the +axis chord logs of its adjacent
// plaquette edges.  Second order.
double integrate_2form(const SquareMesh& m, const Form2& b, int workers = 1);

// The same corner rule over all eight corners of each cell.  A geodesic edge
// has constant left-trivialized velocity, so one chord log per edge serves
// both of its endpoints.
double integrate_3form(const CubeMesh& m, const Form3& c, int workers = 1);

// Algebra valued path sum of theta_flat over interval midpoints.  Exact at
// any resolution when u samples a one parameter subgroup.
Mat eta_theta(const PathMesh& u);

// The equivariant contraction -alpha(xi_X, rest...) at a point, with xi_X
// the conjugation field of x_block (Ad_{g^-1} X - X componentwise).  One
// overload per form degree.
double delta_equivariant(const Group& arena, const Form1& a, const Mat& x_block,
                         const Mat& g);
double delta_equivariant(const Group& arena, const Form2& a, const Mat& x_block,
                         const Mat& g, const Mat& v);
double delta_equivariant(const Group& arena, const Form3& a, const Mat& x_block,
                         const Mat& g, const Mat& v, const Mat& w);

// Fit v(n) = V + C n^-p through three increasing resolutions.  order_ok
// reports whether the differences allowed a stable fit; when they vanish to
// rounding, exact is set and the last value is returned with zero error.
struct Richardson {
  double value = 0.0;
  double error = 0.0;
  double order = 0.0;
  bool order_ok = false;
  bool exact = false;
};

Richardson richardson(const std::array<double, 3>& v,
                      const std::array<int, 3>& n);

struct Snap {
  long long value = 0;
  double defect = 0.0;
  bool ok = false;
};

// Nearest integer with its defect; ok when the defect is within tol.
Snap integer_snap(double x, double tol);

}  // namespace holab
