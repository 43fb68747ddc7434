#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "holab/constants.hpp"
#include "holab/error.hpp"
#include "holab/rng.hpp"

namespace holab {

using Mat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

enum class Family { SU, SO, U };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

// A compact matrix group K (SU(n), SO(n) or U(1)) together with the scale of
// its bi-invariant metric, plus an optional power m.  With power m > 1 the
// object models the product K^m embedded block diagonally in U(n*m); meshes
// over word domains live there.  Tangent vectors are always left trivialized:
// the curve through g with trivialized velocity v is t -> g*exp(t*v).
//
// The metric is inner(X,Y) = -metric_scale * Re tr(XY), which on the product
// restricts to the same scale block by block.
struct Group {
  Family family = Family::SU;
  int n = 2;
  double metric_scale = defaults::su2_metric_scale;
  int power = 1;

  static Group su(int n, double metric_scale = defaults::su2_metric_scale) {
    return Group{Family::SU, n, metric_scale, 1};
  }
  static Group so(int n, double metric_scale = defaults::su2_metric_scale) {
    return Group{Family::SO, n, metric_scale, 1};
  }
  static Group u1(double metric_scale = defaults::su2_metric_scale) {
    return Group{Family::U, 1, metric_scale, 1};
  }

  bool operator==(const Group&) const = default;

  // Product of `m` copies of this group's block, as one matrix group.
  Group arena(int m) const;
  // The single-block group underlying an arena.
  Group block() const;

  int matrix_size() const { return n * power; }
  int block_algebra_dim() const;
  int algebra_dim() const { return power * block_algebra_dim(); }

  Mat identity() const { return Mat::Identity(matrix_size(), matrix_size()); }

  // Throws Error(validation) unless g is a member of the group (unitary,
  // family constraints, block diagonal structure) up to `tol`.
  void validate(const Mat& g, double tol = defaults::mesh_tol) const;
  bool is_member(const Mat& g, double tol = defaults::mesh_tol) const;

  Mat inverse(const Mat& g) const { return g.adjoint(); }

  static Mat bracket(const Mat& x, const Mat& y) { return x * y - y * x; }
  static Mat Ad(const Mat& g, const Mat& x) { return g * x * g.adjoint(); }

  double inner(const Mat& x, const Mat& y) const {
    return -metric_scale * (x * y).trace().real();
  }
  double norm(const Mat& x) const;

  // The invariant 3-form evaluated on algebra vectors,
  // cartan3(X,Y,Z) = (1/2) * inner([X,Y], Z).
  double cartan3(const Mat& x, const Mat& y, const Mat& z) const {
    return 0.5 * inner(bracket(x, y), z);
  }

  // Algebra-valued 1-form (omega + omegabar)/2 on the left trivialized
  // tangent v at g.
  Mat theta_flat(const Mat& g, const Mat& v) const {
    return 0.5 * (v + Ad(g, v));
  }

  // Group exponential of an algebra element (anti-Hermitian, block diagonal
  // when power > 1).  Exact block structure is preserved.
  Mat exp(const Mat& x) const;

  // Principal logarithm.  Throws Error(cut_locus) when an eigenvalue argument
  // comes within `margin` of +-pi.  The result is anti-Hermitian; for SU(n)
  // with n > 2 it need not be traceless when g winds around the center.
  Mat log(const Mat& g, double margin = defaults::log_margin) const;

  // Largest eigenvalue rotation angle of a^-1 b, the geodesic step size.
  double step_angle(const Mat& a, const Mat& b) const;
  // step_angle(a,b) <= bound, with a cheap Frobenius sufficient condition
  // tried before the exact eigenvalue computation.
  bool step_ok(const Mat& a, const Mat& b, double bound) const;

  // Orthonormal basis of the algebra for the metric above (block by block
  // for power > 1).
  std::vector<Mat> algebra_basis() const;
  // Orthonormal for the unscaled pairing -Re tr(XY); rotation angles of its
  // coefficient vectors do not depend on metric_scale.
  std::vector<Mat> algebra_basis_frob() const;

  Eigen::VectorXd coords(const Mat& x) const;
  Mat from_coords(const Eigen::VectorXd& c) const;

  // Gaussian algebra element with independent N(0, spread^2) coefficients in
  // the Frobenius-normalized basis, and its exponential.
  Mat random_algebra(Philox& rng, double spread = 1.0) const;
  Mat random_element(Philox& rng, double spread = 0.5) const;

  // Block diagonal assembly and disassembly for power > 1 (also usable with
  // power == 1, where they are the identity on one-element lists).
  Mat embed_blocks(const std::vector<Mat>& blocks) const;
  std::vector<Mat> split_blocks(const Mat& g) const;
  // The same matrix in every slot; conjugating by embed_diagonal(x) is the
  // simultaneous conjugation action of the block group on the arena.
  Mat embed_diagonal(const Mat& x) const;
};

// Generators e_k = -(i/2) sigma_k of su(2), with [e1,e2] = e3 cyclically.
Mat su2_generator(int k);

// Left trivialized value at q of the fundamental field of the simultaneous
// conjugation action g -> x g x^-1, for x_block in the block algebra:
// Ad_{q^-1} X - X with X = x_block embedded diagonally.
Mat conj_field(const Group& arena, const Mat& q, const Mat& x_block);

// -Re tr(xy), the unscaled pairing used by the Frobenius basis.
double frob_inner(const Mat& x, const Mat& y);

}  // namespace holab
