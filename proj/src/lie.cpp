#include "holab/lie.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fmt/format.h"

namespace holab {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(t)/t and t/sin(t) with series fallbacks near zero.
double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

double inv_sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  }
  return t / std::sin(t);
}

Mat antihermitian_part(const Mat& x) { return 0.5 * (x - x.adjoint()); }

// exp on one block.  su(2) gets the closed form exp(X) = cos(t) I + sinc(t) X
// with t^2 = -tr(X^2)/2; everything else goes through the eigendecomposition
// of the Hermitian matrix iX.
Mat exp_block(Family family, const Mat& x) {
  const auto n = x.rows();
  if (family == Family::SU && n == 2) {
    const double t2 = std::max(0.0, -0.5 * (x * x).trace().real());
    const double t = std::sqrt(t2);
    return std::cos(t) * Mat::Identity(2, 2) + sinc(t) * x;
  }
  Mat h = Cplx(0, 1) * x;
  h = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "eigendecomposition failed in exp");
  }
  const Eigen::VectorXd d = es.eigenvalues();
  Eigen::VectorXcd phase(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phase[k] = std::polar(1.0, -d[k]);
  }
  Mat g = es.eigenvectors() * phase.asDiagonal() *
          es.eigenvectors().adjoint();
  if (family == Family::SO) g = g.real().cast<Cplx>();
  return g;
}

Mat log_block(Family family, const Mat& g, double margin) {
  const auto n = g.rows();
  if (family == Family::SU && n == 2) {
    const double c = std::clamp(0.5 * g.trace().real(), -1.0, 1.0);
    const double t = std::acos(c);
    if (kPi - t < margin) {
      throw Error(ErrorKind::cut_locus,
                  fmt::format("rotation angle {} within {} of pi", t, margin));
    }
    return inv_sinc(t) * antihermitian_part(g);
  }
  Eigen::ComplexSchur<Mat> schur(g);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "Schur decomposition failed in log");
  }
  Eigen::VectorXcd args(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = std::arg(schur.matrixT()(k, k));
    if (kPi - std::abs(a) < margin) {
      throw Error(
          ErrorKind::cut_locus,
          fmt::format("eigenvalue argument {} within {} of pi", a, margin));
    }
    args[k] = Cplx(0, a);
  }
  Mat x = schur.matrixU() * args.asDiagonal() * schur.matrixU().adjoint();
  x = antihermitian_part(x);
  if (family == Family::SO) {
    x = Cplx(0.5) * (x - x.transpose());
    x = x.real().cast<Cplx>();
  }
  return x;
}

// Orthonormal basis of one block's algebra for -Re tr(xy).
std::vector<Mat> block_basis_frob(Family family, int n) {
  std::vector<Mat> basis;
  const Cplx i(0, 1);
  const double r2 = std::numbers::sqrt2;
  switch (family) {
    case Family::U:
      basis.push_back(i * Mat::Identity(1, 1));
      break;
    case Family::SO:
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          Mat a = Mat::Zero(n, n);
          a(j, k) = 1.0 / r2;
          a(k, j) = -1.0 / r2;
          basis.push_back(a);
        }
      }
      break;
    case Family::SU:
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          Mat a = Mat::Zero(n, n);
          a(j, k) = 1.0 / r2;
          a(k, j) = -1.0 / r2;
          basis.push_back(a);
          Mat b = Mat::Zero(n, n);
          b(j, k) = i / r2;
          b(k, j) = i / r2;
          basis.push_back(b);
        }
      }
      // Traceless diagonal part, Gram-Schmidt over i*(E_jj - E_{j+1,j+1}).
      for (int j = 0; j + 1 < n; ++j) {
        Mat d = Mat::Zero(n, n);
        d(j, j) = i;
        d(j + 1, j + 1) = -i;
        for (const Mat& e : basis) {
          d -= frob_inner(d, e) * e;
        }
        d /= std::sqrt(frob_inner(d, d));
        basis.push_back(d);
      }
      break;
  }
  return basis;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::SU:
      return "SU";
    case Family::SO:
      return "SO";
    case Family::U:
      return "U";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "SU") return Family::SU;
  if (s == "SO") return Family::SO;
  if (s == "U") return Family::U;
  throw Error(ErrorKind::parse, "unknown group family '" + s + "'");
}

double frob_inner(const Mat& x, const Mat& y) {
  return -(x * y).trace().real();
}

Mat su2_generator(int k) {
  const Cplx i(0, 1);
  Mat e = Mat::Zero(2, 2);
  switch (k) {
    case 1:
      e(0, 1) = -0.5 * i;
      e(1, 0) = -0.5 * i;
      break;
    case 2:
      e(0, 1) = -0.5;
      e(1, 0) = 0.5;
      break;
    case 3:
      e(0, 0) = -0.5 * i;
      e(1, 1) = 0.5 * i;
      break;
    default:
      throw Error(ErrorKind::usage, "su2_generator index must be 1, 2 or 3");
  }
  return e;
}

Group Group::arena(int m) const {
  if (power != 1) {
    throw Error(ErrorKind::usage, "arena of an arena is not supported");
  }
  if (m < 1) throw Error(ErrorKind::usage, "arena power must be positive");
  Group g = *this;
  g.power = m;
  return g;
}

Group Group::block() const {
  Group g = *this;
  g.power = 1;
  return g;
}

int Group::block_algebra_dim() const {
  switch (family) {
    case Family::SU:
      return n * n - 1;
    case Family::SO:
      return n * (n - 1) / 2;
    case Family::U:
      return 1;
  }
  return 0;
}

double Group::norm(const Mat& x) const {
  return std::sqrt(std::max(0.0, inner(x, x)));
}

bool Group::is_member(const Mat& g, double tol) const {
  const int m = matrix_size();
  if (g.rows() != m || g.cols() != m) return false;
  if (!g.allFinite()) return false;
  if ((g.adjoint() * g - identity()).norm() > tol) return false;
  for (int a = 0; a < power; ++a) {
    for (int b = 0; b < power; ++b) {
      if (a == b) continue;
      if (g.block(a * n, b * n, n, n).norm() > tol) return false;
    }
  }
  for (int a = 0; a < power; ++a) {
    const Mat blk = g.block(a * n, a * n, n, n);
    switch (family) {
      case Family::SU:
        if (std::abs(blk.determinant() - Cplx(1, 0)) > 10 * tol) return false;
        break;
      case Family::SO:
        if (blk.imag().norm() > tol) return false;
        if (std::abs(blk.determinant() - Cplx(1, 0)) > 10 * tol) return false;
        break;
      case Family::U:
        break;
    }
  }
  return true;
}

void Group::validate(const Mat& g, double tol) const {
  if (!is_member(g, tol)) {
    throw Error(ErrorKind::validation,
                fmt::format("matrix is not in {}({})^{} within {}",
                            to_string(family), n, power, tol));
  }
}

Mat Group::exp(const Mat& x) const {
  if (power == 1) return exp_block(family, x);
  Mat g = Mat::Zero(matrix_size(), matrix_size());
  for (int a = 0; a < power; ++a) {
    g.block(a * n, a * n, n, n) = exp_block(family, x.block(a * n, a * n, n, n));
  }
  return g;
}

Mat Group::log(const Mat& g, double margin) const {
  if (power == 1) return log_block(family, g, margin);
  Mat x = Mat::Zero(matrix_size(), matrix_size());
  for (int a = 0; a < power; ++a) {
    x.block(a * n, a * n, n, n) =
        log_block(family, g.block(a * n, a * n, n, n), margin);
  }
  return x;
}

double Group::step_angle(const Mat& a, const Mat& b) const {
  const Mat u = a.adjoint() * b;
  Eigen::ComplexSchur<Mat> schur(u, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "Schur decomposition failed in step_angle");
  }
  double worst = 0.0;
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    worst = std::max(worst, std::abs(std::arg(schur.matrixT()(k, k))));
  }
  return worst;
}

bool Group::step_ok(const Mat& a, const Mat& b, double bound) const {
  // |1 - e^{i t}| = 2 sin(|t|/2), and the largest such value is bounded by
  // the Frobenius norm of a^-1 b - I = a^-1 (b - a).
  if ((b - a).norm() <= 2.0 * std::sin(0.5 * std::min(bound, kPi))) {
    return true;
  }
  return step_angle(a, b) <= bound;
}

std::vector<Mat> Group::algebra_basis_frob() const {
  const std::vector<Mat> blk = block_basis_frob(family, n);
  if (power == 1) return blk;
  std::vector<Mat> basis;
  basis.reserve(static_cast<std::size_t>(power) * blk.size());
  for (int a = 0; a < power; ++a) {
    for (const Mat& e : blk) {
      Mat big = Mat::Zero(matrix_size(), matrix_size());
      big.block(a * n, a * n, n, n) = e;
      basis.push_back(big);
    }
  }
  return basis;
}

std::vector<Mat> Group::algebra_basis() const {
  std::vector<Mat> basis = algebra_basis_frob();
  const double s = 1.0 / std::sqrt(metric_scale);
  for (Mat& e : basis) e *= s;
  return basis;
}

Eigen::VectorXd Group::coords(const Mat& x) const {
  const std::vector<Mat> basis = algebra_basis();
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c[static_cast<Eigen::Index>(k)] = inner(x, basis[k]);
  }
  return c;
}

Mat Group::from_coords(const Eigen::VectorXd& c) const {
  const std::vector<Mat> basis = algebra_basis();
  if (c.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error(ErrorKind::usage, "coordinate vector has wrong length");
  }
  Mat x = Mat::Zero(matrix_size(), matrix_size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    x += c[static_cast<Eigen::Index>(k)] * basis[k];
  }
  return x;
}

Mat Group::random_algebra(Philox& rng, double spread) const {
  const std::vector<Mat> basis = algebra_basis_frob();
  Mat x = Mat::Zero(matrix_size(), matrix_size());
  for (const Mat& e : basis) {
    x += (spread * rng.normal()) * e;
  }
  return x;
}

Mat Group::random_element(Philox& rng, double spread) const {
  return exp(random_algebra(rng, spread));
}

Mat Group::embed_blocks(const std::vector<Mat>& blocks) const {
  if (static_cast<int>(blocks.size()) != power) {
    throw Error(ErrorKind::usage,
                fmt::format("expected {} blocks, got {}", power, blocks.size()));
  }
  Mat g = Mat::Zero(matrix_size(), matrix_size());
  for (int a = 0; a < power; ++a) {
    if (blocks[a].rows() != n || blocks[a].cols() != n) {
      throw Error(ErrorKind::usage, "block has wrong size");
    }
    g.block(a * n, a * n, n, n) = blocks[a];
  }
  return g;
}

std::vector<Mat> Group::split_blocks(const Mat& g) const {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<std::size_t>(power));
  for (int a = 0; a < power; ++a) {
    blocks.push_back(g.block(a * n, a * n, n, n));
  }
  return blocks;
}

Mat Group::embed_diagonal(const Mat& x) const {
  Mat g = Mat::Zero(matrix_size(), matrix_size());
  for (int a = 0; a < power; ++a) {
    g.block(a * n, a * n, n, n) = x;
  }
  return g;
}

Mat conj_field(const Group& arena, const Mat& q, const Mat& x_block) {
  const Mat big = arena.embed_diagonal(x_block);
  return q.adjoint() * big * q - big;
}

}  // namespace holab
