#pragma once

#include <vector>

#include "holab/lie.hpp"

namespace holab {

// Finite-difference exterior derivatives used by the oracle tests and by the
// calibration of sign conventions.  All of them work in a frame of fields
// indexed by fixed "directions" X: the exterior derivative is
//   d a (X,Y)   = X a(Y) - Y a(X) - a([X,Y])
//   d b (X,Y,Z) = X b(Y,Z) - Y b(X,Z) + Z b(X,Y)
//                 - b([X,Y],Z) + b([X,Z],Y) - b([Y,Z],X)
// where the directional derivatives come from central differences along the
// flow of the field and the frame bracket is supplied by the caller.  For a
// 2-form this is the seven point stencil: six shifted evaluations plus the
// center point for the bracket terms.

template <class F>
double fd_central(F&& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

template <class Shift, class Bracket, class Form1, class Point, class Vec>
double fd_d1_frame(Shift&& shift, Bracket&& bracket, Form1&& alpha,
                   const Point& p, const Vec& x, const Vec& y, double h) {
  const double dx = fd_central([&](double t) { return alpha(shift(p, t, x), y); }, h);
  const double dy = fd_central([&](double t) { return alpha(shift(p, t, y), x); }, h);
  return dx - dy - alpha(p, bracket(x, y));
}

template <class Shift, class Bracket, class Form2, class Point, class Vec>
double fd_d2_frame(Shift&& shift, Bracket&& bracket, Form2&& beta,
                   const Point& p, const Vec& x, const Vec& y, const Vec& z,
                   double h) {
  const double dx =
      fd_central([&](double t) { return beta(shift(p, t, x), y, z); }, h);
  const double dy =
      fd_central([&](double t) { return beta(shift(p, t, y), x, z); }, h);
  const double dz =
      fd_central([&](double t) { return beta(shift(p, t, z), x, y); }, h);
  const double corr = beta(p, bracket(x, y), z) - beta(p, bracket(x, z), y) +
                      beta(p, bracket(y, z), x);
  return dx - dy + dz - corr;
}

// Left-invariant frame on a group: flow g exp(tX), bracket [X,Y].  Forms take
// (point, left trivialized tangents).
template <class Form1>
double fd_d1_left(const Group& g, Form1&& alpha, const Mat& p, const Mat& x,
                  const Mat& y, double h = defaults::fd_step) {
  auto shift = [&g](const Mat& q, double t, const Mat& v) -> Mat {
    return q * g.exp(t * v);
  };
  return fd_d1_frame(shift, &Group::bracket, alpha, p, x, y, h);
}

template <class Form2>
double fd_d2_left(const Group& g, Form2&& beta, const Mat& p, const Mat& x,
                  const Mat& y, const Mat& z, double h = defaults::fd_step) {
  auto shift = [&g](const Mat& q, double t, const Mat& v) -> Mat {
    return q * g.exp(t * v);
  };
  return fd_d2_frame(shift, &Group::bracket, beta, p, x, y, z, h);
}

// Conjugation-orbit frame: fields are indexed by block algebra elements X,
// the flow through q is exp(tX) q exp(-tX), and the frame bracket carries the
// extra minus sign of fundamental fields of a left action:
// [xi_X, xi_Y] = -xi_{[X,Y]}.  Forms take (point, index X); they are expected
// to resolve xi_X(point) themselves, e.g. through conj_field.
template <class Form1>
double fd_d1_conj(const Group& arena, Form1&& alpha, const Mat& q,
                  const Mat& x, const Mat& y, double h = defaults::fd_step) {
  auto shift = [&arena](const Mat& p, double t, const Mat& v) -> Mat {
    const Mat e = arena.embed_diagonal(arena.block().exp(t * v));
    return e * p * e.adjoint();
  };
  auto bracket = [](const Mat& a, const Mat& b) -> Mat {
    return -Group::bracket(a, b);
  };
  return fd_d1_frame(shift, bracket, alpha, q, x, y, h);
}

template <class Form2>
double fd_d2_conj(const Group& arena, Form2&& beta, const Mat& q, const Mat& x,
                  const Mat& y, const Mat& z, double h = defaults::fd_step) {
  auto shift = [&arena](const Mat& p, double t, const Mat& v) -> Mat {
    const Mat e = arena.embed_diagonal(arena.block().exp(t * v));
    return e * p * e.adjoint();
  };
  auto bracket = [](const Mat& a, const Mat& b) -> Mat {
    return -Group::bracket(a, b);
  };
  return fd_d2_frame(shift, bracket, beta, q, x, y, z, h);
}

// Sample-tuple frame for forms on discretized paths and lattices: a point is
// a list of group samples, a direction is a list of algebra elements applied
// by right translation sample by sample, and the bracket is pointwise.
using SampleVec = std::vector<Mat>;

inline SampleVec sample_shift(const Group& g, const SampleVec& p, double t,
                              const SampleVec& v) {
  SampleVec out = p;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = out[k] * g.exp(t * v[k]);
  }
  return out;
}

inline SampleVec sample_bracket(const SampleVec& a, const SampleVec& b) {
  SampleVec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = Group::bracket(a[k], b[k]);
  }
  return out;
}

template <class Form1>
double fd_d1_samples(const Group& g, Form1&& alpha, const SampleVec& p,
                     const SampleVec& x, const SampleVec& y,
                     double h = defaults::fd_step) {
  auto shift = [&g](const SampleVec& q, double t, const SampleVec& v) {
    return sample_shift(g, q, t, v);
  };
  return fd_d1_frame(shift, &sample_bracket, alpha, p, x, y, h);
}

template <class Form2>
double fd_d2_samples(const Group& g, Form2&& beta, const SampleVec& p,
                     const SampleVec& x, const SampleVec& y, const SampleVec& z,
                     double h = defaults::fd_step) {
  auto shift = [&g](const SampleVec& q, double t, const SampleVec& v) {
    return sample_shift(g, q, t, v);
  };
  return fd_d2_frame(shift, &sample_bracket, beta, p, x, y, z, h);
}

}  // namespace holab
