#include "holab/moment.hpp"

#include <cmath>
#include <cstddef>

#include <fmt/format.h>

namespace holab {

Mat momentum(const FiberPoint& p, const MapData& f) {
  p.validate(f);
  return -eta_theta(p.u);
}

FiberTangent fundamental_tangent(const MapData& f, const FiberPoint& p,
                                 const Mat& x_block) {
  const Group k = f.arena.block();
  FiberTangent out;
  out.v_q = conj_field(f.arena, p.q, x_block);
  out.V.resize(p.u.samples.size());
  for (std::size_t i = 0; i < p.u.samples.size(); ++i) {
    out.V[i] = conj_field(k, p.u.samples[i], x_block);
  }
  return out;
}

double momentum_defect(const FiberPoint& p, const Mat& x_block,
                       const FiberTangent& t, const MapData& f, double h,
                       CocycleConvention conv) {
  p.validate(f);
  t.validate(f, p);
  if (!(h > 0.0) || h < 1e-13) {
    throw Error(ErrorKind::numeric,
                fmt::format("finite-difference step {:g} underflows", h));
  }
  const Group k = f.arena.block();
  // The pairing <mu, X> extends off the fiber to arbitrary paths, so the
  // exp-curve may leave the bundle at second order without biasing the
  // derivative at zero.
  const auto pairing = [&](double s) {
    PathMesh moved;
    moved.group = k;
    moved.seams = p.u.seams;
    moved.samples = sample_shift(k, p.u.samples, s, t.V);
    return -k.inner(eta_theta(moved), x_block);
  };
  const double derivative = (pairing(h) - pairing(-h)) / (2.0 * h);
  const FiberTangent xp = fundamental_tangent(f, p, x_block);
  return std::abs(derivative - zeta_fiber(f, p, t, xp, conv));
}

FlatnessReport flatness_probe(const Mat& tuple, const MapData& f, double tol,
                              int samples) {
  f.validate();
  if (!f.arena.is_member(tuple, defaults::mesh_tol)) {
    throw Error(ErrorKind::validation,
                "flatness_probe tuple is not a member of the arena");
  }
  if (samples < 1) {
    throw Error(ErrorKind::usage,
                fmt::format("completion path needs at least one interval, "
                            "got {}",
                            samples));
  }
  const Group k = f.arena.block();
  const Mat r = f.eval(tuple);
  const Mat y = k.log(r);

  FlatnessReport rep;
  rep.relator_defect = k.norm(y);

  FiberPoint p;
  p.q = tuple;
  p.u = PathMesh::geodesic(k, k.identity(), r, samples);
  rep.momentum_norm = k.norm(momentum(p, f));
  rep.pass = rep.relator_defect <= tol && rep.momentum_norm <= tol;
  return rep;
}

}  // namespace holab
