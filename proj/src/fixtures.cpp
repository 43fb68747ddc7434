#include "holab/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "holab/error.hpp"

namespace holab::fixtures {

namespace {

constexpr double pi = std::numbers::pi;

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

void require_su2_block(const Group& g, const char* who) {
  const Group block = g.block();
  if (block.family != Family::SU || block.n != 2) {
    throw Error(ErrorKind::usage,
                fmt::format("{} needs an SU(2) block group", who));
  }
}

std::vector<int> flipped_seams(const std::vector<int>& seams, int n) {
  std::vector<int> out;
  out.reserve(seams.size());
  for (auto it = seams.rbegin(); it != seams.rend(); ++it) {
    out.push_back(n - *it);
  }
  return out;
}

// The radial bump at cube coordinates (x, y, z): identity outside the ball
// of radius 1/2 around the center, a full wrap of SU(2) inside.  On the
// boundary sphere -exp(2 pi m.e) = I, at the center -exp(0) = -I.
Mat su2_bump(const Group& k, double x, double y, double z) {
  const double dx = x - 0.5;
  const double dy = y - 0.5;
  const double dz = z - 0.5;
  const double r = 2.0 * std::sqrt(dx * dx + dy * dy + dz * dz);
  if (r >= 1.0) {
    return k.identity();
  }
  if (r < 1e-14) {
    return -k.identity();
  }
  const Mat axis = (dx * su2_generator(1) + dy * su2_generator(2) +
                    dz * su2_generator(3)) *
                   (2.0 / r);
  return -k.exp(2.0 * pi * smoothstep(r) * axis);
}

}  // namespace

MapData genus_map(const Group& k, int genus) {
  const Group arena = k.arena(2 * genus);
  return MapData{arena, Word::surface_relator(genus), arena.identity()};
}

StringCD1 genus1_string(const MapData& f, int n1, int n2, double amp) {
  require_su2_block(f.arena, "genus1_string");
  const Group& arena = f.arena;
  const Group k = arena.block();
  const Mat x = arena.embed_blocks(
      {0.6 * su2_generator(1), 0.45 * su2_generator(2)});
  const PathMesh w =
      PathMesh::geodesic(arena, f.basepoint, arena.exp(x), n1);

  PathMesh bottom;
  bottom.group = k;
  bottom.samples.resize(static_cast<std::size_t>(n1) + 1);
  for (int i = 0; i <= n1; ++i) {
    bottom.samples[static_cast<std::size_t>(i)] = f.eval(w.at(i));
  }
  PathMesh top = bottom;
  if (amp != 0.0) {
    const Mat e1 = su2_generator(1);
    for (int i = 0; i <= n1; ++i) {
      const double t = static_cast<double>(i) / n1;
      const double c = std::sin(pi * t);
      top.samples[static_cast<std::size_t>(i)] =
          bottom.at(i) * k.exp(amp * c * c * e1);
    }
  }
  return StringCD1{w, SquareMesh::geodesic_sweep(bottom, top, n2)};
}

HomotopyCD11 interp_family(const StringCD1& s0, const StringCD1& s1, int ns) {
  if (s0.w.samples.size() != s1.w.samples.size() ||
      s0.phi.n1 != s1.phi.n1 || s0.phi.n2 != s1.phi.n2) {
    throw Error(ErrorKind::mesh,
                "interpolated strings have mismatched resolutions");
  }
  for (std::size_t i = 0; i < s0.w.samples.size(); ++i) {
    if ((s0.w.samples[i] - s1.w.samples[i]).norm() > defaults::mesh_tol) {
      throw Error(ErrorKind::mesh,
                  "interpolated strings do not share their path");
    }
  }
  const Group k = s0.phi.group;

  HomotopyCD11 out;
  out.h.group = s0.w.group;
  out.h.n1 = s0.w.intervals();
  out.h.n2 = ns;
  out.h.samples.resize(static_cast<std::size_t>(out.h.n1 + 1) *
                       static_cast<std::size_t>(ns + 1));
  for (int i = 0; i <= out.h.n1; ++i) {
    for (int j = 0; j <= ns; ++j) {
      out.h.at(i, j) = s0.w.at(i);
    }
  }
  out.h.seams[0] = s0.w.seams;

  out.H.group = k;
  out.H.n1 = s0.phi.n1;
  out.H.n2 = s0.phi.n2;
  out.H.n3 = ns;
  out.H.samples.resize(static_cast<std::size_t>(out.H.n1 + 1) *
                       static_cast<std::size_t>(out.H.n2 + 1) *
                       static_cast<std::size_t>(ns + 1));
  for (int i = 0; i <= out.H.n1; ++i) {
    for (int j = 0; j <= out.H.n2; ++j) {
      const Mat& a = s0.phi.at(i, j);
      const Mat& b = s1.phi.at(i, j);
      const Mat l = k.log(k.inverse(a) * b);
      out.H.at(i, j, 0) = a;
      out.H.at(i, j, ns) = b;
      for (int s = 1; s < ns; ++s) {
        out.H.at(i, j, s) =
            a * k.exp((static_cast<double>(s) / ns) * l);
      }
    }
  }
  out.H.seams[0] = s0.phi.seams[0];
  out.H.seams[1] = s0.phi.seams[1];
  return out;
}

HomotopyCD11 bump_family(const HomotopyCD11& base) {
  require_su2_block(base.H.group, "bump_family");
  const Group& k = base.H.group;
  HomotopyCD11 out = base;
  for (int i = 0; i <= out.H.n1; ++i) {
    const double x = static_cast<double>(i) / out.H.n1;
    for (int j = 0; j <= out.H.n2; ++j) {
      const double y = static_cast<double>(j) / out.H.n2;
      for (int s = 0; s <= out.H.n3; ++s) {
        const double z = static_cast<double>(s) / out.H.n3;
        out.H.at(i, j, s) = base.H.at(i, j, s) * su2_bump(k, x, y, z);
      }
    }
  }
  return out;
}

HomotopyCD11 reversed_family(const HomotopyCD11& fam) {
  HomotopyCD11 out;
  out.h.group = fam.h.group;
  out.h.n1 = fam.h.n1;
  out.h.n2 = fam.h.n2;
  out.h.samples.resize(fam.h.samples.size());
  for (int i = 0; i <= fam.h.n1; ++i) {
    for (int j = 0; j <= fam.h.n2; ++j) {
      out.h.at(i, j) = fam.h.at(i, fam.h.n2 - j);
    }
  }
  out.h.seams[0] = fam.h.seams[0];
  out.h.seams[1] = flipped_seams(fam.h.seams[1], fam.h.n2);

  out.H.group = fam.H.group;
  out.H.n1 = fam.H.n1;
  out.H.n2 = fam.H.n2;
  out.H.n3 = fam.H.n3;
  out.H.samples.resize(fam.H.samples.size());
  for (int i = 0; i <= fam.H.n1; ++i) {
    for (int j = 0; j <= fam.H.n2; ++j) {
      for (int s = 0; s <= fam.H.n3; ++s) {
        out.H.at(i, j, s) = fam.H.at(i, j, fam.H.n3 - s);
      }
    }
  }
  out.H.seams[0] = fam.H.seams[0];
  out.H.seams[1] = fam.H.seams[1];
  out.H.seams[2] = flipped_seams(fam.H.seams[2], fam.H.n3);
  return out;
}

HomotopyCD11 conjugated_family(const HomotopyCD11& fam, const Group& arena,
                               const Mat& g_block) {
  const Mat big = arena.embed_diagonal(g_block);
  HomotopyCD11 out = fam;
  for (Mat& s : out.h.samples) {
    s = big * s * big.adjoint();
  }
  for (Mat& s : out.H.samples) {
    s = g_block * s * g_block.adjoint();
  }
  return out;
}

namespace {

Mat class_frame(const Group& k, double x, double y) {
  return k.exp(2.0 * pi * y * su2_generator(3)) *
         k.exp(pi * x * su2_generator(2));
}

}  // namespace

SquareMesh class_chart(const Group& k, double rho, int n) {
  require_su2_block(k, "class_chart");
  const Mat top = k.exp(rho * su2_generator(3));
  return SquareMesh::from_function(
      k, n, n, [&](double x, double y) -> Mat {
        const Mat q = class_frame(k, x, y);
        return q * top * q.adjoint();
      });
}

CubeMesh class_suspension(const Group& k, double rho, int n) {
  require_su2_block(k, "class_suspension");
  const Mat e3 = su2_generator(3);
  return CubeMesh::from_function(
      k, n, n, n, [&](double x, double y, double s) -> Mat {
        const Mat q = class_frame(k, x, y);
        return q * k.exp(s * rho * e3) * q.adjoint();
      });
}

CubeMesh euler_cube(const Group& k, int n) {
  require_su2_block(k, "euler_cube");
  return CubeMesh::from_function(
      k, n, n, n, [&](double x, double y, double z) -> Mat {
        const double sx = std::sin(pi * x);
        const Mat axis = sx * std::cos(2.0 * pi * y) * su2_generator(1) +
                         sx * std::sin(2.0 * pi * y) * su2_generator(2) +
                         std::cos(pi * x) * su2_generator(3);
        return k.exp(2.0 * pi * z * axis);
      });
}

HomotopyCD11 CurvatureProbe::loop(double eps) const {
  const Group& arena = f.arena;
  const Group k = arena.block();
  const int ns = 4 * legs;
  const Mat v1b = t1.V.back();
  const Mat v2b = t2.V.back();

  HomotopyCD11 out;
  out.h.group = arena;
  out.h.n1 = n1;
  out.h.n2 = ns;
  out.h.samples.resize(static_cast<std::size_t>(n1 + 1) *
                       static_cast<std::size_t>(ns + 1));
  out.h.seams[1] = {legs, 2 * legs, 3 * legs};

  out.H.group = k;
  out.H.n1 = n1;
  out.H.n2 = n2;
  out.H.n3 = ns;
  out.H.samples.resize(static_cast<std::size_t>(n1 + 1) *
                       static_cast<std::size_t>(n2 + 1) *
                       static_cast<std::size_t>(ns + 1));
  out.H.seams[2] = {legs, 2 * legs, 3 * legs};

  for (int j = 0; j <= ns; ++j) {
    const int leg = j / legs;
    const double r = static_cast<double>(j % legs) / legs;
    // Boundary of the centered square [-eps/2, eps/2]^2; centering cancels
    // the odd error term, so the exponent approaches its limit at second
    // order in eps.
    double cx = -0.5 * eps;
    double cy = -0.5 * eps;
    switch (leg) {
      case 0:
        cx = (r - 0.5) * eps;
        break;
      case 1:
        cx = 0.5 * eps;
        cy = (r - 0.5) * eps;
        break;
      case 2:
        cx = (0.5 - r) * eps;
        cy = 0.5 * eps;
        break;
      case 3:
        cy = (0.5 - r) * eps;
        break;
      default:
        break;
    }

    const Mat zq = cx * t1.v_q + cy * t2.v_q;
    PathMesh w;
    w.group = arena;
    w.samples.resize(static_cast<std::size_t>(n1) + 1);
    for (int i = 0; i <= n1; ++i) {
      const double t = static_cast<double>(i) / n1;
      w.samples[static_cast<std::size_t>(i)] = arena.exp(t * zq);
    }
    for (int i = 0; i <= n1; ++i) {
      out.h.at(i, j) = w.at(i);
    }

    PathMesh bottom;
    bottom.group = k;
    bottom.samples.resize(static_cast<std::size_t>(n1) + 1);
    for (int i = 0; i <= n1; ++i) {
      bottom.samples[static_cast<std::size_t>(i)] = f.eval(w.at(i));
    }
    const Mat corr = k.log(bottom.samples.back()) - cx * v1b - cy * v2b;
    PathMesh top;
    top.group = k;
    top.samples.resize(static_cast<std::size_t>(n1) + 1);
    for (int i = 0; i <= n1; ++i) {
      const double t = static_cast<double>(i) / n1;
      const std::size_t ii = static_cast<std::size_t>(i);
      const Mat g = cx * t1.V[ii] + cy * t2.V[ii] + smoothstep(t) * corr;
      top.samples[ii] = p.u.at(i) * k.exp(g);
    }
    const SquareMesh phi = SquareMesh::geodesic_sweep(bottom, top, n2);
    for (int i = 0; i <= n1; ++i) {
      for (int j2 = 0; j2 <= n2; ++j2) {
        out.H.at(i, j2, j) = phi.at(i, j2);
      }
    }
  }
  return out;
}

double CurvatureProbe::reference(CocycleConvention conv) const {
  return zeta_fiber(f, p, t1, t2, conv);
}

CurvatureProbe curvature_probe(const Group& k, std::uint64_t seed) {
  require_su2_block(k, "curvature_probe");
  CurvatureProbe out;
  out.f = genus_map(k.block(), 1);
  const Group& arena = out.f.arena;
  const Group block = arena.block();
  Philox rng(seed, 77);

  const Mat y0 = block.random_algebra(rng, 0.35);
  PathMesh u;
  u.group = block;
  u.samples.resize(static_cast<std::size_t>(out.n1) + 1);
  for (int i = 0; i <= out.n1; ++i) {
    const double t = static_cast<double>(i) / out.n1;
    const double c = std::sin(pi * t);
    u.samples[static_cast<std::size_t>(i)] = block.exp(c * c * y0);
  }
  out.p = FiberPoint{out.f.basepoint, std::move(u)};

  auto tangent = [&](double spread) -> FiberTangent {
    FiberTangent t;
    t.v_q = arena.random_algebra(rng, spread);
    const Mat w = block.random_algebra(rng, 0.4);
    const Mat goal = word_omega(out.f.arena, out.f.word, out.p.q, t.v_q);
    t.V.resize(static_cast<std::size_t>(out.n1) + 1);
    for (int i = 0; i <= out.n1; ++i) {
      const double tt = static_cast<double>(i) / out.n1;
      const double c = std::sin(pi * tt);
      t.V[static_cast<std::size_t>(i)] = c * c * w + smoothstep(tt) * goal;
    }
    return t;
  };
  out.t1 = tangent(0.5);
  out.t2 = tangent(0.5);
  return out;
}

Mat commuting_tuple(const Group& arena, Philox& rng) {
  const Group block = arena.block();
  const Mat x = block.random_algebra(rng, 0.6);
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<std::size_t>(arena.power));
  for (int i = 0; i < arena.power; ++i) {
    blocks.push_back(block.exp(rng.uniform(0.4, 1.3) * x));
  }
  return arena.embed_blocks(blocks);
}

FiberPoint geodesic_point(const MapData& f, const Mat& q, int n) {
  const Group k = f.arena.block();
  FiberPoint p;
  p.q = q;
  p.u = PathMesh::geodesic(k, k.identity(), f.eval(q), n);
  return p;
}

FiberTangent profiled_tangent(const MapData& f, const FiberPoint& p,
                              const Mat& v_q, const Mat& wiggle) {
  const Mat goal = word_omega(f.arena, f.word, p.q, v_q);
  FiberTangent t;
  t.v_q = v_q;
  const int n = p.u.intervals();
  t.V.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double c = std::sin(pi * s);
    t.V[static_cast<std::size_t>(i)] = c * c * wiggle + smoothstep(s) * goal;
  }
  return t;
}

std::pair<HomotopyCD11, HomotopyCD11> welldef_pair(const MapData& f, int n) {
  const StringCD1 s0 = genus1_string(f, n, n, 0.0);
  const StringCD1 s1 = genus1_string(f, n, n, 0.8);
  HomotopyCD11 plain = interp_family(s0, s1, n);
  HomotopyCD11 wrapped = bump_family(plain);
  return {std::move(plain), std::move(wrapped)};
}

}  // namespace holab::fixtures
