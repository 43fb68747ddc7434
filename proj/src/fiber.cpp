#include "holab/fiber.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "holab/error.hpp"

namespace holab {

namespace {

void require_near(const Mat& a, const Mat& b, double tol, ErrorKind kind,
                  const std::string& what) {
  const double d = (a - b).norm();
  if (!(d <= tol)) {
    throw Error(kind, fmt::format("{} (defect {:.3e}, tol {:.1e})", what, d, tol));
  }
}

// Merged sorted union of two seam lists.
std::vector<int> merge_seams(const std::vector<int>& a,
                             const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

// Seams of the concatenation of two segments of lengths na and nb: a's
// seams, the junction, and b's seams shifted past it.
std::vector<int> concat_seams(const std::vector<int>& a, int na,
                              const std::vector<int>& b) {
  std::vector<int> out = a;
  out.push_back(na);
  for (int s : b) {
    out.push_back(na + s);
  }
  return out;
}

// One exponent value of the family: 3-form integral over the cube minus the
// word 2-form integral over the base square.
double family_exponent(const HomotopyCD11& fam, const MapData& f,
                       CocycleConvention conv, int workers) {
  const Group k = f.arena.block();
  const Form3 lam = [&k](const Mat&, const Mat& x, const Mat& y,
                         const Mat& z) { return k.cartan3(x, y, z); };
  const Form2 zw = [&f, conv](const Mat& p, const Mat& v, const Mat& w) {
    return word_zeta(f.arena, f.word, p, v, w, conv);
  };
  return integrate_3form(fam.H, lam, workers) -
         integrate_2form(fam.h, zw, workers);
}

struct Ladder {
  std::array<double, 3> value{};
  std::array<int, 3> level{};
};

template <class Data, class Eval>
Ladder run_ladder(const Data& finest, int label, Eval&& eval) {
  Ladder out;
  for (int idx = 0; idx < 3; ++idx) {
    const int factor = 1 << (2 - idx);
    out.level[static_cast<std::size_t>(idx)] = label / factor;
    if (factor == 1) {
      out.value[static_cast<std::size_t>(idx)] = eval(finest, factor);
    } else {
      out.value[static_cast<std::size_t>(idx)] =
          eval(finest.coarsened(factor), factor);
    }
  }
  return out;
}

}  // namespace

void FiberPoint::validate(const MapData& f, double tol) const {
  const Group block = f.arena.block();
  if (u.group != block) {
    throw Error(ErrorKind::validation,
                "the recorded path does not live in the block group");
  }
  if (!f.arena.is_member(q, tol)) {
    throw Error(ErrorKind::validation,
                "the base point is not a member of the arena");
  }
  u.validate(defaults::step_bound, tol);
  require_near(u.samples.front(), block.identity(), tol, ErrorKind::validation,
               "the recorded path does not start at the identity");
  require_near(u.samples.back(), f.eval(q), tol, ErrorKind::validation,
               "the recorded path does not end at the word value");
}

void FiberTangent::validate(const MapData& f, const FiberPoint& p,
                            double tol) const {
  if (V.size() != p.u.samples.size()) {
    throw Error(
        ErrorKind::validation,
        fmt::format("field has {} samples but the path has {}", V.size(),
                    p.u.samples.size()));
  }
  if (V.front().norm() > tol) {
    throw Error(ErrorKind::validation,
                "the field does not vanish at the start of the path");
  }
  const Mat goal = word_omega(f.arena, f.word, p.q, v_q);
  require_near(V.back(), goal, tol, ErrorKind::validation,
               "the field does not reach the word differential at the end");
}

FiberPoint fiber_point(const StringCD1& s, const MapData& f) {
  s.validate(f);
  return FiberPoint{s.endpoint(), s.fiber_path()};
}

double beta_lambda(const PathMesh& u, const SampleVec& V, const SampleVec& W) {
  if (V.size() != W.size() || V.size() != u.samples.size()) {
    throw Error(ErrorKind::validation,
                fmt::format("field lengths {} and {} do not match the path's "
                            "{} samples",
                            V.size(), W.size(), u.samples.size()));
  }
  const Group& g = u.group;
  double sum = 0.0;
  double comp = 0.0;
  for (int i = 0; i < u.intervals(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const Mat delta = g.log(g.inverse(u.at(i)) * u.at(i + 1));
    const Mat vm = 0.5 * (V[k] + V[k + 1]);
    const Mat wm = 0.5 * (W[k] + W[k + 1]);
    const double term = g.cartan3(delta, vm, wm);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double zeta_fiber(const MapData& f, const FiberPoint& p, const FiberTangent& a,
                  const FiberTangent& b, CocycleConvention conv) {
  return beta_lambda(p.u, a.V, b.V) -
         word_zeta(f.arena, f.word, p.q, a.v_q, b.v_q, conv);
}

Holonomy holonomy(const HomotopyCD11& fam, const MapData& f,
                  CocycleConvention conv, int workers, double tol,
                  double snap_tol) {
  fam.validate_family(f, defaults::step_bound, tol);
  const Ladder ladder =
      run_ladder(fam, fam.H.n1, [&](const HomotopyCD11& level, int) {
        return family_exponent(level, f, conv, workers);
      });
  Holonomy out;
  out.area = ladder.value[2];
  out.fit = richardson(ladder.value, ladder.level);
  out.circle = std::exp(Cplx(0.0, 2.0 * std::numbers::pi * out.fit.value));
  out.closed = fam.closed(tol);
  out.strict = fam.strict(tol);
  if (out.closed) {
    out.snap = integer_snap(out.fit.value, snap_tol);
  }
  return out;
}

HomotopyCD11 stack(const HomotopyCD11& a, const HomotopyCD11& b, double tol) {
  if (a.h.group != b.h.group || a.H.group != b.H.group) {
    throw Error(ErrorKind::validation,
                "stacked families live over different groups");
  }
  if (a.h.n1 != b.h.n1 || a.H.n1 != b.H.n1 || a.H.n2 != b.H.n2) {
    throw Error(ErrorKind::mesh,
                fmt::format("stacked families disagree on the slice "
                            "resolution: ({}, {}, {}) vs ({}, {}, {})",
                            a.h.n1, a.H.n1, a.H.n2, b.h.n1, b.H.n1, b.H.n2));
  }
  if (!StringCD1::same(a.slice(a.h.n2), b.slice(0), tol)) {
    throw Error(ErrorKind::mesh,
                "the junction slices of the stacked families disagree");
  }

  HomotopyCD11 out;
  out.h.group = a.h.group;
  out.h.n1 = a.h.n1;
  out.h.n2 = a.h.n2 + b.h.n2;
  out.h.samples.resize(static_cast<std::size_t>(out.h.n1 + 1) *
                       static_cast<std::size_t>(out.h.n2 + 1));
  for (int i = 0; i <= out.h.n1; ++i) {
    for (int j = 0; j <= a.h.n2; ++j) {
      out.h.at(i, j) = a.h.at(i, j);
    }
    for (int j = 1; j <= b.h.n2; ++j) {
      out.h.at(i, a.h.n2 + j) = b.h.at(i, j);
    }
  }
  out.h.seams[0] = merge_seams(a.h.seams[0], b.h.seams[0]);
  out.h.seams[1] = concat_seams(a.h.seams[1], a.h.n2, b.h.seams[1]);

  out.H.group = a.H.group;
  out.H.n1 = a.H.n1;
  out.H.n2 = a.H.n2;
  out.H.n3 = a.H.n3 + b.H.n3;
  out.H.samples.resize(static_cast<std::size_t>(out.H.n1 + 1) *
                       static_cast<std::size_t>(out.H.n2 + 1) *
                       static_cast<std::size_t>(out.H.n3 + 1));
  for (int i = 0; i <= out.H.n1; ++i) {
    for (int j = 0; j <= out.H.n2; ++j) {
      for (int k = 0; k <= a.H.n3; ++k) {
        out.H.at(i, j, k) = a.H.at(i, j, k);
      }
      for (int k = 1; k <= b.H.n3; ++k) {
        out.H.at(i, j, a.H.n3 + k) = b.H.at(i, j, k);
      }
    }
  }
  out.H.seams[0] = merge_seams(a.H.seams[0], b.H.seams[0]);
  out.H.seams[1] = merge_seams(a.H.seams[1], b.H.seams[1]);
  out.H.seams[2] = concat_seams(a.H.seams[2], a.H.n3, b.H.seams[2]);
  return out;
}

namespace {

// Shared core of the two relative_period entries.  `push` sends a sample of
// h to the layer the cube's top face must match; `ref_for` yields the 2-form
// paired with h at a given coarsening factor, so tolerances that track the
// step size can loosen on the coarse ladder levels.
RelPeriod rel_period_core(const SquareMesh& h, const CubeMesh& H,
                          const Group& k,
                          const std::function<Mat(const Mat&)>& push,
                          const std::function<Form2(int)>& ref_for,
                          int workers, double tol, double snap_tol) {
  h.validate();
  H.validate();
  if (H.group != k) {
    throw Error(ErrorKind::validation,
                "the cube does not live in the expected block group");
  }
  if (H.n1 != h.n1 || H.n2 != h.n2) {
    throw Error(ErrorKind::mesh,
                fmt::format("cube resolution ({}, {}) does not match the "
                            "square's ({}, {})",
                            H.n1, H.n2, h.n1, h.n2));
  }
  const Mat id = k.identity();
  for (int i = 0; i <= H.n1; ++i) {
    for (int j = 0; j <= H.n2; ++j) {
      require_near(H.at(i, j, 0), id, tol, ErrorKind::mesh,
                   fmt::format("bottom face is not the identity at ({}, {})",
                               i, j));
      require_near(H.at(i, j, H.n3), push(h.at(i, j)), tol, ErrorKind::mesh,
                   fmt::format("top face does not match the pushed square "
                               "at ({}, {})",
                               i, j));
    }
  }
  for (int j = 0; j <= H.n2; ++j) {
    for (int s = 0; s <= H.n3; ++s) {
      require_near(H.at(0, j, s), H.at(0, 0, s), tol, ErrorKind::mesh,
                   fmt::format("left t1 face moves along t2 at ({}, {})", j,
                               s));
      require_near(H.at(H.n1, j, s), H.at(H.n1, 0, s), tol, ErrorKind::mesh,
                   fmt::format("right t1 face moves along t2 at ({}, {})", j,
                               s));
    }
  }
  for (int i = 0; i <= H.n1; ++i) {
    for (int s = 0; s <= H.n3; ++s) {
      require_near(H.at(i, 0, s), H.at(i, H.n2, s), tol, ErrorKind::mesh,
                   fmt::format("the two t2 faces disagree at ({}, {})", i, s));
    }
  }

  const Form3 lam = [&k](const Mat&, const Mat& x, const Mat& y,
                         const Mat& z) { return k.cartan3(x, y, z); };
  struct Pair {
    SquareMesh h;
    CubeMesh H;
    Pair coarsened(int factor) const {
      return Pair{h.coarsened(factor), H.coarsened(factor)};
    }
  };
  const Pair finest{h, H};
  const Ladder ladder =
      run_ladder(finest, H.n1, [&](const Pair& level, int factor) {
        return integrate_3form(level.H, lam, workers) -
               integrate_2form(level.h, ref_for(factor), workers);
      });

  RelPeriod out;
  out.raw = ladder.value[2];
  out.fit = richardson(ladder.value, ladder.level);
  out.snap = integer_snap(out.fit.value, snap_tol);
  return out;
}

}  // namespace

RelPeriod relative_period(const SquareMesh& h, const CubeMesh& H,
                          const MapData& f, CocycleConvention conv,
                          int workers, double tol, double snap_tol) {
  f.validate(tol);
  if (h.group != f.arena) {
    throw Error(ErrorKind::validation,
                "the square does not live in the word's arena");
  }
  auto ref_for = [&f, conv](int) -> Form2 {
    return [&f, conv](const Mat& p, const Mat& v, const Mat& w) {
      return word_zeta(f.arena, f.word, p, v, w, conv);
    };
  };
  auto push = [&f](const Mat& q) -> Mat { return f.eval(q); };
  return rel_period_core(h, H, f.arena.block(), push, ref_for, workers, tol,
                         snap_tol);
}

RelPeriod relative_period(const SquareMesh& h, const CubeMesh& H,
                          const ClassForm& cls, int workers, double tol,
                          double snap_tol, double eval_tol) {
  if (h.group != cls.k) {
    throw Error(ErrorKind::validation,
                "the square does not live in the class's group");
  }
  // Chord secants sit off the exact tangent space by a step-squared amount,
  // so the tangency slack widens with the coarsening factor.
  auto ref_for = [&cls, eval_tol](int factor) -> Form2 {
    const double slack = eval_tol * factor;
    return [&cls, slack](const Mat& g, const Mat& v, const Mat& w) {
      return cls.eval(g, v, w, slack);
    };
  };
  auto push = [](const Mat& g) -> Mat { return g; };
  return rel_period_core(h, H, cls.k, push, ref_for, workers, tol, snap_tol);
}

StringCD1 juxtapose(const StringCD1& s, const StringCD1& loop,
                    const MapData& f, double tol) {
  s.validate(f, defaults::step_bound, tol);
  loop.validate(f, defaults::step_bound, tol);
  const Group block = f.arena.block();
  require_near(loop.endpoint(), f.basepoint, tol, ErrorKind::mesh,
               "the loop does not return to the basepoint");
  for (int i = 0; i <= loop.phi.n1; ++i) {
    require_near(loop.phi.at(i, loop.phi.n2), block.identity(), tol,
                 ErrorKind::mesh,
                 fmt::format("the loop's upper edge leaves the identity at "
                             "column {}",
                             i));
  }
  if (loop.phi.n2 != s.phi.n2) {
    throw Error(ErrorKind::mesh,
                fmt::format("interpolation resolutions {} and {} do not "
                            "match",
                            loop.phi.n2, s.phi.n2));
  }
  require_near(loop.w.samples.back(), s.w.samples.front(), tol,
               ErrorKind::mesh, "glued path samples disagree at the seam");
  for (int j = 0; j <= s.phi.n2; ++j) {
    require_near(loop.phi.at(loop.phi.n1, j), s.phi.at(0, j), tol,
                 ErrorKind::mesh,
                 fmt::format("glued square columns disagree at the seam, "
                             "row {}",
                             j));
  }

  const int na = loop.w.intervals();
  StringCD1 out;
  out.w.group = s.w.group;
  out.w.samples.assign(loop.w.samples.begin(), loop.w.samples.end() - 1);
  out.w.samples.insert(out.w.samples.end(), s.w.samples.begin(),
                       s.w.samples.end());
  out.w.seams = concat_seams(loop.w.seams, na, s.w.seams);

  out.phi.group = s.phi.group;
  out.phi.n1 = loop.phi.n1 + s.phi.n1;
  out.phi.n2 = s.phi.n2;
  out.phi.samples.resize(static_cast<std::size_t>(out.phi.n1 + 1) *
                         static_cast<std::size_t>(out.phi.n2 + 1));
  for (int j = 0; j <= out.phi.n2; ++j) {
    for (int i = 0; i < loop.phi.n1; ++i) {
      out.phi.at(i, j) = loop.phi.at(i, j);
    }
    for (int i = 0; i <= s.phi.n1; ++i) {
      out.phi.at(na + i, j) = s.phi.at(i, j);
    }
  }
  out.phi.seams[0] = concat_seams(loop.phi.seams[0], na, s.phi.seams[0]);
  out.phi.seams[1] = merge_seams(loop.phi.seams[1], s.phi.seams[1]);
  return out;
}

}  // namespace holab
