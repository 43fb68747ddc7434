#pragma once

#include <array>
#include <functional>
#include <vector>

#include "holab/words.hpp"

namespace holab {

// Discrete geodesic meshes over a group or an arena.  Samples are stored
// row major; adjacent samples must stay within the step bound so that the
// logarithms of the steps are unambiguous.  Seams mark sample indices where
// two meshes were glued; they must survive refinement and coarsening.

struct PathMesh {
  Group group;
  std::vector<Mat> samples;
  std::vector<int> seams;

  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  const Mat& at(int i) const { return samples[static_cast<std::size_t>(i)]; }

  void validate(double bound = defaults::step_bound,
                double tol = defaults::mesh_tol) const;

  // Insert factor-1 geodesic points per interval; original samples survive
  // unchanged at multiples of factor.
  PathMesh refined(int factor) const;
  // Keep every factor-th sample; dims and seams must divide evenly.
  PathMesh coarsened(int factor) const;

  static PathMesh geodesic(const Group& g, const Mat& a, const Mat& b, int n);
  static PathMesh constant(const Group& g, const Mat& a, int n);
  // Sampler lambdas handed to from_function (here and below) must declare an
  // explicit Mat return type; a deduced Eigen expression type would dangle.
  static PathMesh from_function(const Group& g, int n,
                                const std::function<Mat(double)>& f);
};

struct SquareMesh {
  Group group;
  int n1 = 0;
  int n2 = 0;
  std::vector<Mat> samples;
  std::array<std::vector<int>, 2> seams;

  int index(int i, int j) const { return i * (n2 + 1) + j; }
  const Mat& at(int i, int j) const {
    return samples[static_cast<std::size_t>(index(i, j))];
  }
  Mat& at(int i, int j) {
    return samples[static_cast<std::size_t>(index(i, j))];
  }

  void validate(double bound = defaults::step_bound,
                double tol = defaults::mesh_tol) const;

  SquareMesh refined(int factor) const;
  SquareMesh coarsened(int factor) const;

  // The 1d mesh along `axis` with the other index fixed.
  PathMesh line(int axis, int fixed) const;

  static SquareMesh from_function(
      const Group& g, int n1, int n2,
      const std::function<Mat(double, double)>& f);
  // Geodesic sweep in the second axis from `bottom` to `top` (pointwise in
  // the shared first axis).
  static SquareMesh geodesic_sweep(const PathMesh& bottom, const PathMesh& top,
                                   int n2);
};

struct CubeMesh {
  Group group;
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  std::vector<Mat> samples;
  std::array<std::vector<int>, 3> seams;

  int index(int i, int j, int k) const {
    return (i * (n2 + 1) + j) * (n3 + 1) + k;
  }
  const Mat& at(int i, int j, int k) const {
    return samples[static_cast<std::size_t>(index(i, j, k))];
  }
  Mat& at(int i, int j, int k) {
    return samples[static_cast<std::size_t>(index(i, j, k))];
  }

  void validate(double bound = defaults::step_bound,
                double tol = defaults::mesh_tol) const;

  CubeMesh refined(int factor) const;
  CubeMesh coarsened(int factor) const;

  // The square mesh obtained by fixing one axis; remaining axes keep order.
  SquareMesh face(int axis, int fixed) const;

  static CubeMesh from_function(
      const Group& g, int n1, int n2, int n3,
      const std::function<Mat(double, double, double)>& f);
};

// The equivariant map under study: a word map K^m -> K with a basepoint o
// where the word evaluates to the identity.
struct MapData {
  Group arena;
  Word word;
  Mat basepoint;

  Mat eval(const Mat& q) const { return word_eval(arena, word, q); }
  void validate(double tol = defaults::mesh_tol) const;
};

// A string: a path w in the arena starting at the basepoint, together with a
// square phi in K, axes (t, s), interpolating from the pushed forward path
// f(w(t)) at s = 0 to the fiber path u(t) = phi(t, 1).  The left edge stays
// at the identity, the right edge stays at f(w(1)), so u represents a point
// in the fiber over w(1).
struct StringCD1 {
  PathMesh w;
  SquareMesh phi;

  void validate(const MapData& f, double bound = defaults::step_bound,
                double tol = defaults::mesh_tol) const;

  PathMesh fiber_path() const { return phi.line(0, phi.n2); }
  const Mat& endpoint() const { return w.samples.back(); }

  // Subsample both meshes; refinement is not offered here because fresh
  // samples of phi's bottom row would have to be recomputed through the map
  // to stay valid, so ladders are built by sampling at each resolution.
  StringCD1 coarsened(int factor) const;

  // The tautological string of a path: phi constant in s.
  static StringCD1 from_path(const MapData& f, const PathMesh& w);

  // Are two strings equal as meshes (same dims, samples within tol)?
  static bool same(const StringCD1& a, const StringCD1& b, double tol);
};

// A 1-parameter family of strings: h over the arena with axes (t1, s) and H
// over K with axes (t1, t2, s); slice(j) freezes s.  The family tier checks
// every slice is a valid string; the strict tier additionally asks the
// endpoint data (h right edge, H right face, H top face) to be constant in
// s.  Families that close up (first and last slice equal) measure holonomy
// even when they are not strict.
struct HomotopyCD11 {
  SquareMesh h;
  CubeMesh H;

  StringCD1 slice(int j) const;

  void validate_family(const MapData& f, double bound = defaults::step_bound,
                       double tol = defaults::mesh_tol) const;
  bool strict(double tol = defaults::mesh_tol) const;
  bool closed(double tol = defaults::mesh_tol) const;

  HomotopyCD11 coarsened(int factor) const;
};

}  // namespace holab
