#include "holab/mesh.hpp"

#include <cmath>
#include <cstddef>

#include <fmt/format.h>

#include "holab/error.hpp"

namespace holab {

namespace {

void check_seams(const std::vector<int>& seams, int n, const char* axis) {
  int prev = 0;
  for (int s : seams) {
    if (s <= prev || s >= n) {
      throw Error(ErrorKind::mesh,
                  fmt::format("seam {} out of order or outside (0, {}) on the "
                              "{} axis",
                              s, n, axis));
    }
    prev = s;
  }
}

void check_step(const Group& g, const Mat& a, const Mat& b, double bound,
                const char* where, int i, int j, int k) {
  if (!g.step_ok(a, b, bound)) {
    throw Error(ErrorKind::mesh,
                fmt::format("step at ({}, {}, {}) along {} exceeds the bound "
                            "{:.4f} (angle {:.4f})",
                            i, j, k, where, bound, g.step_angle(a, b)));
  }
}

void check_member(const Group& g, const Mat& m, double tol, int i, int j,
                  int k) {
  if (!g.is_member(m, tol)) {
    throw Error(
        ErrorKind::mesh,
        fmt::format("sample at ({}, {}, {}) is not a group element", i, j, k));
  }
}

std::vector<int> scaled_seams(const std::vector<int>& seams, int factor) {
  std::vector<int> out;
  out.reserve(seams.size());
  for (int s : seams) out.push_back(s * factor);
  return out;
}

std::vector<int> divided_seams(const std::vector<int>& seams, int factor,
                               const char* axis) {
  std::vector<int> out;
  out.reserve(seams.size());
  for (int s : seams) {
    if (s % factor != 0) {
      throw Error(ErrorKind::mesh,
                  fmt::format("seam {} on the {} axis does not divide by the "
                              "coarsening factor {}",
                              s, axis, factor));
    }
    out.push_back(s / factor);
  }
  return out;
}

void check_factor(int factor) {
  if (factor < 1) {
    throw Error(ErrorKind::mesh,
                fmt::format("mesh factor must be positive, got {}", factor));
  }
}

void check_divides(int n, int factor, const char* axis) {
  if (n % factor != 0 || n / factor < 1) {
    throw Error(ErrorKind::mesh,
                fmt::format("{} intervals on the {} axis do not divide by the "
                            "coarsening factor {}",
                            n, axis, factor));
  }
}

// Geodesic points strictly between a and b: a exp(r/factor log(a^-1 b)).
std::vector<Mat> interior_points(const Group& g, const Mat& a, const Mat& b,
                                 int factor) {
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(factor - 1));
  const Mat l = g.log(g.inverse(a) * b);
  for (int r = 1; r < factor; ++r) {
    out.push_back(a * g.exp((static_cast<double>(r) / factor) * l));
  }
  return out;
}

}  // namespace

void PathMesh::validate(double bound, double tol) const {
  const int n = intervals();
  if (n < 1) {
    throw Error(ErrorKind::mesh, "a path mesh needs at least two samples");
  }
  check_seams(seams, n, "t");
  for (int i = 0; i <= n; ++i) check_member(group, at(i), tol, i, 0, 0);
  for (int i = 0; i < n; ++i) {
    check_step(group, at(i), at(i + 1), bound, "t", i, 0, 0);
  }
}

PathMesh PathMesh::refined(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  const int n = intervals();
  PathMesh out{group, {}, scaled_seams(seams, factor)};
  out.samples.reserve(static_cast<std::size_t>(n * factor + 1));
  for (int i = 0; i < n; ++i) {
    out.samples.push_back(at(i));
    for (Mat& m : interior_points(group, at(i), at(i + 1), factor)) {
      out.samples.push_back(std::move(m));
    }
  }
  out.samples.push_back(samples.back());
  return out;
}

PathMesh PathMesh::coarsened(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  const int n = intervals();
  check_divides(n, factor, "t");
  PathMesh out{group, {}, divided_seams(seams, factor, "t")};
  out.samples.reserve(static_cast<std::size_t>(n / factor + 1));
  for (int i = 0; i <= n; i += factor) out.samples.push_back(at(i));
  return out;
}

PathMesh PathMesh::geodesic(const Group& g, const Mat& a, const Mat& b,
                            int n) {
  const Mat l = g.log(g.inverse(a) * b);
  PathMesh out{g, {}, {}};
  out.samples.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    out.samples.push_back(a * g.exp((static_cast<double>(i) / n) * l));
  }
  return out;
}

PathMesh PathMesh::constant(const Group& g, const Mat& a, int n) {
  PathMesh out{g, {}, {}};
  out.samples.assign(static_cast<std::size_t>(n + 1), a);
  return out;
}

PathMesh PathMesh::from_function(const Group& g, int n,
                                 const std::function<Mat(double)>& f) {
  PathMesh out{g, {}, {}};
  out.samples.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    out.samples.push_back(f(static_cast<double>(i) / n));
  }
  return out;
}

void SquareMesh::validate(double bound, double tol) const {
  if (n1 < 1 || n2 < 1 ||
      samples.size() != static_cast<std::size_t>((n1 + 1) * (n2 + 1))) {
    throw Error(ErrorKind::mesh, "square mesh dims do not match its samples");
  }
  check_seams(seams[0], n1, "t");
  check_seams(seams[1], n2, "s");
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) check_member(group, at(i, j), tol, i, j, 0);
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      check_step(group, at(i, j), at(i + 1, j), bound, "t", i, j, 0);
    }
  }
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      check_step(group, at(i, j), at(i, j + 1), bound, "s", i, j, 0);
    }
  }
}

SquareMesh SquareMesh::refined(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  // First axis, then second; interior points of a refined row interpolate
  // already refined columns, which keeps the original samples in place.
  SquareMesh mid{group, n1 * factor, n2, {},
                 {scaled_seams(seams[0], factor), seams[1]}};
  mid.samples.resize(static_cast<std::size_t>((mid.n1 + 1) * (n2 + 1)));
  for (int j = 0; j <= n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      mid.at(i * factor, j) = at(i, j);
      auto pts = interior_points(group, at(i, j), at(i + 1, j), factor);
      for (int r = 1; r < factor; ++r) {
        mid.at(i * factor + r, j) = std::move(pts[static_cast<std::size_t>(r - 1)]);
      }
    }
    mid.at(mid.n1, j) = at(n1, j);
  }
  SquareMesh out{group, mid.n1, n2 * factor, {},
                 {mid.seams[0], scaled_seams(seams[1], factor)}};
  out.samples.resize(static_cast<std::size_t>((out.n1 + 1) * (out.n2 + 1)));
  for (int i = 0; i <= out.n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      out.at(i, j * factor) = mid.at(i, j);
      auto pts = interior_points(group, mid.at(i, j), mid.at(i, j + 1), factor);
      for (int r = 1; r < factor; ++r) {
        out.at(i, j * factor + r) = std::move(pts[static_cast<std::size_t>(r - 1)]);
      }
    }
    out.at(i, out.n2) = mid.at(i, n2);
  }
  return out;
}

SquareMesh SquareMesh::coarsened(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  check_divides(n1, factor, "t");
  check_divides(n2, factor, "s");
  SquareMesh out{group, n1 / factor, n2 / factor, {},
                 {divided_seams(seams[0], factor, "t"),
                  divided_seams(seams[1], factor, "s")}};
  out.samples.reserve(
      static_cast<std::size_t>((out.n1 + 1) * (out.n2 + 1)));
  for (int i = 0; i <= n1; i += factor) {
    for (int j = 0; j <= n2; j += factor) out.samples.push_back(at(i, j));
  }
  return out;
}

PathMesh SquareMesh::line(int axis, int fixed) const {
  PathMesh out{group, {}, seams[axis == 0 ? 0 : 1]};
  if (axis == 0) {
    out.samples.reserve(static_cast<std::size_t>(n1 + 1));
    for (int i = 0; i <= n1; ++i) out.samples.push_back(at(i, fixed));
  } else {
    out.samples.reserve(static_cast<std::size_t>(n2 + 1));
    for (int j = 0; j <= n2; ++j) out.samples.push_back(at(fixed, j));
  }
  return out;
}

SquareMesh SquareMesh::from_function(
    const Group& g, int n1, int n2,
    const std::function<Mat(double, double)>& f) {
  SquareMesh out{g, n1, n2, {}, {}};
  out.samples.reserve(static_cast<std::size_t>((n1 + 1) * (n2 + 1)));
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      out.samples.push_back(
          f(static_cast<double>(i) / n1, static_cast<double>(j) / n2));
    }
  }
  return out;
}

SquareMesh SquareMesh::geodesic_sweep(const PathMesh& bottom,
                                      const PathMesh& top, int n2) {
  if (bottom.intervals() != top.intervals()) {
    throw Error(ErrorKind::mesh,
                "geodesic sweep needs paths with matching intervals");
  }
  const Group& g = bottom.group;
  const int n1 = bottom.intervals();
  SquareMesh out{g, n1, n2, {}, {bottom.seams, {}}};
  out.samples.resize(static_cast<std::size_t>((n1 + 1) * (n2 + 1)));
  for (int i = 0; i <= n1; ++i) {
    const Mat l = g.log(g.inverse(bottom.at(i)) * top.at(i));
    out.at(i, 0) = bottom.at(i);
    for (int j = 1; j < n2; ++j) {
      out.at(i, j) =
          bottom.at(i) * g.exp((static_cast<double>(j) / n2) * l);
    }
    out.at(i, n2) = top.at(i);
  }
  return out;
}

void CubeMesh::validate(double bound, double tol) const {
  if (n1 < 1 || n2 < 1 || n3 < 1 ||
      samples.size() !=
          static_cast<std::size_t>((n1 + 1) * (n2 + 1) * (n3 + 1))) {
    throw Error(ErrorKind::mesh, "cube mesh dims do not match its samples");
  }
  check_seams(seams[0], n1, "t1");
  check_seams(seams[1], n2, "t2");
  check_seams(seams[2], n3, "s");
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      for (int k = 0; k <= n3; ++k) {
        check_member(group, at(i, j, k), tol, i, j, k);
      }
    }
  }
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      for (int k = 0; k <= n3; ++k) {
        if (i < n1) {
          check_step(group, at(i, j, k), at(i + 1, j, k), bound, "t1", i, j, k);
        }
        if (j < n2) {
          check_step(group, at(i, j, k), at(i, j + 1, k), bound, "t2", i, j, k);
        }
        if (k < n3) {
          check_step(group, at(i, j, k), at(i, j, k + 1), bound, "s", i, j, k);
        }
      }
    }
  }
}

CubeMesh CubeMesh::refined(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  auto pass = [this, factor](const CubeMesh& in, int axis) {
    CubeMesh out = in;
    out.seams[static_cast<std::size_t>(axis)] =
        scaled_seams(in.seams[static_cast<std::size_t>(axis)], factor);
    (axis == 0 ? out.n1 : axis == 1 ? out.n2 : out.n3) *= factor;
    out.samples.assign(
        static_cast<std::size_t>((out.n1 + 1) * (out.n2 + 1) * (out.n3 + 1)),
        Mat());
    for (int i = 0; i <= out.n1; ++i) {
      for (int j = 0; j <= out.n2; ++j) {
        for (int k = 0; k <= out.n3; ++k) {
          const int along = axis == 0 ? i : axis == 1 ? j : k;
          const int base = along / factor;
          const int r = along % factor;
          auto orig = [&](int b) {
            return axis == 0 ? in.at(b, j, k)
                 : axis == 1 ? in.at(i, b, k)
                             : in.at(i, j, b);
          };
          if (r == 0) {
            out.at(i, j, k) = orig(base);
          } else {
            const Mat a = orig(base);
            const Mat l = group.log(group.inverse(a) * orig(base + 1));
            out.at(i, j, k) =
                a * group.exp((static_cast<double>(r) / factor) * l);
          }
        }
      }
    }
    return out;
  };
  return pass(pass(pass(*this, 0), 1), 2);
}

CubeMesh CubeMesh::coarsened(int factor) const {
  check_factor(factor);
  if (factor == 1) return *this;
  check_divides(n1, factor, "t1");
  check_divides(n2, factor, "t2");
  check_divides(n3, factor, "s");
  CubeMesh out{group,
               n1 / factor,
               n2 / factor,
               n3 / factor,
               {},
               {divided_seams(seams[0], factor, "t1"),
                divided_seams(seams[1], factor, "t2"),
                divided_seams(seams[2], factor, "s")}};
  out.samples.reserve(
      static_cast<std::size_t>((out.n1 + 1) * (out.n2 + 1) * (out.n3 + 1)));
  for (int i = 0; i <= n1; i += factor) {
    for (int j = 0; j <= n2; j += factor) {
      for (int k = 0; k <= n3; k += factor) out.samples.push_back(at(i, j, k));
    }
  }
  return out;
}

SquareMesh CubeMesh::face(int axis, int fixed) const {
  SquareMesh out{group, 0, 0, {}, {}};
  if (axis == 0) {
    out.n1 = n2;
    out.n2 = n3;
    out.seams = {seams[1], seams[2]};
  } else if (axis == 1) {
    out.n1 = n1;
    out.n2 = n3;
    out.seams = {seams[0], seams[2]};
  } else {
    out.n1 = n1;
    out.n2 = n2;
    out.seams = {seams[0], seams[1]};
  }
  out.samples.reserve(static_cast<std::size_t>((out.n1 + 1) * (out.n2 + 1)));
  for (int a = 0; a <= out.n1; ++a) {
    for (int b = 0; b <= out.n2; ++b) {
      out.samples.push_back(axis == 0   ? at(fixed, a, b)
                            : axis == 1 ? at(a, fixed, b)
                                        : at(a, b, fixed));
    }
  }
  return out;
}

CubeMesh CubeMesh::from_function(
    const Group& g, int n1, int n2, int n3,
    const std::function<Mat(double, double, double)>& f) {
  CubeMesh out{g, n1, n2, n3, {}, {}};
  out.samples.reserve(
      static_cast<std::size_t>((n1 + 1) * (n2 + 1) * (n3 + 1)));
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      for (int k = 0; k <= n3; ++k) {
        out.samples.push_back(f(static_cast<double>(i) / n1,
                                static_cast<double>(j) / n2,
                                static_cast<double>(k) / n3));
      }
    }
  }
  return out;
}

void MapData::validate(double tol) const {
  if (word.num_letters() > arena.power) {
    throw Error(ErrorKind::validation,
                fmt::format("word uses {} letters but the arena has {} slots",
                            word.num_letters(), arena.power));
  }
  if (!arena.is_member(basepoint, tol)) {
    throw Error(ErrorKind::validation, "basepoint is not in the arena");
  }
  const Group k = arena.block();
  if ((eval(basepoint) - k.identity()).norm() > tol) {
    throw Error(ErrorKind::validation,
                "the word does not send the basepoint to the identity");
  }
}

void StringCD1::validate(const MapData& f, double bound, double tol) const {
  if (w.group.family != f.arena.family || w.group.n != f.arena.n ||
      w.group.power != f.arena.power) {
    throw Error(ErrorKind::validation, "string path lives in the wrong arena");
  }
  const Group k = f.arena.block();
  if (phi.group.family != k.family || phi.group.n != k.n) {
    throw Error(ErrorKind::validation,
                "string square lives in the wrong group");
  }
  w.validate(bound, tol);
  phi.validate(bound, tol);
  if (phi.n1 != w.intervals()) {
    throw Error(ErrorKind::mesh,
                fmt::format("string square has {} t intervals but the path "
                            "has {}",
                            phi.n1, w.intervals()));
  }
  if ((w.at(0) - f.basepoint).norm() > tol) {
    throw Error(ErrorKind::validation,
                "string path does not start at the basepoint");
  }
  for (int i = 0; i <= phi.n1; ++i) {
    if ((phi.at(i, 0) - f.eval(w.at(i))).norm() > tol) {
      throw Error(ErrorKind::validation,
                  fmt::format("string square does not start on the pushed "
                              "forward path at t index {}",
                              i));
    }
  }
  const Mat e = k.identity();
  for (int j = 0; j <= phi.n2; ++j) {
    if ((phi.at(0, j) - e).norm() > tol) {
      throw Error(ErrorKind::validation,
                  fmt::format("string square leaves the identity on the left "
                              "edge at s index {}",
                              j));
    }
    if ((phi.at(phi.n1, j) - phi.at(phi.n1, 0)).norm() > tol) {
      throw Error(ErrorKind::validation,
                  fmt::format("string square right edge moves at s index {}",
                              j));
    }
  }
}

StringCD1 StringCD1::coarsened(int factor) const {
  return {w.coarsened(factor), phi.coarsened(factor)};
}

StringCD1 StringCD1::from_path(const MapData& f, const PathMesh& w) {
  SquareMesh phi{f.arena.block(), w.intervals(), 1, {}, {w.seams, {}}};
  phi.samples.resize(static_cast<std::size_t>((phi.n1 + 1) * 2));
  for (int i = 0; i <= phi.n1; ++i) {
    const Mat v = f.eval(w.at(i));
    phi.at(i, 0) = v;
    phi.at(i, 1) = v;
  }
  return {w, phi};
}

bool StringCD1::same(const StringCD1& a, const StringCD1& b, double tol) {
  if (a.w.intervals() != b.w.intervals() || a.phi.n1 != b.phi.n1 ||
      a.phi.n2 != b.phi.n2) {
    return false;
  }
  for (std::size_t i = 0; i < a.w.samples.size(); ++i) {
    if ((a.w.samples[i] - b.w.samples[i]).norm() > tol) return false;
  }
  for (std::size_t i = 0; i < a.phi.samples.size(); ++i) {
    if ((a.phi.samples[i] - b.phi.samples[i]).norm() > tol) return false;
  }
  return true;
}

StringCD1 HomotopyCD11::slice(int j) const {
  return {h.line(0, j), H.face(2, j)};
}

void HomotopyCD11::validate_family(const MapData& f, double bound,
                                   double tol) const {
  if (H.n1 != h.n1 || H.n3 != h.n2) {
    throw Error(ErrorKind::mesh,
                "homotopy meshes disagree on the shared t1 or s axis");
  }
  for (int j = 0; j <= h.n2; ++j) slice(j).validate(f, bound, tol);
}

bool HomotopyCD11::strict(double tol) const {
  for (int j = 0; j <= h.n2; ++j) {
    if ((h.at(h.n1, j) - h.at(h.n1, 0)).norm() > tol) return false;
  }
  for (int j = 0; j <= H.n2; ++j) {
    for (int k = 0; k <= H.n3; ++k) {
      if ((H.at(H.n1, j, k) - H.at(H.n1, j, 0)).norm() > tol) return false;
    }
  }
  for (int i = 0; i <= H.n1; ++i) {
    for (int k = 0; k <= H.n3; ++k) {
      if ((H.at(i, H.n2, k) - H.at(i, H.n2, 0)).norm() > tol) return false;
    }
  }
  return true;
}

bool HomotopyCD11::closed(double tol) const {
  return StringCD1::same(slice(0), slice(h.n2), tol);
}

HomotopyCD11 HomotopyCD11::coarsened(int factor) const {
  return {h.coarsened(factor), H.coarsened(factor)};
}

}  // namespace holab
