#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "holab/error.hpp"
#include "holab/fd.hpp"
#include "holab/fiber.hpp"
#include "holab/fixtures.hpp"
#include "holab/quad.hpp"
#include "holab/rng.hpp"

using namespace holab;

namespace {

constexpr double pi = std::numbers::pi;

double order_of(const std::array<double, 3>& err) {
  // Least squares slope of log(err) against log(step) for halved steps.
  return std::log(err[0] / err[2]) / std::log(4.0);
}

}  // namespace

TEST_CASE("fiber points of strings") {
  const Group k = Group::su(2);
  const MapData f = fixtures::genus_map(k);

  SUBCASE("trivial string") {
    const PathMesh w = PathMesh::constant(f.arena, f.basepoint, 4);
    const StringCD1 s = StringCD1::from_path(f, w);
    const FiberPoint p = fiber_point(s, f);
    p.validate(f);
    CHECK((p.q - f.basepoint).norm() == 0.0);
    for (const Mat& g : p.u.samples) {
      CHECK((g - k.identity()).norm() <= 1e-14);
    }
  }

  SUBCASE("pushforward string") {
    Philox rng(11);
    const PathMesh w = PathMesh::geodesic(
        f.arena, f.basepoint, f.arena.random_element(rng, 0.4), 10);
    const StringCD1 s = StringCD1::from_path(f, w);
    const FiberPoint p = fiber_point(s, f);
    p.validate(f);
    CHECK((p.q - w.samples.back()).norm() == 0.0);
    for (int i = 0; i <= 10; ++i) {
      CHECK((p.u.at(i) - f.eval(w.at(i))).norm() <= 1e-13);
    }
  }

  SUBCASE("detoured string and tangent validation") {
    const StringCD1 s = fixtures::genus1_string(f, 8, 4, 0.7);
    const FiberPoint p = fiber_point(s, f);
    p.validate(f);

    Philox rng(12);
    FiberTangent t;
    t.v_q = f.arena.random_algebra(rng, 0.5);
    const Mat goal = word_omega(f.arena, f.word, p.q, t.v_q);
    t.V.resize(p.u.samples.size());
    for (std::size_t i = 0; i < t.V.size(); ++i) {
      const double x = static_cast<double>(i) / (t.V.size() - 1);
      t.V[i] = x * x * goal;
    }
    t.validate(f, p);

    FiberTangent bad = t;
    bad.V.back() = 2.0 * bad.V.back() + k.identity() * Cplx(0.0, 0.2);
    CHECK_THROWS_AS(bad.validate(f, p), Error);
  }
}

TEST_CASE("beta_lambda on analytic families") {
  const Group k = Group::su(2);
  const Mat e1 = su2_generator(1);
  const Mat e2 = su2_generator(2);
  const Mat e3 = su2_generator(3);

  SUBCASE("degenerate inputs vanish") {
    const PathMesh u = PathMesh::geodesic(k, k.identity(), k.exp(0.9 * e3), 6);
    SampleVec v(7), w(7);
    for (int i = 0; i <= 6; ++i) {
      const double t = i / 6.0;
      v[static_cast<std::size_t>(i)] = t * e1;
      w[static_cast<std::size_t>(i)] = t * e1;
    }
    CHECK(beta_lambda(u, v, v) == 0.0);
    CHECK(beta_lambda(u, v, w) == doctest::Approx(0.0).epsilon(1e-15));

    const PathMesh c = PathMesh::constant(k, k.exp(0.3 * e2), 5);
    SampleVec a(6, e1), b(6, e2);
    CHECK(beta_lambda(c, a, b) == 0.0);

    SampleVec shorter(5, e1);
    CHECK_THROWS_AS(beta_lambda(u, shorter, w), Error);
  }

  SUBCASE("exterior derivative hits the endpoint 3-form") {
    // Fields vanish at the start, so only the far endpoint contributes; the
    // finite-difference step and the mesh are refined together.
    const std::array<double, 3> steps = {4e-2, 2e-2, 1e-2};
    const std::array<int, 3> sizes = {8, 16, 32};
    std::array<double, 3> err{};
    for (int lvl = 0; lvl < 3; ++lvl) {
      const int n = sizes[static_cast<std::size_t>(lvl)];
      PathMesh u;
      u.group = k;
      u.samples.resize(static_cast<std::size_t>(n) + 1);
      SampleVec x(u.samples.size()), y(u.samples.size()), z(u.samples.size());
      for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const std::size_t ii = static_cast<std::size_t>(i);
        u.samples[ii] = k.exp(0.8 * t * e1) * k.exp(0.5 * t * t * e3);
        x[ii] = t * e1;
        y[ii] = t * t * e2;
        z[ii] = std::sin(0.5 * pi * t) * e3;
      }
      auto beta = [&k](const SampleVec& pts, const SampleVec& a,
                       const SampleVec& b) {
        PathMesh m;
        m.group = k;
        m.samples = pts;
        return beta_lambda(m, a, b);
      };
      const double lhs = fd_d2_samples(k, beta, u.samples, x, y, z,
                                       steps[static_cast<std::size_t>(lvl)]);
      const double rhs = k.cartan3(x.back(), y.back(), z.back());
      err[static_cast<std::size_t>(lvl)] = std::abs(lhs - rhs);
    }
    CHECK(err[2] < err[0]);
    CHECK(order_of(err) >= 1.0);
    CHECK(err[2] <= 1e-4);
  }
}

TEST_CASE("zeta_fiber closedness") {
  const Group k = Group::su(2);
  const MapData f = fixtures::genus_map(k);
  const Group& arena = f.arena;

  SUBCASE("degenerate and reduced cases") {
    const fixtures::CurvatureProbe probe = fixtures::curvature_probe(k, 5);
    CHECK(std::abs(zeta_fiber(f, probe.p, probe.t1, probe.t1)) <= 1e-15);
    const double ab = zeta_fiber(f, probe.p, probe.t1, probe.t2);
    const double ba = zeta_fiber(f, probe.p, probe.t2, probe.t1);
    CHECK(ab == doctest::Approx(-ba).epsilon(1e-12));

    // With no base movement and fields away from the endpoint only the path
    // pairing remains.
    FiberTangent ta, tb;
    ta.v_q = Mat::Zero(arena.matrix_size(), arena.matrix_size());
    tb.v_q = ta.v_q;
    ta.V.resize(probe.p.u.samples.size());
    tb.V.resize(probe.p.u.samples.size());
    for (std::size_t i = 0; i < ta.V.size(); ++i) {
      const double t = static_cast<double>(i) / (ta.V.size() - 1);
      const double c = std::sin(pi * t);
      ta.V[i] = c * c * su2_generator(1);
      tb.V[i] = c * c * su2_generator(2);
    }
    CHECK(zeta_fiber(f, probe.p, ta, tb) ==
          doctest::Approx(beta_lambda(probe.p.u, ta.V, tb.V)).epsilon(1e-14));
  }

  SUBCASE("finite-difference exterior derivative vanishes on fiber tangents") {
    struct Point {
      Mat q;
      SampleVec u;
    };
    struct Tan {
      Mat v;
      SampleVec V;
    };
    const std::array<double, 3> steps = {1e-2, 5e-3, 2.5e-3};
    const std::array<int, 3> sizes = {8, 16, 32};
    std::array<double, 3> err{};
    for (int lvl = 0; lvl < 3; ++lvl) {
      const int n = sizes[static_cast<std::size_t>(lvl)];
      Philox rng(31);
      const Mat y0 = k.random_algebra(rng, 0.4);
      Point p;
      p.q = f.basepoint;
      p.u.resize(static_cast<std::size_t>(n) + 1);
      for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double c = std::sin(pi * t);
        p.u[static_cast<std::size_t>(i)] = k.exp(c * c * y0);
      }
      auto tangent = [&](const Mat& vq, const Mat& wiggle) {
        Tan t;
        t.v = vq;
        const Mat goal = word_omega(arena, f.word, p.q, vq);
        t.V.resize(p.u.size());
        for (std::size_t i = 0; i < t.V.size(); ++i) {
          const double x = static_cast<double>(i) / (t.V.size() - 1);
          const double c = std::sin(pi * x);
          t.V[i] = c * c * wiggle + x * x * (3.0 - 2.0 * x) * goal;
        }
        return t;
      };
      const Tan t1 =
          tangent(arena.random_algebra(rng, 0.5), k.random_algebra(rng, 0.4));
      const Tan t2 =
          tangent(arena.random_algebra(rng, 0.5), k.random_algebra(rng, 0.4));
      const Tan t3 =
          tangent(arena.random_algebra(rng, 0.5), k.random_algebra(rng, 0.4));

      auto shift = [&](const Point& pt, double t, const Tan& dir) {
        Point out;
        out.q = pt.q * arena.exp(t * dir.v);
        out.u = sample_shift(k, pt.u, t, dir.V);
        return out;
      };
      auto bracket = [](const Tan& a, const Tan& b) {
        return Tan{Group::bracket(a.v, b.v), sample_bracket(a.V, b.V)};
      };
      auto form = [&](const Point& pt, const Tan& a, const Tan& b) {
        PathMesh u;
        u.group = k;
        u.samples = pt.u;
        const FiberPoint fp{pt.q, std::move(u)};
        return zeta_fiber(f, fp, FiberTangent{a.v, a.V},
                          FiberTangent{b.v, b.V});
      };
      err[static_cast<std::size_t>(lvl)] =
          std::abs(fd_d2_frame(shift, bracket, form, p, t1, t2, t3,
                               steps[static_cast<std::size_t>(lvl)]));
    }
    CHECK(err[2] < err[0]);
    CHECK(order_of(err) >= 1.0);
  }
}

TEST_CASE("holonomy of families") {
  const Group k = Group::su(2);
  const MapData f = fixtures::genus_map(k);

  SUBCASE("constant family") {
    const StringCD1 s = fixtures::genus1_string(f, 8, 8, 0.5);
    const Holonomy hol = holonomy(fixtures::interp_family(s, s, 8), f);
    CHECK(hol.area == 0.0);
    CHECK(hol.fit.value == 0.0);
    CHECK(hol.circle.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hol.circle.imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(hol.closed);
    CHECK(hol.strict);
    CHECK(hol.snap.ok);
    CHECK(hol.snap.value == 0);
  }

  SUBCASE("reversal conjugates") {
    const StringCD1 s0 = fixtures::genus1_string(f, 8, 8, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 8, 8, 0.8);
    const HomotopyCD11 fam = fixtures::interp_family(s0, s1, 8);
    const Holonomy a = holonomy(fam, f);
    const Holonomy b = holonomy(fixtures::reversed_family(fam), f);
    CHECK(std::abs(a.area + b.area) <= 1e-12);
    CHECK(std::abs(a.fit.value + b.fit.value) <= 1e-10);
    CHECK(std::abs(a.circle - std::conj(b.circle)) <= 1e-9);
    CHECK_FALSE(a.closed);
  }

  SUBCASE("stacking adds exponents") {
    const StringCD1 s0 = fixtures::genus1_string(f, 8, 8, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 8, 8, 0.5);
    const StringCD1 s2 = fixtures::genus1_string(f, 8, 8, 0.9);
    const HomotopyCD11 ab = fixtures::interp_family(s0, s1, 8);
    const HomotopyCD11 bc = fixtures::interp_family(s1, s2, 8);
    const HomotopyCD11 whole = stack(ab, bc);
    const double lhs = holonomy(whole, f).area;
    const double rhs = holonomy(ab, f).area + holonomy(bc, f).area;
    CHECK(std::abs(lhs - rhs) <= 1e-12);

    CHECK_THROWS_AS(stack(ab, fixtures::interp_family(s0, s2, 8)), Error);
  }

  SUBCASE("conjugating all data preserves the exponent") {
    const StringCD1 s0 = fixtures::genus1_string(f, 8, 8, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 8, 8, 0.8);
    const HomotopyCD11 fam = fixtures::interp_family(s0, s1, 8);
    Philox rng(21);
    const Mat g = k.random_element(rng, 0.6);
    const Holonomy a = holonomy(fam, f);
    const Holonomy b = holonomy(fixtures::conjugated_family(fam, f.arena, g), f);
    CHECK(std::abs(a.area - b.area) <= 1e-10);
    CHECK(std::abs(a.fit.value - b.fit.value) <= 1e-10);
  }

  SUBCASE("two homotopies between the same strings differ by a unit") {
    const StringCD1 s0 = fixtures::genus1_string(f, 32, 32, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 32, 32, 0.8);
    const HomotopyCD11 plain = fixtures::interp_family(s0, s1, 32);
    const HomotopyCD11 wrapped = fixtures::bump_family(plain);
    const Holonomy a = holonomy(plain, f, {}, 4);
    const Holonomy b = holonomy(wrapped, f, {}, 4);
    const double gap = b.fit.value - a.fit.value;
    CHECK(std::abs(gap - std::llround(gap)) <= 1e-2);
    CHECK(std::abs(std::llround(gap)) == 1);
  }
}

TEST_CASE("curvature of small rectangular loops") {
  const Group k = Group::su(2);
  const fixtures::CurvatureProbe probe = fixtures::curvature_probe(k, 71);
  const double ref = probe.reference();
  CHECK(std::abs(ref) > 1e-4);

  const std::array<double, 3> eps = {0.2, 0.1, 0.05};
  std::array<double, 3> err{};
  for (int lvl = 0; lvl < 3; ++lvl) {
    const double e = eps[static_cast<std::size_t>(lvl)];
    const Holonomy hol = holonomy(probe.loop(e), probe.f);
    err[static_cast<std::size_t>(lvl)] =
        std::abs(hol.fit.value / (e * e) - ref);
  }
  CHECK(order_of(err) >= 1.0);
  CHECK(err[2] <= 0.05 * std::abs(ref));
}

TEST_CASE("relative periods") {
  SUBCASE("constant data snaps to zero") {
    const Group k = Group::su(2);
    const MapData f = fixtures::genus_map(k);
    const SquareMesh h = SquareMesh::from_function(
        f.arena, 4, 4, [&](double, double) -> Mat { return f.basepoint; });
    const CubeMesh cube = CubeMesh::from_function(
        k, 4, 4, 4, [&](double, double, double) -> Mat {
          return k.identity();
        });
    const RelPeriod r = relative_period(h, cube, f);
    CHECK(r.raw == 0.0);
    CHECK(r.snap.ok);
    CHECK(r.snap.value == 0);
  }

  SUBCASE("suspended unit chart has a unit period") {
    const Group k = Group::su(2, 1.0 / (pi * pi));
    const double rho = 0.5 * pi;
    const ClassForm cls{k, k.exp(rho * su2_generator(3))};
    const SquareMesh h = fixtures::class_chart(k, rho, 32);
    const CubeMesh cube = fixtures::class_suspension(k, rho, 32);
    const RelPeriod r = relative_period(h, cube, cls, 4);
    CHECK(r.snap.ok);
    CHECK(std::llabs(r.snap.value) == 1);
    CHECK(r.snap.defect <= 1e-2);

    // Halving the metric scale halves the value and breaks integrality.
    const Group k2 = Group::su(2, 0.5 / (pi * pi));
    const ClassForm cls2{k2, k2.exp(rho * su2_generator(3))};
    const SquareMesh h2 = fixtures::class_chart(k2, rho, 32);
    const CubeMesh cube2 = fixtures::class_suspension(k2, rho, 32);
    const RelPeriod r2 = relative_period(h2, cube2, cls2, 4);
    CHECK_FALSE(r2.snap.ok);
    CHECK(r2.fit.value == doctest::Approx(0.5 * r.fit.value).epsilon(1e-6));
  }

  SUBCASE("period grows linearly in the class parameter") {
    const Group k = Group::su(2, 1.0 / (pi * pi));
    const double c = k.metric_scale;
    for (const double rho : {0.4 * pi, 0.7 * pi}) {
      const ClassForm cls{k, k.exp(rho * su2_generator(3))};
      const SquareMesh h = fixtures::class_chart(k, rho, 32);
      const CubeMesh cube = fixtures::class_suspension(k, rho, 32);
      const RelPeriod r = relative_period(h, cube, cls, 4);
      CHECK(std::abs(std::abs(r.fit.value) - 2.0 * pi * c * rho) <= 5e-3);
    }
  }

  SUBCASE("boundary violations are rejected") {
    const Group k = Group::su(2);
    const double rho = 0.5 * pi;
    const ClassForm cls{k, k.exp(rho * su2_generator(3))};
    const SquareMesh h = fixtures::class_chart(k, rho, 8);
    CubeMesh cube = fixtures::class_suspension(k, rho, 8);
    cube.at(3, 2, 0) = k.exp(0.4 * su2_generator(1));
    CHECK_THROWS_AS(relative_period(h, cube, cls), Error);
  }
}

TEST_CASE("juxtaposition with loop-strings") {
  const Group k = Group::su(2);
  const MapData f = fixtures::genus_map(k);
  const StringCD1 s = fixtures::genus1_string(f, 8, 4, 0.6);

  auto loop_string = [&](double spread, std::uint64_t seed) {
    Philox rng(seed);
    const Mat x = f.arena.random_algebra(rng, spread);
    PathMesh w;
    w.group = f.arena;
    w.samples.resize(9);
    for (int i = 0; i <= 8; ++i) {
      const double t = i / 8.0;
      const double c = std::sin(pi * t);
      w.samples[static_cast<std::size_t>(i)] = f.arena.exp(c * c * x);
    }
    PathMesh bottom;
    bottom.group = k;
    bottom.samples.resize(9);
    for (int i = 0; i <= 8; ++i) {
      bottom.samples[static_cast<std::size_t>(i)] = f.eval(w.at(i));
    }
    const PathMesh top = PathMesh::constant(k, k.identity(), 8);
    return StringCD1{w, SquareMesh::geodesic_sweep(bottom, top, 4)};
  };

  SUBCASE("fiber point persists bitwise past the seam") {
    const StringCD1 loop = loop_string(0.45, 3);
    const StringCD1 glued = juxtapose(s, loop, f);
    glued.validate(f);
    const FiberPoint before = fiber_point(s, f);
    const FiberPoint after = fiber_point(glued, f);
    CHECK((after.q - before.q).norm() == 0.0);
    const int offset = loop.w.intervals();
    REQUIRE(after.u.samples.size() ==
            before.u.samples.size() + static_cast<std::size_t>(offset));
    for (std::size_t i = 0; i < before.u.samples.size(); ++i) {
      CHECK((after.u.samples[i + static_cast<std::size_t>(offset)] -
             before.u.samples[i])
                .norm() == 0.0);
    }
    CHECK(glued.w.seams == std::vector<int>{offset});
  }

  SUBCASE("square integrals add over the seam") {
    const StringCD1 loop = loop_string(0.45, 3);
    const StringCD1 glued = juxtapose(s, loop, f);
    const Form2 test_form = [&k](const Mat& g, const Mat& v, const Mat& w) {
      return k.inner(v, Group::Ad(g, w));
    };
    const double whole = integrate_2form(glued.phi, test_form);
    const double parts =
        integrate_2form(loop.phi, test_form) + integrate_2form(s.phi, test_form);
    CHECK(std::abs(whole - parts) <= 1e-12);
  }

  SUBCASE("constant loop-string changes nothing") {
    const PathMesh cw = PathMesh::constant(f.arena, f.basepoint, 4);
    StringCD1 cloop = StringCD1::from_path(f, cw);
    // Widen the interpolation axis to match s.
    cloop.phi = SquareMesh::from_function(
        k, 4, 4, [&](double, double) -> Mat { return k.identity(); });
    const StringCD1 glued = juxtapose(s, cloop, f);
    const Form2 test_form = [&k](const Mat& g, const Mat& v, const Mat& w) {
      return k.inner(v, Group::Ad(g, w));
    };
    CHECK(integrate_2form(glued.phi, test_form) ==
          doctest::Approx(integrate_2form(s.phi, test_form)).epsilon(1e-14));
    const FiberPoint before = fiber_point(s, f);
    const FiberPoint after = fiber_point(glued, f);
    CHECK((after.q - before.q).norm() == 0.0);
    CHECK((after.u.samples.back() - before.u.samples.back()).norm() == 0.0);
  }

  SUBCASE("juxtaposition associates") {
    const StringCD1 l1 = loop_string(0.45, 3);
    const StringCD1 l2 = loop_string(0.3, 4);
    const StringCD1 left = juxtapose(juxtapose(s, l1, f), l2, f);
    const StringCD1 right = juxtapose(s, juxtapose(l1, l2, f), f);
    REQUIRE(left.w.samples.size() == right.w.samples.size());
    for (std::size_t i = 0; i < left.w.samples.size(); ++i) {
      CHECK((left.w.samples[i] - right.w.samples[i]).norm() == 0.0);
    }
    const Form2 test_form = [&k](const Mat& g, const Mat& v, const Mat& w) {
      return k.inner(v, Group::Ad(g, w));
    };
    CHECK(std::abs(integrate_2form(left.phi, test_form) -
                   integrate_2form(right.phi, test_form)) <= 1e-10);
    const FiberPoint a = fiber_point(left, f);
    const FiberPoint b = fiber_point(right, f);
    CHECK((a.q - b.q).norm() == 0.0);
    REQUIRE(a.u.samples.size() == b.u.samples.size());
    for (std::size_t i = 0; i < a.u.samples.size(); ++i) {
      CHECK((a.u.samples[i] - b.u.samples[i]).norm() == 0.0);
    }
  }

  SUBCASE("non-loops are rejected") {
    CHECK_THROWS_AS(juxtapose(s, s, f), Error);
  }
}
