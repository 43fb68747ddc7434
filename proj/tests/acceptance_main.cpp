// Acceptance harness: nine end-to-end checks with pinned tolerances and one
// verdict line each.  Run with no arguments for the full battery or with
// --only N for a single check.  Exit code 0 means every selected check
// passed, 1 means at least one failed, 2 means the arguments were malformed.

#include <array>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "holab/error.hpp"
#include "holab/fd.hpp"
#include "holab/fiber.hpp"
#include "holab/fixtures.hpp"
#include "holab/moment.hpp"
#include "holab/quad.hpp"
#include "holab/report.hpp"
#include "holab/rng.hpp"
#include "holab/words.hpp"

using namespace holab;

namespace {

constexpr std::uint64_t seed = 2026;

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Slope of log(err) against log(step) for step halvings.
double order_of(const std::array<double, 3>& err) {
  return std::log(err[0] / err[2]) / std::log(4.0);
}

// 1. The invariant volume of the block group, integrated over a one-cell
//    chart ladder and extrapolated, snaps to the unit with a small defect.
Verdict criterion_volume() {
  const Group k = Group::su(2);
  const Form3 lam = [&k](const Mat&, const Mat& a, const Mat& b,
                         const Mat& c) { return k.cartan3(a, b, c); };
  const std::array<int, 3> ns{32, 64, 96};
  std::array<double, 3> vals{};
  for (int i = 0; i < 3; ++i) {
    const CubeMesh cube =
        fixtures::euler_cube(k, ns[static_cast<std::size_t>(i)]);
    vals[static_cast<std::size_t>(i)] = integrate_3form(cube, lam, 4);
  }
  const Richardson fit = richardson(vals, ns);
  const Snap snap = integer_snap(fit.value, 1e-2);
  const bool pass =
      snap.ok && snap.value == 1 && (fit.order_ok || fit.exact);
  return {pass, fmt::format("value {:.9f}, snap defect {:.2e} (tol 1e-02)",
                            fit.value, snap.defect)};
}

// 2. The pulled back cocycle differentiates to the word two-form: the finite
//    difference residual of the seeded tuples decays with order at least one
//    and lands below 1e-4, for the genus one and genus two relators.
Verdict criterion_cocycle() {
  const std::array<double, 3> steps{1e-2, 5e-3, 2.5e-3};
  bool pass = true;
  std::string detail;
  for (int genus = 1; genus <= 2; ++genus) {
    const MapData f = fixtures::genus_map(Group::su(2), genus);
    const Group& arena = f.arena;
    Philox rng(seed, 10 + static_cast<std::uint64_t>(genus));
    struct Sample {
      Mat q, v1, v2, v3;
    };
    std::vector<Sample> samples;
    for (int i = 0; i < 10; ++i) {
      Sample s;
      s.q = arena.random_element(rng, 0.5);
      s.v1 = arena.random_algebra(rng, 0.8);
      s.v2 = arena.random_algebra(rng, 0.8);
      s.v3 = arena.random_algebra(rng, 0.8);
      samples.push_back(std::move(s));
    }
    std::array<double, 3> worst{};
    for (int lev = 0; lev < 3; ++lev) {
      double m = 0.0;
      for (const Sample& s : samples) {
        m = std::max(m,
                     word_cocycle_residual(arena, f.word, s.q, s.v1, s.v2,
                                           s.v3, {}, steps[static_cast<std::size_t>(lev)]));
      }
      worst[static_cast<std::size_t>(lev)] = m;
    }
    const double order = order_of(worst);
    pass = pass && order >= 1.0 && worst[2] <= 1e-4;
    if (!detail.empty()) detail += "; ";
    detail += fmt::format("genus {}: order {:.2f}, final {:.2e} (tol 1e-04)",
                          genus, order, worst[2]);
  }
  return {pass, detail};
}

// 3. Pointwise identities of the equivariant contraction at seeded points:
//    the contraction of the three-form matches minus the differential of the
//    contracted one-form, the conjugation route through the word two-form
//    matches its boundary route, and the contracted one-form is invariant.
Verdict criterion_contractions() {
  const MapData f = fixtures::genus_map(Group::su(2));
  const Group& arena = f.arena;
  const Group k = arena.block();
  const Form3 lam = [&arena](const Mat&, const Mat& a, const Mat& b,
                             const Mat& c) { return arena.cartan3(a, b, c); };
  const double h = 1e-4;
  Philox rng(seed, 12);
  double worst_ld = 0.0;
  double worst_zt = 0.0;
  double worst_th = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Mat q = arena.random_element(rng, 0.5);
    const Mat x = k.random_algebra(rng, 0.8);
    const Mat v = arena.random_algebra(rng, 0.7);
    const Mat w = arena.random_algebra(rng, 0.7);
    const Mat big = arena.embed_diagonal(x);
    const Form1 theta_x = [&arena, &big](const Mat& p, const Mat& t) {
      return arena.inner(arena.theta_flat(p, t), big);
    };
    worst_ld = std::max(
        worst_ld, std::abs(delta_equivariant(arena, lam, x, q, v, w) +
                           fd_d1_left(arena, theta_x, q, v, w, h)));
    worst_zt = std::max(
        worst_zt, std::abs(word_zeta_conj(arena, f.word, q, x, v, {}) -
                           word_theta_side(arena, f.word, q, x, v)));
    worst_th = std::max(worst_th,
                        std::abs(delta_equivariant(arena, theta_x, x, q)));
  }
  const double worst = std::max({worst_ld, worst_zt, worst_th});
  return {worst <= 1e-6,
          fmt::format("residuals {:.2e} / {:.2e} / {:.2e} (tol 1e-06)",
                      worst_ld, worst_zt, worst_th)};
}

// 4. Well-definedness of the exponent: the shipped pair of homotopies
//    between the same two strings has extrapolated areas whose difference
//    sits within 1e-2 of an integer.
Verdict criterion_welldef() {
  const MapData f = fixtures::genus_map(Group::su(2));
  const auto [plain, wrapped] = fixtures::welldef_pair(f, 32);
  const Holonomy a = holonomy(plain, f, {}, 4);
  const Holonomy b = holonomy(wrapped, f, {}, 4);
  const double gap = a.fit.value - b.fit.value;
  const Snap snap = integer_snap(gap, 1e-2);
  const bool fits = (a.fit.order_ok || a.fit.exact) &&
                    (b.fit.order_ok || b.fit.exact);
  return {snap.ok && fits,
          fmt::format("difference {:.6f}, snap defect {:.2e} (tol 1e-02)",
                      gap, snap.defect)};
}

// 5. Curvature against shrinking loops: the exponent of the eps-rectangle
//    divided by eps^2 converges to the fiber two-form with order at least
//    one and lands within five percent.
Verdict criterion_curvature() {
  const Group k = Group::su(2);
  const std::array<std::uint64_t, 5> seeds{5, 9, 23, 42, 71};
  const std::array<double, 3> eps{0.2, 0.1, 0.05};
  bool pass = true;
  double worst_order = 1e9;
  double worst_rel = 0.0;
  for (const std::uint64_t s : seeds) {
    const fixtures::CurvatureProbe probe = fixtures::curvature_probe(k, s);
    const double ref = probe.reference();
    std::array<double, 3> err{};
    for (int lvl = 0; lvl < 3; ++lvl) {
      const double e = eps[static_cast<std::size_t>(lvl)];
      const Holonomy hol = holonomy(probe.loop(e), probe.f);
      err[static_cast<std::size_t>(lvl)] =
          std::abs(hol.fit.value / (e * e) - ref);
    }
    const double order = order_of(err);
    const double rel = err[2] / std::abs(ref);
    worst_order = std::min(worst_order, order);
    worst_rel = std::max(worst_rel, rel);
    pass = pass && order >= 1.0 && rel <= 0.05;
  }
  return {pass, fmt::format("worst order {:.2f}, worst relative error "
                            "{:.2e} (tol 5e-02)",
                            worst_order, worst_rel)};
}

// 6. The momentum of the fiber: exact minus-logarithm on geodesic
//    completions, equivariance under conjugation, and first order decay of
//    the pairing defect against profiled tangents.
Verdict criterion_momentum() {
  const MapData f = fixtures::genus_map(Group::su(2));
  const Group& arena = f.arena;
  const Group k = arena.block();

  Philox rng_a(seed, 31);
  double worst_exact = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Mat q = arena.random_element(rng_a, 0.5);
    const FiberPoint p = fixtures::geodesic_point(f, q, 12);
    const Mat y = k.log(f.eval(q));
    worst_exact = std::max(worst_exact, (momentum(p, f) + y).norm());
  }

  Philox rng_b(seed, 32);
  double worst_eq = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Mat q = arena.random_element(rng_b, 0.4);
    const FiberPoint p = fixtures::geodesic_point(f, q, 16);
    const Mat g = k.random_element(rng_b, 0.8);
    const Mat big = arena.embed_diagonal(g);
    FiberPoint moved;
    moved.q = big * p.q * big.adjoint();
    moved.u.group = k;
    moved.u.seams = p.u.seams;
    moved.u.samples.resize(p.u.samples.size());
    for (std::size_t i = 0; i < p.u.samples.size(); ++i) {
      moved.u.samples[i] = g * p.u.samples[i] * g.adjoint();
    }
    worst_eq = std::max(
        worst_eq, (momentum(moved, f) - k.Ad(g, momentum(p, f))).norm());
  }

  Philox rng_c(seed, 33);
  const Mat q = arena.random_element(rng_c, 0.5);
  const Mat v_q = arena.random_algebra(rng_c, 0.4);
  const Mat wiggle = k.random_algebra(rng_c, 0.5);
  const Mat x = k.random_algebra(rng_c, 0.7);
  const std::array<int, 3> sizes{16, 32, 64};
  const double h = defaults::momentum_fd_step;
  const std::array<double, 3> steps{4.0 * h, 2.0 * h, h};
  std::array<double, 3> err{};
  for (int lev = 0; lev < 3; ++lev) {
    const FiberPoint p =
        fixtures::geodesic_point(f, q, sizes[static_cast<std::size_t>(lev)]);
    const FiberTangent t = fixtures::profiled_tangent(f, p, v_q, wiggle);
    err[static_cast<std::size_t>(lev)] =
        momentum_defect(p, x, t, f, steps[static_cast<std::size_t>(lev)]);
  }
  const double order = order_of(err);

  const bool pass = worst_exact <= 1e-13 && worst_eq <= 1e-10 &&
                    order >= 1.0 && err[2] <= 1e-3;
  return {pass,
          fmt::format("exactness {:.2e} (tol 1e-13), equivariance {:.2e} "
                      "(tol 1e-10), defect order {:.2f}, final {:.2e} "
                      "(tol 1e-03)",
                      worst_exact, worst_eq, order, err[2])};
}

// 7. Flatness detection: commuting tuples probe flat to 1e-12 in both the
//    relator defect and the momentum norm, while generic tuples are caught
//    and still satisfy the minus-logarithm identity to 1e-10.
Verdict criterion_flatness() {
  const MapData f = fixtures::genus_map(Group::su(2));
  const Group& arena = f.arena;
  const Group k = arena.block();

  Philox rng(seed, 41);
  double worst_rel = 0.0;
  double worst_mom = 0.0;
  bool flat_ok = true;
  for (int i = 0; i < 20; ++i) {
    const Mat q = fixtures::commuting_tuple(arena, rng);
    const FlatnessReport r = flatness_probe(q, f, 1e-12, 16);
    worst_rel = std::max(worst_rel, r.relator_defect);
    worst_mom = std::max(worst_mom, r.momentum_norm);
    flat_ok = flat_ok && r.pass;
  }

  Philox rng_g(seed, 42);
  double worst_id = 0.0;
  bool caught = true;
  for (int i = 0; i < 20; ++i) {
    const Mat q = arena.random_element(rng_g, 0.5);
    const FlatnessReport r = flatness_probe(q, f, 1e-12, 16);
    caught = caught && !r.pass;
    const FiberPoint p = fixtures::geodesic_point(f, q, 16);
    const Mat y = k.log(f.eval(q));
    worst_id = std::max(worst_id, (momentum(p, f) + y).norm());
  }

  const bool pass =
      flat_ok && worst_rel <= 1e-12 && worst_mom <= 1e-12 && caught &&
      worst_id <= 1e-10;
  return {pass,
          fmt::format("flat defects {:.2e} / {:.2e} (tol 1e-12), generic "
                      "identity {:.2e} (tol 1e-10)",
                      worst_rel, worst_mom, worst_id)};
}

// 8. Linearity in the metric scale: halving the scale halves every period
//    and exponent to 1e-10 and breaks the unit snap of check one.
Verdict criterion_scaling() {
  const double s0 = defaults::su2_metric_scale;
  const std::array<int, 3> ns{32, 64, 96};

  const auto volume_fit = [&ns](const Group& k) {
    const Form3 lam = [&k](const Mat&, const Mat& a, const Mat& b,
                           const Mat& c) { return k.cartan3(a, b, c); };
    std::array<double, 3> vals{};
    for (int i = 0; i < 3; ++i) {
      const CubeMesh cube =
          fixtures::euler_cube(k, ns[static_cast<std::size_t>(i)]);
      vals[static_cast<std::size_t>(i)] = integrate_3form(cube, lam, 4);
    }
    return std::pair{vals, richardson(vals, ns)};
  };
  const auto [vals_full, fit_full] = volume_fit(Group::su(2, s0));
  const auto [vals_half, fit_half] = volume_fit(Group::su(2, 0.5 * s0));

  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst,
                     std::abs(vals_half[static_cast<std::size_t>(i)] -
                              0.5 * vals_full[static_cast<std::size_t>(i)]));
  }
  worst = std::max(worst, std::abs(fit_half.value - 0.5 * fit_full.value));

  const auto exponents = [](const Group& k) {
    const MapData f = fixtures::genus_map(k);
    const auto [plain, wrapped] = fixtures::welldef_pair(f, 32);
    return std::pair{holonomy(plain, f, {}, 4).fit.value,
                     holonomy(wrapped, f, {}, 4).fit.value};
  };
  const auto [pa_full, pb_full] = exponents(Group::su(2, s0));
  const auto [pa_half, pb_half] = exponents(Group::su(2, 0.5 * s0));
  worst = std::max(worst, std::abs(pa_half - 0.5 * pa_full));
  worst = std::max(worst, std::abs(pb_half - 0.5 * pb_full));

  const bool snap_full = integer_snap(fit_full.value, 1e-2).ok;
  const bool snap_half = integer_snap(fit_half.value, 1e-2).ok;
  const bool pass = worst <= 1e-10 && snap_full && !snap_half;
  return {pass,
          fmt::format("worst halving defect {:.2e} (tol 1e-10), unit snap "
                      "{} -> {}",
                      worst, snap_full ? "ok" : "broken",
                      snap_half ? "ok" : "broken")};
}

// 9. Determinism: rebuilding the seeded report from fresh generator streams
//    yields byte-identical text, independent of the worker count.
Verdict criterion_determinism() {
  const auto make_report = [](int workers) {
    const Group k = Group::su(2);
    const MapData f = fixtures::genus_map(k);
    Json report;
    report["group"] = group_to_json(k);
    Philox rng(seed, 91);
    report["tuple"] = mat_to_json(f.arena.random_element(rng, 0.5));
    const StringCD1 s0 = fixtures::genus1_string(f, 16, 16, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, 16, 16, 0.8);
    const HomotopyCD11 fam = fixtures::interp_family(s0, s1, 16);
    const Holonomy hol = holonomy(fam, f, {}, workers);
    report["area"] = hol.area;
    report["value"] = hol.fit.value;
    const Mat q = f.arena.random_element(rng, 0.5);
    const FiberPoint p = fixtures::geodesic_point(f, q, 16);
    report["momentum"] = mat_to_json(momentum(p, f));
    return dump_report(report);
  };
  const std::string once = make_report(1);
  const std::string again = make_report(1);
  const std::string wide = make_report(6);
  const bool pass = once == again && once == wide;
  return {pass, fmt::format("{} bytes, repeat {}, workers 1 vs 6 {}",
                            once.size(), once == again ? "equal" : "differ",
                            once == wide ? "equal" : "differ")};
}

struct Criterion {
  const char* name;
  Verdict (*run)();
};

constexpr std::array<Criterion, 9> battery{{
    {"volume period snaps to the unit", criterion_volume},
    {"cocycle residual ladder", criterion_cocycle},
    {"equivariant contraction identities", criterion_contractions},
    {"well-defined exponent difference", criterion_welldef},
    {"curvature against shrinking loops", criterion_curvature},
    {"momentum exactness, equivariance and defect", criterion_momentum},
    {"flatness detection on tuples", criterion_flatness},
    {"linearity in the metric scale", criterion_scaling},
    {"byte-identical seeded reports", criterion_determinism},
}};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      try {
        only = std::stoi(argv[++i]);
      } catch (const std::exception&) {
        only = -1;
      }
    } else {
      fmt::print(stderr, "usage: {} [--only N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(battery.size())) {
    fmt::print(stderr, "--only takes a criterion number between 1 and {}\n",
               battery.size());
    return 2;
  }

  bool all = true;
  for (int i = 0; i < static_cast<int>(battery.size()); ++i) {
    if (only != 0 && only != i + 1) continue;
    const Criterion& c = battery[static_cast<std::size_t>(i)];
    Verdict v;
    try {
      v = c.run();
    } catch (const Error& e) {
      v = {false, fmt::format("{}: {}", to_string(e.kind()), e.what())};
    } catch (const std::exception& e) {
      v = {false, e.what()};
    }
    fmt::print("[{}] {} {}: {}\n", v.pass ? "PASS" : "FAIL", i + 1, c.name,
               v.detail);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
