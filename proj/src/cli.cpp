#include "holab/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "holab/error.hpp"
#include "holab/fd.hpp"
#include "holab/fiber.hpp"
#include "holab/fixtures.hpp"
#include "holab/moment.hpp"
#include "holab/quad.hpp"
#include "holab/report.hpp"
#include "holab/rng.hpp"

namespace holab {

namespace {

// Raw flag values; absent means "fall back to the config file, then to the
// built-in default".
struct CommonOpts {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> json_out;
  std::optional<std::string> csv_out;
  std::optional<double> tol;
  std::optional<std::string> family;
  std::optional<int> rank;
  std::optional<double> metric_scale;
  double scale_factor = 1.0;
  std::optional<std::string> word;
  std::optional<int> genus;
};

struct RunConfig {
  Group group = Group::su(2);
  // Explicitly given word text; an all-blank string is the trivial word.
  // Absent means the surface relator of `genus`.
  std::optional<std::string> word_src;
  int genus = 1;
  std::uint64_t seed = 2026;
  int workers = 1;
  std::optional<double> tol;
};

struct VerifyOpts {
  int tuples = 10;
  int points = 20;
  bool debug_cocycle = false;
};

struct HolonomyOpts {
  std::string fixture;
  std::string input;
  std::vector<std::string> pair;
  std::string emit;
  std::string out;
  int res = 32;
};

struct WordOpts {
  std::string src;
  std::string point_file;
  bool zeta_check = false;
  bool plan = false;
};

struct MomentOpts {
  int trials = 50;
};

struct ProbeOpts {
  int count = 1;
  std::string kind = "commuting";
  std::string input;
  int samples = 16;
};

const Json& jfield(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorKind::parse,
                fmt::format("{}: missing field \"{}\"", what, key));
  }
  return *it;
}

RunConfig resolve_config(const CommonOpts& c) {
  RunConfig cfg;
  std::string family = "su";
  std::optional<int> rank;
  std::optional<double> metric_scale;
  if (c.config_path) {
    const Json j = read_json_file(*c.config_path);
    if (!j.is_object()) {
      throw Error(ErrorKind::parse, "config: expected a JSON object");
    }
    for (const auto& [key, val] : j.items()) {
      try {
        if (key == "family") {
          family = val.get<std::string>();
        } else if (key == "n") {
          rank = val.get<int>();
        } else if (key == "metric_scale") {
          metric_scale = val.get<double>();
        } else if (key == "word") {
          cfg.word_src = val.get<std::string>();
        } else if (key == "genus") {
          cfg.genus = val.get<int>();
        } else if (key == "seed") {
          cfg.seed = val.get<std::uint64_t>();
        } else if (key == "workers") {
          cfg.workers = val.get<int>();
        } else if (key == "tol") {
          cfg.tol = val.get<double>();
        } else {
          throw Error(ErrorKind::parse,
                      fmt::format("config: unknown key \"{}\"", key));
        }
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse,
                    fmt::format("config key \"{}\": {}", key, e.what()));
      }
    }
  }
  if (c.family) family = *c.family;
  if (c.rank) rank = *c.rank;
  if (c.metric_scale) metric_scale = *c.metric_scale;
  if (c.word) cfg.word_src = *c.word;
  if (c.genus) cfg.genus = *c.genus;
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) cfg.workers = *c.workers;
  if (c.tol) cfg.tol = *c.tol;

  std::transform(family.begin(), family.end(), family.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  const Family fam = family_from_string(family);
  if (fam == Family::U && rank.value_or(1) != 1) {
    throw Error(ErrorKind::usage, "u(1) takes no rank; drop --n");
  }
  const int n = rank.value_or(fam == Family::U ? 1 : 2);
  if (fam != Family::U && n < 2) {
    throw Error(ErrorKind::usage, fmt::format("rank {} is out of range", n));
  }
  if (!(c.scale_factor > 0.0)) {
    throw Error(ErrorKind::usage, "--scale-factor must be positive");
  }
  const double scale =
      metric_scale.value_or(defaults::su2_metric_scale) * c.scale_factor;
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::usage, "metric scale must be positive");
  }
  cfg.group = Group{fam, n, scale, 1};
  if (cfg.genus < 1 || cfg.genus > 4) {
    throw Error(ErrorKind::usage,
                fmt::format("genus {} is out of range 1..4", cfg.genus));
  }
  if (cfg.workers < 1 || cfg.workers > 64) {
    throw Error(ErrorKind::usage,
                fmt::format("workers {} is out of range 1..64", cfg.workers));
  }
  if (cfg.tol && !(*cfg.tol > 0.0)) {
    throw Error(ErrorKind::usage, "--tol must be positive");
  }
  return cfg;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// The word map of the run: the configured word text, or the surface relator
// when none was given.  The arena power is the letter count.
MapData map_for(const RunConfig& cfg) {
  Word w;
  if (cfg.word_src) {
    if (!blank(*cfg.word_src)) {
      w = Word::parse(*cfg.word_src);
    }
  } else {
    w = Word::surface_relator(cfg.genus);
  }
  const Group arena = cfg.group.arena(std::max(1, w.num_letters()));
  MapData f{arena, w, arena.identity()};
  f.validate();
  return f;
}

Json base_report(const char* command, const RunConfig& cfg, const MapData* f) {
  Json j;
  j["command"] = command;
  j["group"] = group_to_json(cfg.group);
  if (f != nullptr) {
    j["word"] = f->word.str();
  }
  j["seed"] = cfg.seed;
  return j;
}

Json snap_json(const Snap& s) {
  Json j;
  j["value"] = s.value;
  j["defect"] = s.defect;
  j["ok"] = s.ok;
  return j;
}

Json fit_json(const Richardson& fit) {
  Json j;
  j["value"] = fit.value;
  j["error"] = fit.error;
  j["order"] = fit.order;
  j["order_ok"] = fit.order_ok;
  j["exact"] = fit.exact;
  return j;
}

double ladder_order(const std::array<double, 3>& r) {
  return std::log(r[0] / r[2]) / std::log(4.0);
}

// Residuals over a step ladder halving twice.  A ladder that starts at
// rounding level carries no order information, so it is reported exact
// instead of fitting noise.
Json residual_ladder_json(const std::array<double, 3>& steps,
                          const std::array<double, 3>& residuals, double tol) {
  Json j;
  j["steps"] = steps;
  j["residuals"] = residuals;
  j["final"] = residuals[2];
  j["tol"] = tol;
  const bool tiny = residuals[0] <= 1e-12 && residuals[2] <= 1e-12;
  j["exact"] = tiny;
  if (tiny) {
    j["pass"] = residuals[2] <= tol;
  } else {
    const double order = ladder_order(residuals);
    j["order"] = order;
    j["pass"] = order >= 1.0 && residuals[2] <= tol;
  }
  return j;
}

// ---- verify ----

bool cmd_verify(const RunConfig& cfg, const VerifyOpts& vo, Json& report) {
  const MapData f = map_for(cfg);
  report = base_report("verify", cfg, &f);
  if (f.word.seq.empty()) {
    // The domain of a word with no letters is a point; every form in the
    // suite vanishes identically, so each residual is an exact zero.
    Json ids;
    for (const char* name : {"dzeta_pullback", "delta_lambda_plus_dtheta",
                             "delta_zeta_theta", "delta_theta"}) {
      Json e;
      e["residual"] = 0.0;
      e["exact"] = true;
      e["pass"] = true;
      ids[name] = e;
    }
    report["identities"] = ids;
    report["note"] = "empty word: the domain is a point, residuals vanish";
    report["pass"] = true;
    return true;
  }

  const Group& arena = f.arena;
  const Group k = arena.block();
  const CocycleConvention conv =
      vo.debug_cocycle ? CocycleConvention{1.0, false} : CocycleConvention{};
  const double tol_ladder = cfg.tol.value_or(1e-4);
  const double tol_point = cfg.tol.value_or(1e-6);

  const std::array<double, 3> steps{1e-2, 5e-3, 2.5e-3};
  Philox rng(cfg.seed, 11);
  struct Sample {
    Mat q, v1, v2, v3;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(vo.tuples));
  for (int i = 0; i < vo.tuples; ++i) {
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
      m = std::max(m, word_cocycle_residual(arena, f.word, s.q, s.v1, s.v2,
                                            s.v3, conv, steps[lev]));
    }
    worst[static_cast<std::size_t>(lev)] = m;
  }
  Json ids;
  Json dz = residual_ladder_json(steps, worst, tol_ladder);
  dz["tuples"] = vo.tuples;
  bool pass = dz["pass"].get<bool>();
  ids["dzeta_pullback"] = dz;

  const double h = 1e-4;
  Philox prng(cfg.seed, 12);
  double worst_ld = 0.0;
  double worst_zt = 0.0;
  double worst_th = 0.0;
  const Form3 lam = [&arena](const Mat&, const Mat& a, const Mat& b,
                             const Mat& c) { return arena.cartan3(a, b, c); };
  for (int i = 0; i < vo.points; ++i) {
    const Mat q = arena.random_element(prng, 0.5);
    const Mat x = k.random_algebra(prng, 0.8);
    const Mat v = arena.random_algebra(prng, 0.7);
    const Mat w = arena.random_algebra(prng, 0.7);
    const Mat big = arena.embed_diagonal(x);
    const Form1 theta_x = [&arena, &big](const Mat& p, const Mat& t) {
      return arena.inner(arena.theta_flat(p, t), big);
    };
    worst_ld = std::max(
        worst_ld, std::abs(delta_equivariant(arena, lam, x, q, v, w) +
                           fd_d1_left(arena, theta_x, q, v, w, h)));
    worst_zt = std::max(
        worst_zt, std::abs(word_zeta_conj(arena, f.word, q, x, v, conv) -
                           word_theta_side(arena, f.word, q, x, v)));
    worst_th = std::max(worst_th,
                        std::abs(delta_equivariant(arena, theta_x, x, q)));
  }
  const auto point_entry = [&](double worst_res, bool fd) {
    Json e;
    e["points"] = vo.points;
    if (fd) e["step"] = h;
    e["residual"] = worst_res;
    e["tol"] = tol_point;
    e["pass"] = worst_res <= tol_point;
    return e;
  };
  Json ld = point_entry(worst_ld, true);
  Json zt = point_entry(worst_zt, false);
  Json th = point_entry(worst_th, false);
  pass = pass && ld["pass"].get<bool>() && zt["pass"].get<bool>() &&
         th["pass"].get<bool>();
  ids["delta_lambda_plus_dtheta"] = ld;
  ids["delta_zeta_theta"] = zt;
  ids["delta_theta"] = th;
  report["identities"] = ids;
  if (vo.debug_cocycle) report["debug_cocycle"] = true;
  report["pass"] = pass;
  return pass;
}

// ---- holonomy ----

void require_shape(const Group& got, const Group& want, const char* what) {
  if (got.family != want.family || got.n != want.n ||
      got.power != want.power) {
    throw Error(
        ErrorKind::validation,
        fmt::format("{}: group {}({})^{} does not match the configured "
                    "{}({})^{}",
                    what, to_string(got.family), got.n, got.power,
                    to_string(want.family), want.n, want.power));
  }
}

// Load a homotopy mesh and restamp the configured metric scale: the samples
// are pure geometry, the metric enters only through the integrals.
HomotopyCD11 load_family(const std::string& path, const MapData& f) {
  HomotopyCD11 fam = homotopy_from_json(read_json_file(path));
  require_shape(fam.h.group, f.arena, "family base");
  require_shape(fam.H.group, f.arena.block(), "family cube");
  fam.h.group = f.arena;
  fam.H.group = f.arena.block();
  return fam;
}

HomotopyCD11 fixture_family(const MapData& f, const std::string& which,
                            int n) {
  if (n < 8 || n % 4 != 0) {
    throw Error(ErrorKind::usage,
                "--res must be a multiple of four, at least eight");
  }
  if (which == "constant") {
    const StringCD1 s = fixtures::genus1_string(f, n, n, 0.5);
    return fixtures::interp_family(s, s, n);
  }
  if (which == "reversed") {
    const StringCD1 s0 = fixtures::genus1_string(f, n, n, 0.0);
    const StringCD1 s1 = fixtures::genus1_string(f, n, n, 0.8);
    return fixtures::reversed_family(fixtures::interp_family(s0, s1, n));
  }
  if (which == "pair_a") {
    return fixtures::welldef_pair(f, n).first;
  }
  if (which == "pair_b") {
    return fixtures::welldef_pair(f, n).second;
  }
  throw Error(ErrorKind::usage,
              fmt::format("unknown fixture \"{}\"", which));
}

Json holonomy_json(const Holonomy& hol) {
  Json j;
  j["area"] = hol.area;
  j["fit"] = fit_json(hol.fit);
  j["circle"] = Json::array({hol.circle.real(), hol.circle.imag()});
  j["closed"] = hol.closed;
  j["strict"] = hol.strict;
  if (hol.closed) j["snap"] = snap_json(hol.snap);
  j["pass"] = hol.fit.order_ok || hol.fit.exact;
  return j;
}

bool cmd_holonomy(const RunConfig& cfg, const HolonomyOpts& ho, Json& report) {
  const MapData f = map_for(cfg);
  report = base_report("holonomy", cfg, &f);
  const int modes = static_cast<int>(!ho.fixture.empty()) +
                    static_cast<int>(!ho.input.empty()) +
                    static_cast<int>(!ho.pair.empty()) +
                    static_cast<int>(!ho.emit.empty());
  if (modes != 1) {
    throw Error(ErrorKind::usage,
                "choose exactly one of --fixture, --input, --pair, --emit");
  }

  if (!ho.emit.empty()) {
    const HomotopyCD11 fam = fixture_family(f, ho.emit, ho.res);
    write_text_file(ho.out, dump_report(homotopy_to_json(fam)));
    report["mode"] = "emit";
    report["fixture"] = ho.emit;
    report["resolution"] = ho.res;
    report["path"] = ho.out;
    report["pass"] = true;
    return true;
  }

  const bool pair_mode = !ho.pair.empty() || ho.fixture == "pair";
  if (pair_mode) {
    HomotopyCD11 a;
    HomotopyCD11 b;
    if (!ho.pair.empty()) {
      a = load_family(ho.pair[0], f);
      b = load_family(ho.pair[1], f);
      report["mode"] = "pair";
    } else {
      std::tie(a, b) = fixtures::welldef_pair(f, ho.res);
      report["mode"] = "fixture:pair";
      report["resolution"] = ho.res;
    }
    // Well-definedness only makes sense between the same two strings.
    const double tol = defaults::mesh_tol;
    if (!StringCD1::same(a.slice(0), b.slice(0), tol) ||
        !StringCD1::same(a.slice(a.h.n2), b.slice(b.h.n2), tol)) {
      throw Error(ErrorKind::validation,
                  "the two families do not connect the same strings");
    }
    const Holonomy ha = holonomy(a, f, {}, cfg.workers);
    const Holonomy hb = holonomy(b, f, {}, cfg.workers);
    const double gap = hb.fit.value - ha.fit.value;
    const Snap snap = integer_snap(gap, cfg.tol.value_or(1e-2));
    Json ja = holonomy_json(ha);
    Json jb = holonomy_json(hb);
    const bool pass = ja["pass"].get<bool>() && jb["pass"].get<bool>() &&
                      snap.ok;
    report["a"] = ja;
    report["b"] = jb;
    report["difference"] = gap;
    report["snap"] = snap_json(snap);
    report["pass"] = pass;
    return pass;
  }

  HomotopyCD11 fam;
  if (!ho.input.empty()) {
    fam = load_family(ho.input, f);
    report["mode"] = "input";
  } else {
    fam = fixture_family(f, ho.fixture, ho.res);
    report["mode"] = "fixture:" + ho.fixture;
    report["resolution"] = ho.res;
  }
  const Holonomy hol = holonomy(fam, f, {}, cfg.workers);
  const Json jh = holonomy_json(hol);
  for (const auto& [key, val] : jh.items()) {
    report[key] = val;
  }
  const bool pass = jh["pass"].get<bool>();
  report["pass"] = pass;
  return pass;
}

// ---- periods ----

bool cmd_periods(const RunConfig& cfg, Json& report) {
  const Group k = cfg.group;
  report = base_report("periods", cfg, nullptr);
  const Form3 lam = [&k](const Mat&, const Mat& a, const Mat& b,
                         const Mat& c) { return k.cartan3(a, b, c); };
  std::array<int, 3> ns{32, 64, 96};
  std::array<double, 3> vals{};
  if (k.family == Family::SU && k.n == 2) {
    for (int i = 0; i < 3; ++i) {
      const CubeMesh cube = fixtures::euler_cube(k, ns[static_cast<std::size_t>(i)]);
      vals[static_cast<std::size_t>(i)] = integrate_3form(cube, lam, cfg.workers);
    }
  } else if (k.family == Family::U) {
    // One full turn along the first axis; the integrand vanishes because the
    // algebra is abelian, so the resolutions only need to satisfy the step
    // bound.
    ns = {24, 32, 48};
    for (int i = 0; i < 3; ++i) {
      const int n = ns[static_cast<std::size_t>(i)];
      const CubeMesh cube = CubeMesh::from_function(
          k, n, n, n, [](double x, double, double) -> Mat {
            Mat g(1, 1);
            g(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * x);
            return g;
          });
      cube.validate();
      vals[static_cast<std::size_t>(i)] = integrate_3form(cube, lam, cfg.workers);
    }
  } else {
    throw Error(ErrorKind::usage,
                fmt::format("periods: no shipped cube for {}({})",
                            to_string(k.family), k.n));
  }
  const Richardson fit = richardson(vals, ns);
  const Snap snap = integer_snap(fit.value, cfg.tol.value_or(1e-2));
  report["resolutions"] = ns;
  report["values"] = vals;
  report["fit"] = fit_json(fit);
  report["snap"] = snap_json(snap);
  const bool pass = snap.ok && (fit.order_ok || fit.exact);
  report["pass"] = pass;
  return pass;
}

// ---- word ----

Mat load_tuple(const std::string& path, const Group& arena) {
  const Json j = read_json_file(path);
  const Group g = group_from_json(jfield(j, "group", "tuple file"));
  require_shape(g, arena, "tuple file");
  const Mat q = mat_from_json(jfield(j, "tuple", "tuple file"));
  arena.validate(q);
  return q;
}

Json plan_json(const Word& w) {
  Json prod;
  prod["op"] = "product";
  Json children = Json::array();
  for (const Term& t : w.seq) {
    Json leaf;
    leaf["op"] = "letter";
    leaf["letter"] = w.letters[static_cast<std::size_t>(t.letter)];
    if (t.sign < 0) {
      Json inv;
      inv["op"] = "inverse";
      inv["children"] = Json::array({leaf});
      children.push_back(inv);
    } else {
      children.push_back(leaf);
    }
  }
  prod["children"] = children;
  return prod;
}

bool cmd_word(const RunConfig& cfg, const WordOpts& wo, Json& report) {
  const Word w = Word::parse(wo.src);
  const Group arena = cfg.group.arena(std::max(1, w.num_letters()));
  report = base_report("word", cfg, nullptr);
  report["src"] = wo.src;
  report["word"] = w.str();
  report["letters"] = w.letters;
  report["degrees"] = w.degrees();
  report["zero_degree"] = w.zero_degree();

  Mat q;
  Json point;
  if (!wo.point_file.empty()) {
    q = load_tuple(wo.point_file, arena);
    point["source"] = "file";
  } else {
    Philox rng(cfg.seed, 21);
    q = arena.random_element(rng, 0.5);
    point["source"] = "seeded";
  }
  report["point"] = point;
  report["value"] = mat_to_json(word_eval(arena, w, q));
  if (wo.plan) report["plan"] = plan_json(w);

  bool pass = true;
  if (wo.zeta_check) {
    Philox rng(cfg.seed, 22);
    const Mat v1 = arena.random_algebra(rng, 0.8);
    const Mat v2 = arena.random_algebra(rng, 0.8);
    const Mat v3 = arena.random_algebra(rng, 0.8);
    const std::array<double, 3> steps{1e-2, 5e-3, 2.5e-3};
    std::array<double, 3> res{};
    for (int lev = 0; lev < 3; ++lev) {
      res[static_cast<std::size_t>(lev)] = word_cocycle_residual(
          arena, w, q, v1, v2, v3, {}, steps[static_cast<std::size_t>(lev)]);
    }
    const Json zc = residual_ladder_json(steps, res, cfg.tol.value_or(1e-4));
    report["zeta_check"] = zc;
    pass = zc["pass"].get<bool>();
  }
  report["pass"] = pass;
  return pass;
}

// ---- moment ----

bool cmd_moment(const RunConfig& cfg, const MomentOpts& mo, Json& report) {
  const MapData f = map_for(cfg);
  report = base_report("moment", cfg, &f);
  if (!f.word.zero_degree()) {
    throw Error(ErrorKind::usage,
                "moment: the word must have zero degree in every generator");
  }
  const Group& arena = f.arena;
  const Group k = arena.block();
  bool pass = true;

  {
    Philox rng(cfg.seed, 31);
    double worst = 0.0;
    const int trials = 3;
    for (int i = 0; i < trials; ++i) {
      const Mat q = arena.random_element(rng, 0.5);
      const FiberPoint p = fixtures::geodesic_point(f, q, 12);
      const Mat y = k.log(f.eval(q));
      worst = std::max(worst, (momentum(p, f) + y).norm());
    }
    Json e;
    e["trials"] = trials;
    e["worst"] = worst;
    e["tol"] = 1e-13;
    e["pass"] = worst <= 1e-13;
    pass = pass && e["pass"].get<bool>();
    report["subgroup_exactness"] = e;
  }

  {
    Philox rng(cfg.seed, 32);
    double worst = 0.0;
    for (int t = 0; t < mo.trials; ++t) {
      const Mat q = arena.random_element(rng, 0.4);
      const FiberPoint p = fixtures::geodesic_point(f, q, 16);
      const Mat g = k.random_element(rng, 0.8);
      const Mat big = arena.embed_diagonal(g);
      FiberPoint moved;
      moved.q = big * p.q * big.adjoint();
      moved.u.group = k;
      moved.u.seams = p.u.seams;
      moved.u.samples.resize(p.u.samples.size());
      for (std::size_t i = 0; i < p.u.samples.size(); ++i) {
        moved.u.samples[i] = g * p.u.samples[i] * g.adjoint();
      }
      worst = std::max(
          worst, (momentum(moved, f) - k.Ad(g, momentum(p, f))).norm());
    }
    Json e;
    e["trials"] = mo.trials;
    e["worst"] = worst;
    e["tol"] = 1e-10;
    e["pass"] = worst <= 1e-10;
    pass = pass && e["pass"].get<bool>();
    report["equivariance"] = e;
  }

  {
    Philox rng(cfg.seed, 33);
    const Mat q = arena.random_element(rng, 0.5);
    const Mat v_q = arena.random_algebra(rng, 0.4);
    const Mat wiggle = k.random_algebra(rng, 0.5);
    const Mat x = k.random_algebra(rng, 0.7);
    const std::array<int, 3> sizes{16, 32, 64};
    const double h = defaults::momentum_fd_step;
    const std::array<double, 3> steps{4.0 * h, 2.0 * h, h};
    std::array<double, 3> err{};
    for (int lev = 0; lev < 3; ++lev) {
      const FiberPoint p =
          fixtures::geodesic_point(f, q, sizes[static_cast<std::size_t>(lev)]);
      const FiberTangent t = fixtures::profiled_tangent(f, p, v_q, wiggle);
      err[static_cast<std::size_t>(lev)] = momentum_defect(
          p, x, t, f, steps[static_cast<std::size_t>(lev)]);
    }
    Json e = residual_ladder_json(steps, err, cfg.tol.value_or(1e-3));
    e["sizes"] = sizes;
    pass = pass && e["pass"].get<bool>();
    report["defect_ladder"] = e;
  }

  report["pass"] = pass;
  return pass;
}

// ---- probe ----

bool cmd_probe(const RunConfig& cfg, const ProbeOpts& po, Json& report) {
  const MapData f = map_for(cfg);
  const Group& arena = f.arena;
  const Group k = arena.block();
  const double tol = cfg.tol.value_or(1e-12);
  Philox rng(cfg.seed, 41);
  const auto make = [&]() -> Mat {
    if (!po.input.empty()) return load_tuple(po.input, arena);
    if (po.kind == "commuting") return fixtures::commuting_tuple(arena, rng);
    if (po.kind == "random") return arena.random_element(rng, 0.5);
    // A commuting tuple pushed along the gauge direction: still flat.
    const Mat flat = fixtures::commuting_tuple(arena, rng);
    const Mat g = k.exp(0.05 * k.random_algebra(rng, 1.0));
    const Mat big = arena.embed_diagonal(g);
    return big * flat * big.adjoint();
  };

  const int count = po.input.empty() ? po.count : 1;
  bool all = true;
  Json probes = Json::array();
  Json bare;
  for (int i = 0; i < count; ++i) {
    const FlatnessReport r = flatness_probe(make(), f, tol, po.samples);
    Json e;
    e["relator_defect"] = r.relator_defect;
    e["momentum_norm"] = r.momentum_norm;
    e["pass"] = r.pass;
    all = all && r.pass;
    bare = e;
    probes.push_back(e);
  }
  if (count == 1) {
    report = bare;
  } else {
    report = base_report("probe", cfg, &f);
    report["kind"] = po.kind;
    report["count"] = count;
    report["samples"] = po.samples;
    report["tol"] = tol;
    report["probes"] = probes;
    report["pass"] = all;
  }
  return all;
}

void deliver(const CommonOpts& com, const Json& report) {
  const std::string text = dump_report(report);
  std::fputs(text.c_str(), stdout);
  if (com.json_out) write_text_file(*com.json_out, text);
  if (com.csv_out) write_text_file(*com.csv_out, csv_from_json(report));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CommonOpts com;
  VerifyOpts vo;
  HolonomyOpts ho;
  WordOpts wo;
  MomentOpts mo;
  ProbeOpts po;

  CLI::App app{"numerical laboratory for circle bundles over word map fibers"};
  app.require_subcommand(1);
  app.add_option("--config", com.config_path, "JSON config file");
  app.add_option("--seed", com.seed, "seed of the counter-based sampler");
  app.add_option("--workers", com.workers, "worker threads for quadrature");
  app.add_option("--json", com.json_out, "also write the JSON report here");
  app.add_option("--csv", com.csv_out, "also write a flat CSV mirror here");
  app.add_option("--tol", com.tol, "override the command's final tolerance");
  app.add_option("--family", com.family, "group family: su, so or u");
  app.add_option("--n", com.rank, "group rank");
  app.add_option("--metric-scale", com.metric_scale,
                 "metric scale (default 1/(4 pi^2))");
  app.add_option("--scale-factor", com.scale_factor,
                 "multiply the metric scale, default 1");
  app.add_option("--word", com.word,
                 "word source text; an empty string is the trivial word");
  app.add_option("--genus", com.genus,
                 "surface relator genus when no word is given");

  auto* sv = app.add_subcommand(
      "verify", "run the identity suites for the configured word map");
  sv->fallthrough();
  sv->add_option("--tuples", vo.tuples, "tuples in the derivative ladder")
      ->check(CLI::Range(1, 200));
  sv->add_option("--points", vo.points, "points for the pointwise identities")
      ->check(CLI::Range(1, 500));
  sv->add_flag("--debug-cocycle", vo.debug_cocycle,
               "force the uncalibrated cocycle sign");

  auto* sh = app.add_subcommand("holonomy",
                                "holonomy exponent of a family of strings");
  sh->fallthrough();
  auto* of =
      sh->add_option("--fixture", ho.fixture,
                     "built-in family: constant, reversed, pair (the "
                     "well-definedness analysis) or pair_a/pair_b alone")
          ->check(CLI::IsMember(
              {"constant", "reversed", "pair", "pair_a", "pair_b"}));
  auto* oi = sh->add_option("--input", ho.input, "homotopy mesh file");
  auto* op = sh->add_option("--pair", ho.pair,
                            "two homotopy mesh files between the same strings")
                 ->expected(2);
  auto* oe =
      sh->add_option("--emit", ho.emit, "write a fixture mesh and stop")
          ->check(CLI::IsMember({"constant", "reversed", "pair_a", "pair_b"}));
  auto* oo = sh->add_option("--out", ho.out, "target path for --emit");
  sh->add_option("--res", ho.res, "fixture resolution, a multiple of four");
  of->excludes(oi);
  of->excludes(op);
  of->excludes(oe);
  oi->excludes(op);
  oi->excludes(oe);
  op->excludes(oe);
  oe->needs(oo);
  oo->needs(oe);

  auto* sp = app.add_subcommand(
      "periods", "integral of the invariant 3-form over the fundamental cube");
  sp->fallthrough();

  auto* sw = app.add_subcommand("word", "compile and evaluate a word");
  sw->fallthrough();
  sw->add_option("src", wo.src, "word source text")->required();
  sw->add_option("--point", wo.point_file, "tuple file {group, tuple}");
  sw->add_flag("--zeta-check", wo.zeta_check,
               "run the cocycle derivative ladder at the point");
  sw->add_flag("--plan", wo.plan, "include the evaluation plan tree");

  auto* sm = app.add_subcommand("moment",
                                "momentum checks for a zero-degree word");
  sm->fallthrough();
  sm->add_option("--trials", mo.trials, "conjugation trials")
      ->check(CLI::Range(1, 500));

  auto* sb = app.add_subcommand("probe", "flatness probe of tuples");
  sb->fallthrough();
  sb->add_option("--count", po.count, "number of seeded tuples")
      ->check(CLI::Range(1, 1000));
  sb->add_option("--kind", po.kind,
                 "tuple source: commuting, random or conjugated")
      ->check(CLI::IsMember({"commuting", "random", "conjugated"}));
  sb->add_option("--input", po.input, "tuple file {group, tuple}");
  sb->add_option("--samples", po.samples, "completion path resolution")
      ->check(CLI::Range(2, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve_config(com);
    Json report;
    bool pass = false;
    if (sv->parsed()) {
      pass = cmd_verify(cfg, vo, report);
    } else if (sh->parsed()) {
      pass = cmd_holonomy(cfg, ho, report);
    } else if (sp->parsed()) {
      pass = cmd_periods(cfg, report);
    } else if (sw->parsed()) {
      pass = cmd_word(cfg, wo, report);
    } else if (sm->parsed()) {
      pass = cmd_moment(cfg, mo, report);
    } else {
      pass = cmd_probe(cfg, po, report);
    }
    deliver(com, report);
    return pass ? 0 : 1;
  } catch (const Error& e) {
    fmt::print(stderr, "holab: {}: {}\n", to_string(e.kind()), e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "holab: {}\n", e.what());
    return 2;
  }
}

}  // namespace holab
