#include "holab/words.hpp"

#include <algorithm>
#include <cctype>

#include "fmt/format.h"
#include "holab/fd.hpp"

namespace holab {

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  Word& out;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse,
                fmt::format("word parse error at position {}: {}", pos, msg));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  int letter_index(const std::string& name) {
    for (std::size_t k = 0; k < out.letters.size(); ++k) {
      if (out.letters[k] == name) return static_cast<int>(k);
    }
    out.letters.push_back(name);
    return static_cast<int>(out.letters.size()) - 1;
  }

  static std::vector<Term> inverted(std::vector<Term> seq) {
    std::reverse(seq.begin(), seq.end());
    for (Term& t : seq) t.sign = -t.sign;
    return seq;
  }

  std::vector<Term> parse_word() {
    std::vector<Term> seq;
    while (true) {
      const char c = peek();
      if (c == '\0' || c == ',' || c == ']') break;
      const std::vector<Term> t = parse_term();
      seq.insert(seq.end(), t.begin(), t.end());
    }
    if (seq.empty()) fail("expected at least one term");
    return seq;
  }

  std::vector<Term> parse_term() {
    skip_ws();
    if (text[pos] == '[') {
      ++pos;
      std::vector<Term> u = parse_word();
      if (peek() != ',') fail("expected ',' in commutator");
      ++pos;
      std::vector<Term> v = parse_word();
      if (peek() != ']') fail("expected ']' to close commutator");
      ++pos;
      // [u,v] = u v u^-1 v^-1
      std::vector<Term> seq = u;
      seq.insert(seq.end(), v.begin(), v.end());
      const std::vector<Term> ui = inverted(u);
      const std::vector<Term> vi = inverted(v);
      seq.insert(seq.end(), ui.begin(), ui.end());
      seq.insert(seq.end(), vi.begin(), vi.end());
      return seq;
    }
    if (!std::isalpha(static_cast<unsigned char>(text[pos]))) {
      fail(fmt::format("unexpected character '{}'", text[pos]));
    }
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_')) {
      ++pos;
    }
    const int letter = letter_index(text.substr(start, pos - start));
    int sign = 1;
    if (pos < text.size() && text[pos] == '^') {
      if (text.compare(pos, 3, "^-1") != 0) {
        fail("only the exponent -1 is supported");
      }
      pos += 3;
      sign = -1;
    }
    return {Term{letter, sign}};
  }
};

}  // namespace

Word Word::parse(const std::string& text) {
  Word w;
  Parser p{text, 0, w};
  w.seq = p.parse_word();
  if (!p.at_end()) p.fail("trailing input after word");
  return w;
}

Word Word::surface_relator(int genus) {
  if (genus < 1) {
    throw Error(ErrorKind::usage, "surface relator needs genus >= 1");
  }
  std::string text;
  for (int g = 1; g <= genus; ++g) {
    text += fmt::format("[a{},b{}] ", g, g);
  }
  return parse(text);
}

Word Word::inverse() const {
  Word w = *this;
  w.seq = Parser::inverted(seq);
  return w;
}

Word Word::reduced() const {
  Word w = *this;
  std::vector<Term> stack;
  for (const Term& t : w.seq) {
    if (!stack.empty() && stack.back().letter == t.letter &&
        stack.back().sign == -t.sign) {
      stack.pop_back();
    } else {
      stack.push_back(t);
    }
  }
  w.seq = std::move(stack);
  return w;
}

std::vector<int> Word::degrees() const {
  std::vector<int> d(letters.size(), 0);
  for (const Term& t : seq) d[static_cast<std::size_t>(t.letter)] += t.sign;
  return d;
}

bool Word::zero_degree() const {
  const std::vector<int> d = degrees();
  return std::all_of(d.begin(), d.end(), [](int k) { return k == 0; });
}

std::string Word::str() const {
  std::string s;
  for (const Term& t : seq) {
    if (!s.empty()) s += ' ';
    s += letters[static_cast<std::size_t>(t.letter)];
    if (t.sign < 0) s += "^-1";
  }
  return s;
}

std::array<CocycleConvention, 4> cocycle_candidates() {
  return {CocycleConvention{-1.0, false}, CocycleConvention{1.0, false},
          CocycleConvention{-1.0, true}, CocycleConvention{1.0, true}};
}

namespace {

// Shared fold over the terms of a word.  Maintains the value of the prefix,
// both trivialized differentials per tangent slot, and the 2-form between
// slots 0 and 1.
struct Fold {
  Mat value;
  std::vector<Mat> omega;
  std::vector<Mat> omegabar;
  double zeta = 0.0;
};

Fold fold_word(const Group& arena, const Word& w, const Mat& tuple,
               const std::vector<Mat>& tangents, CocycleConvention conv) {
  if (w.num_letters() > arena.power) {
    throw Error(ErrorKind::usage,
                fmt::format("word uses {} letters but the tuple has {} slots",
                            w.num_letters(), arena.power));
  }
  const Group k = arena.block();
  const std::vector<Mat> xs = arena.split_blocks(tuple);
  const std::size_t slots = tangents.size();
  std::vector<std::vector<Mat>> vb(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    vb[s] = arena.split_blocks(tangents[s]);
  }

  Fold st;
  st.value = k.identity();
  st.omega.assign(slots, Mat::Zero(k.n, k.n));
  st.omegabar.assign(slots, Mat::Zero(k.n, k.n));

  std::vector<Mat> om_t(slots), ob_t(slots);
  for (const Term& t : w.seq) {
    const Mat& x = xs[static_cast<std::size_t>(t.letter)];
    const Mat tau = t.sign > 0 ? x : Mat(x.adjoint());
    for (std::size_t s = 0; s < slots; ++s) {
      const Mat& v = vb[s][static_cast<std::size_t>(t.letter)];
      const Mat adv = x * v * x.adjoint();
      om_t[s] = t.sign > 0 ? v : Mat(-adv);
      ob_t[s] = t.sign > 0 ? adv : Mat(-v);
    }
    if (slots >= 2) {
      const Mat& a0 = conv.swapped ? st.omegabar[0] : st.omega[0];
      const Mat& a1 = conv.swapped ? st.omegabar[1] : st.omega[1];
      const Mat& b0 = conv.swapped ? om_t[0] : ob_t[0];
      const Mat& b1 = conv.swapped ? om_t[1] : ob_t[1];
      st.zeta +=
          conv.sign * 0.5 * (k.inner(a0, b1) - k.inner(a1, b0));
    }
    for (std::size_t s = 0; s < slots; ++s) {
      st.omega[s] = tau.adjoint() * st.omega[s] * tau + om_t[s];
      st.omegabar[s] += st.value * ob_t[s] * st.value.adjoint();
    }
    st.value = st.value * tau;
  }
  return st;
}

}  // namespace

Mat word_eval(const Group& arena, const Word& w, const Mat& tuple) {
  return fold_word(arena, w, tuple, {}, {}).value;
}

Mat word_omega(const Group& arena, const Word& w, const Mat& tuple,
               const Mat& V) {
  return fold_word(arena, w, tuple, {V}, {}).omega[0];
}

double word_zeta(const Group& arena, const Word& w, const Mat& tuple,
                 const Mat& V, const Mat& W, CocycleConvention conv) {
  return fold_word(arena, w, tuple, {V, W}, conv).zeta;
}

double word_lambda_target(const Group& arena, const Word& w, const Mat& tuple,
                          const Mat& V1, const Mat& V2, const Mat& V3) {
  const Group k = arena.block();
  const Fold st = fold_word(arena, w, tuple, {V1, V2, V3}, {});
  double target = k.cartan3(st.omega[0], st.omega[1], st.omega[2]);
  const std::vector<int> deg = w.degrees();
  const std::vector<Mat> b1 = arena.split_blocks(V1);
  const std::vector<Mat> b2 = arena.split_blocks(V2);
  const std::vector<Mat> b3 = arena.split_blocks(V3);
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (deg[i] == 0) continue;
    target -= deg[i] * k.cartan3(b1[i], b2[i], b3[i]);
  }
  return target;
}

double word_cocycle_residual(const Group& arena, const Word& w,
                             const Mat& tuple, const Mat& V1, const Mat& V2,
                             const Mat& V3, CocycleConvention conv, double h) {
  auto zeta = [&](const Mat& p, const Mat& a, const Mat& b) {
    return word_zeta(arena, w, p, a, b, conv);
  };
  const double d = fd_d2_left(arena, zeta, tuple, V1, V2, V3, h);
  return std::abs(d - word_lambda_target(arena, w, tuple, V1, V2, V3));
}

CocycleConvention calibrate_cocycle(const Group& k, std::uint64_t seed) {
  const double h = 1e-3;
  std::array<double, 4> worst{};
  const auto candidates = cocycle_candidates();
  for (int genus : {1, 2}) {
    const Word w = Word::surface_relator(genus);
    const Group arena = k.arena(w.num_letters());
    Philox rng(seed, static_cast<std::uint64_t>(genus));
    for (int trial = 0; trial < 3; ++trial) {
      const Mat q = arena.random_element(rng, 0.5);
      const Mat v1 = arena.random_algebra(rng);
      const Mat v2 = arena.random_algebra(rng);
      const Mat v3 = arena.random_algebra(rng);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        worst[c] = std::max(
            worst[c],
            word_cocycle_residual(arena, w, q, v1, v2, v3, candidates[c], h));
      }
    }
  }
  int winner = -1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    // A correct convention leaves only the h^2 discretization residual;
    // wrong ones miss by an O(1) multiple of the form itself.
    if (worst[c] < 100.0 * h * h) {
      if (winner >= 0) {
        throw Error(ErrorKind::numeric,
                    "cocycle calibration found several passing conventions");
      }
      winner = static_cast<int>(c);
    }
  }
  if (winner < 0) {
    throw Error(ErrorKind::numeric,
                "cocycle calibration found no passing convention");
  }
  return candidates[static_cast<std::size_t>(winner)];
}

double word_zeta_conj(const Group& arena, const Word& w, const Mat& tuple,
                      const Mat& x_block, const Mat& V,
                      CocycleConvention conv) {
  return word_zeta(arena, w, tuple, V, conj_field(arena, tuple, x_block),
                   conv);
}

double word_theta_side(const Group& arena, const Word& w, const Mat& tuple,
                       const Mat& x_block, const Mat& V) {
  const Group k = arena.block();
  const Fold st = fold_word(arena, w, tuple, {V}, {});
  double side = k.inner(k.theta_flat(st.value, st.omega[0]), x_block);
  const std::vector<int> deg = w.degrees();
  const std::vector<Mat> xs = arena.split_blocks(tuple);
  const std::vector<Mat> vs = arena.split_blocks(V);
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (deg[i] == 0) continue;
    side -= deg[i] * k.inner(k.theta_flat(xs[i], vs[i]), x_block);
  }
  return side;
}

std::pair<Mat, double> ClassForm::generator(const Mat& g, const Mat& v) const {
  const std::vector<Mat> basis = k.algebra_basis();
  const int d = static_cast<int>(basis.size());
  Eigen::MatrixXd m(d, d);
  for (int j = 0; j < d; ++j) {
    m.col(j) = k.coords(g.adjoint() * basis[static_cast<std::size_t>(j)] * g -
                        basis[static_cast<std::size_t>(j)]);
  }
  const Eigen::VectorXd b = k.coords(v);
  // The threshold must be set before compute(): it controls which pivots the
  // rank revealing step keeps, not only what rank() reports afterwards.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(m);
  const Eigen::VectorXd sol = cod.solve(b);
  const double residual = (m * sol - b).norm();
  return {k.from_coords(sol), residual};
}

double ClassForm::eval(const Mat& g, const Mat& v, const Mat& w,
                       double tol) const {
  const auto [x, rx] = generator(g, v);
  const auto [y, ry] = generator(g, w);
  const double scale = 1.0 + std::max(k.norm(v), k.norm(w));
  if (rx > tol * scale || ry > tol * scale) {
    throw Error(ErrorKind::validation,
                "tangent vector is not tangent to the conjugacy class");
  }
  return sign * 0.5 *
         (k.inner(x, Group::Ad(g, y)) - k.inner(Group::Ad(g, x), y));
}

}  // namespace holab
