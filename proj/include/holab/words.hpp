#pragma once

#include <array>
#include <string>
#include <vector>

#include "holab/lie.hpp"

namespace holab {

// One occurrence of a letter in a word, with exponent +1 or -1.
struct Term {
  int letter = 0;
  int sign = 1;
  bool operator==(const Term&) const = default;
};

// A word in free generators.  Commutator brackets in the source text are
// sugar: [u,v] parses to u v u^-1 v^-1.  Letters are kept in first-appearance
// order; a word in m letters is a map K^m -> K by substitution.
struct Word {
  std::vector<std::string> letters;
  std::vector<Term> seq;

  // Grammar:  word := term+   term := IDENT | IDENT "^-1" | "[" word "," word "]"
  // Throws Error(parse) with the offending position in the message.
  static Word parse(const std::string& text);

  // [a1,b1] [a2,b2] ... [ag,bg], the genus g surface relator.
  static Word surface_relator(int genus);

  Word inverse() const;
  // Cancel adjacent x x^-1 pairs until none remain.
  Word reduced() const;

  // Exponent sum per letter.
  std::vector<int> degrees() const;
  bool zero_degree() const;

  int num_letters() const { return static_cast<int>(letters.size()); }
  std::string str() const;
};

// Sign and pairing choice in the product rule for the word 2-form; the cross
// term of a product u v is
//   sign * (1/2) * < omega_u ^ omegabar_v >          (swapped = false)
//   sign * (1/2) * < omegabar_u ^ omega_v >          (swapped = true)
// with <a ^ b>(V,W) = <a(V),b(W)> - <a(W),b(V)>.  The default is the one
// calibrated against the exterior derivative identity; calibrate_cocycle
// re-derives it at runtime and the verify subcommand can be forced off it
// for demonstration.
struct CocycleConvention {
  double sign = -1.0;
  bool swapped = false;
  bool operator==(const CocycleConvention&) const = default;
};

std::array<CocycleConvention, 4> cocycle_candidates();

// Word as a map K^power -> K on a block diagonal tuple.
Mat word_eval(const Group& arena, const Word& w, const Mat& tuple);

// Left trivialized differential: omega(dw) applied to the arena tangent V.
Mat word_omega(const Group& arena, const Word& w, const Mat& tuple,
               const Mat& V);

// The word 2-form zeta_w on arena tangents.
double word_zeta(const Group& arena, const Word& w, const Mat& tuple,
                 const Mat& V, const Mat& W, CocycleConvention conv = {});

// Target of the exterior derivative identity for zeta_w:
//   w^* lambda - sum_i n_i pr_i^* lambda
// evaluated on three arena tangents, n_i the letter degrees.
double word_lambda_target(const Group& arena, const Word& w, const Mat& tuple,
                          const Mat& V1, const Mat& V2, const Mat& V3);

// | d zeta_w - target | at one point, d taken by central differences in the
// left-invariant frame with step h.
double word_cocycle_residual(const Group& arena, const Word& w,
                             const Mat& tuple, const Mat& V1, const Mat& V2,
                             const Mat& V3, CocycleConvention conv, double h);

// Picks the unique convention whose residual on surface relators vanishes to
// discretization order.  Throws Error(numeric) if zero or several pass.
CocycleConvention calibrate_cocycle(const Group& k, std::uint64_t seed = 2026);

// zeta_w with the simultaneous conjugation field of X in its second slot,
// the contraction that equals word_theta_side identically.
double word_zeta_conj(const Group& arena, const Word& w, const Mat& tuple,
                      const Mat& x_block, const Mat& V,
                      CocycleConvention conv = {});

// <theta(w(q), omega_w(V)), X> - sum_i n_i <theta(q_i, v_i), X>, the
// equivariance side that word_zeta_conj must reproduce.
double word_theta_side(const Group& arena, const Word& w, const Mat& tuple,
                       const Mat& x_block, const Mat& V);

// The 2-form on a conjugacy class C through `base`:
//   (1/2) ( <X, Ad_g Y> - <Ad_g X, Y> )  at g, xi_X, xi_Y its tangents,
// scaled by `sign`.  The orientation is the one whose exterior derivative
// equals the restriction of the invariant 3-form; on SU(2) classes both
// sides vanish for dimension reasons, so the check that pins it down lives
// on SU(3).  Tangents are passed as raw left trivialized vectors and the
// generators X, Y are recovered by least squares from
// (Ad_{g^-1} - 1) X = v; a vector outside the tangent space of the class is
// rejected.  For central base points the class is a single point and the
// form is zero.
struct ClassForm {
  Group k;
  Mat base;
  double sign = 1.0;

  double eval(const Mat& g, const Mat& v, const Mat& w,
              double tol = 1e-6) const;

  // Generator recovery, exposed for tests: least squares X and the residual
  // of (Ad_{g^-1} - 1) X = v.
  std::pair<Mat, double> generator(const Mat& g, const Mat& v) const;
};

}  // namespace holab
