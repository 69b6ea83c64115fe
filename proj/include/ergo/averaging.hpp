#pragma once

// Cesaro and Besicovitch-weighted ergodic averages of DS operators, their
// truncated maximal functions, the weak (1,1) checks, and finite-horizon
// Egorov certificates.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergo/ds_operator.hpp"
#include "ergo/measure.hpp"

namespace ergo {

/// P(k) = sum_j z_j lambda_j^k with unimodular lambda_j.
class TrigPolynomial {
 public:
  struct Term {
    Complex z;
    Complex lambda;
  };

  explicit TrigPolynomial(std::vector<Term> terms);
  static TrigPolynomial constant(Complex z) { return TrigPolynomial({{z, 1.0}}); }
  static TrigPolynomial character(Complex lambda) { return TrigPolynomial({{1.0, lambda}}); }

  Complex operator()(std::size_t k) const;
  const std::vector<Term>& terms() const { return terms_; }
  /// sum_j |z_j|, a bound for sup_k |P(k)|.
  double coefficient_bound() const;

 private:
  std::vector<Term> terms_;
};

/// Decaying perturbation added to a trigonometric polynomial.
class Perturbation {
 public:
  enum class Kind { Zero, Harmonic, Geometric };

  static Perturbation zero() { return Perturbation(Kind::Zero, 0.0, 0.0); }
  /// c / (k + 1)
  static Perturbation harmonic(Complex c) { return Perturbation(Kind::Harmonic, c, 0.0); }
  /// c r^k, |r| < 1
  static Perturbation geometric(Complex c, Complex r);

  Complex operator()(std::size_t k) const;
  Kind kind() const { return kind_; }
  Complex scale() const { return c_; }
  Complex ratio() const { return r_; }
  /// sup_k |perturbation(k)|, attained at k = 0.
  double sup_abs() const { return std::abs(c_); }
  /// Upper bound on (1/n) sum_{k<n} |perturbation(k)|.
  double mean_bound(std::size_t n) const;

 private:
  Perturbation(Kind kind, Complex c, Complex r) : kind_(kind), c_(c), r_(r) {}
  Kind kind_;
  Complex c_;
  Complex r_;
};

/// beta_k = P(k) + perturbation(k), with a bound C >= sup_k |beta_k|.
class BesicovitchSequence {
 public:
  /// C defaults to sum |z_j| + sup |perturbation|.
  BesicovitchSequence(TrigPolynomial base, Perturbation perturbation,
                      std::optional<double> bound = std::nullopt);

  /// beta_k = 1.
  static BesicovitchSequence ones();
  /// beta_k = lambda^k.
  static BesicovitchSequence character(Complex lambda);

  Complex operator()(std::size_t k) const { return base_(k) + perturbation_(k); }
  const TrigPolynomial& base() const { return base_; }
  const Perturbation& perturbation() const { return perturbation_; }
  double bound() const { return bound_; }
  /// |beta_k| <= C for every k < horizon.
  bool check_bound(std::size_t horizon, double tol = kDefaultTol) const;

 private:
  TrigPolynomial base_;
  Perturbation perturbation_;
  double bound_;
};

/// Averages f_n for an increasing list of n.
struct AveragesTrace {
  std::vector<std::size_t> indices;
  std::vector<TailedFunction> averages;
  std::string source;
};

TailedFunction cesaro_avg(const DSOperator& op, const TailedFunction& f, std::size_t n);
TailedFunction weighted_avg(const DSOperator& op, const TailedFunction& f,
                            const BesicovitchSequence& beta, std::size_t n);

/// Builds the trace of weighted averages (Cesaro when beta is absent) at every
/// n in n_list in a single pass over T^k f.
AveragesTrace make_trace(const DSOperator& op, const TailedFunction& f,
                         std::span<const std::size_t> n_list,
                         const std::optional<BesicovitchSequence>& beta = std::nullopt);

/// max_{1<=n<=horizon} |A_n(T) f| pointwise.
TailedFunction maximal_fn(const DSOperator& op, const TailedFunction& f, std::size_t horizon);
/// max_{1<=n<=horizon} |B_n(T) f| pointwise.
TailedFunction weighted_maximal_fn(const DSOperator& op, const TailedFunction& f,
                                   const BesicovitchSequence& beta, std::size_t horizon);

struct Weak11Result {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// mu{A*(|f|) > lambda} against ||f||_1 / lambda for positive T and tail-0 f.
Weak11Result check_weak11(const DSOperator& op, const TailedFunction& f, double lambda,
                          std::size_t horizon);

/// mu{B*(|f|) > lambda} for B_n built on |T|, against 6 C ||f||_1 / lambda.
Weak11Result check_weighted_weak11(const DSOperator& op, const TailedFunction& f,
                                   const BesicovitchSequence& beta, double lambda,
                                   std::size_t horizon);

/// Sup-norm gap between B_n f and the split
///   (1/n) sum (Re beta_k + C) T^k f + (i/n) sum (Im beta_k + C) T^k f - C(1+i) A_n f.
double decomposition_identity_residual(const DSOperator& op, const TailedFunction& f,
                                       const BesicovitchSequence& beta, std::size_t n);

/// (1/n) sum_{k<n} |beta_k - P(k)|.
double besicovitch_defect(const BesicovitchSequence& beta, const TrigPolynomial& poly,
                          std::size_t n);

struct LimitCandidate {
  TailedFunction limit;
  std::string rule;
};

/// Orbit means for permutation operators, otherwise the last trace element.
LimitCandidate limit_candidate(const DSOperator& op, const TailedFunction& f,
                               const AveragesTrace& trace);

struct EgorovCertificate {
  std::vector<std::size_t> exceptional_atoms;
  bool tail_exceptional = false;
  double exceptional_measure = 0.0;
  /// (n, sup over the complement of the exceptional set of |limit - f_n|)
  std::vector<std::pair<std::size_t, double>> sup_decay;
  /// Exceptional measure within the requested budget.
  bool certified = false;
  double tol = 0.0;
  double eps = 0.0;
  std::string limit_rule;
};

/// Finite-horizon witness of almost uniform convergence: atoms whose deviation
/// over the last half of the window (n >= n_last / 2) exceeds tol are
/// exceptional; the rest must have converged uniformly.
EgorovCertificate egorov_certify(const AveragesTrace& trace, const TailedFunction& limit,
                                 double eps, double tol);

struct PerturbationCheck {
  bool hypothesis_ok = false;
  /// max over the window's last half of ||target_n - approx_n||_inf
  double observed_gap = 0.0;
  EgorovCertificate certificate;
  bool certified() const { return hypothesis_ok && certificate.certified; }
};

/// A trace that stays within `gap` of a convergent trace in sup norm converges
/// almost uniformly too: certify the target against the approximating limit
/// with tolerance tol + 2 gap.
PerturbationCheck au_perturbation_check(const AveragesTrace& target, const AveragesTrace& approx,
                                        const TailedFunction& approx_limit, double gap,
                                        double eps, double tol);

}  // namespace ergo
