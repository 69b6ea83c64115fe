#pragma once

// Fully symmetric norms on L1 + Linf evaluated through rearrangements.

#include <optional>
#include <string>
#include <string_view>

#include "ergo/measure.hpp"
#include "ergo/rearrangement.hpp"

namespace ergo {

/// Orlicz function from a fixed catalog.
class OrliczFunction {
 public:
  enum class Kind { Power, Exp, LinLog };

  /// u^p, p >= 1.
  static OrliczFunction power(double p);
  /// e^u - 1.
  static OrliczFunction exp();
  /// u log(1 + u).
  static OrliczFunction lin_log();

  double operator()(double u) const;
  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  std::string name() const;

  /// Phi(0) = 0, Phi > 0 on (0, inf) and nonnegative second differences on a
  /// log grid.
  bool check_shape() const;

 private:
  OrliczFunction(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

/// Increasing concave weight phi with phi(0) = 0, from a fixed catalog.
class ConcaveWeight {
 public:
  enum class Kind { Power, Log };

  /// t^alpha, 0 < alpha <= 1.
  static ConcaveWeight power(double alpha);
  static ConcaveWeight sqrt() { return power(0.5); }
  static ConcaveWeight identity() { return power(1.0); }
  /// log(1 + t).
  static ConcaveWeight log();

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  double exponent() const { return alpha_; }
  std::string name() const;

  bool phi_at_infinity_infinite() const { return true; }
  /// phi(t) / t -> 0 as t -> inf.
  bool phi_over_t_vanishes() const { return kind_ == Kind::Log || alpha_ < 1.0; }
  /// lim_{t -> 0+} t / phi(t).
  double t_over_phi_at_zero() const { return kind_ == Kind::Log || alpha_ == 1.0 ? 1.0 : 0.0; }
  /// lim_{t -> inf} t / phi(t).
  double t_over_phi_at_infinity() const { return phi_over_t_vanishes() ? kInf : 1.0; }

  /// phi(0) = 0, increasing, and nonpositive second differences on a log grid.
  bool check_shape() const;

 private:
  ConcaveWeight(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

struct NormSpec {
  enum class Kind { L1, Linf, L1capLinf, L1plusLinf, Orlicz, Lorentz, Marcinkiewicz };

  Kind kind = Kind::L1;
  std::optional<OrliczFunction> orlicz;
  std::optional<ConcaveWeight> weight;

  static NormSpec l1() { return {Kind::L1, {}, {}}; }
  static NormSpec linf() { return {Kind::Linf, {}, {}}; }
  static NormSpec l1_cap_linf() { return {Kind::L1capLinf, {}, {}}; }
  static NormSpec l1_plus_linf() { return {Kind::L1plusLinf, {}, {}}; }
  static NormSpec orlicz_space(OrliczFunction phi) { return {Kind::Orlicz, phi, {}}; }
  static NormSpec lorentz(ConcaveWeight phi) { return {Kind::Lorentz, {}, phi}; }
  static NormSpec marcinkiewicz(ConcaveWeight phi) { return {Kind::Marcinkiewicz, {}, phi}; }

  /// Parses "l1", "linf", "l1capLinf", "l1plusLinf", "orlicz:p=2",
  /// "orlicz:exp", "orlicz:linlog", "lorentz:sqrt", "lorentz:power=0.3",
  /// "lorentz:log", "lorentz:id", and the same weights for "marcinkiewicz:".
  static NormSpec parse(std::string_view text);
  std::string to_string() const;
};

double norm_l1_cap_linf(const TailedFunction& f);
/// Integral of f* over (0, 1], which equals inf ||g||_1 + ||h||_inf over f = g + h.
double norm_l1_plus_linf(const TailedFunction& f);
/// Luxemburg gauge found by bisection to absolute width tol.
double luxemburg_norm(const TailedFunction& f, const OrliczFunction& phi, double tol = kDefaultTol);
double lorentz_norm(const TailedFunction& f, const ConcaveWeight& phi);
double marcinkiewicz_norm(const TailedFunction& f, const ConcaveWeight& phi);

double norm(const TailedFunction& f, const NormSpec& spec);

/// Whether the constant 1 lies outside the space; only meaningful on spaces of
/// infinite measure, so finite spaces are rejected.
bool space_excludes_one(const NormSpec& spec, const TailedMeasureSpace& space);

}  // namespace ergo
