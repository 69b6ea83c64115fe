#pragma once

#include <span>
#include <vector>

#include "ergo/measure.hpp"

namespace ergo {

/// Right-open step function on (0, inf): value v[i] on (t[i-1], t[i]] with
/// t[-1] = 0, and tail_value on (t.back(), inf). May have no steps at all.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values, double tail_value);

  std::span<const double> breakpoints() const { return t_; }
  std::span<const double> values() const { return v_; }
  double tail_value() const { return tail_; }
  std::size_t steps() const { return t_.size(); }
  /// Last breakpoint, or 0 without steps.
  double support_end() const { return t_.empty() ? 0.0 : t_.back(); }

  /// Value at t > 0; right-continuous, so step i covers [t_{i-1}, t_i).
  double operator()(double t) const;
  bool is_non_increasing() const;
  /// Lebesgue measure of {t > 0 : sf(t) > lambda}; requires a non-increasing
  /// step function.
  double level_measure(double lambda) const;

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<double> t_;
  std::vector<double> v_;
  double tail_ = 0.0;
};

/// Non-increasing rearrangement of |f|. Steps of equal value are merged and
/// atoms at or below the tail level are absorbed into the tail.
StepFunction rearrange(const TailedFunction& f);

/// Integral of sf over (0, s].
double cumulative(const StepFunction& sf, double s);

/// g** <= f** pointwise, i.e. g is majorized by f in the Hardy-Littlewood
/// sense. Checked at every kink of either cumulative, one point past the last
/// kink, and on the terminal slopes.
bool majorizes(const StepFunction& f_star, const StepFunction& g_star, double tol = kDefaultTol);
bool majorizes(const TailedFunction& f, const TailedFunction& g, double tol = kDefaultTol);

/// Membership of f in the measure-topology neighbourhood N(eps, delta).
bool tmu_contains(const TailedFunction& f, double eps, double delta);

}  // namespace ergo
