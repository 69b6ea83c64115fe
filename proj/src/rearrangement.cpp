#include "ergo/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergo {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                           double tail_value)
    : t_(std::move(breakpoints)), v_(std::move(values)), tail_(tail_value) {
  if (t_.size() != v_.size()) throw std::invalid_argument("step function: size mismatch");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0) || !std::isfinite(t_[i])) {
      throw std::invalid_argument("step function: breakpoints must be finite and positive");
    }
    if (i > 0 && !(t_[i] > t_[i - 1])) {
      throw std::invalid_argument("step function: breakpoints must increase strictly");
    }
    if (!(v_[i] >= 0.0) || !std::isfinite(v_[i])) {
      throw std::invalid_argument("step function: values must be finite and nonnegative");
    }
  }
  if (!(tail_ >= 0.0) || !std::isfinite(tail_)) {
    throw std::invalid_argument("step function: tail must be finite and nonnegative");
  }
}

double StepFunction::operator()(double t) const {
  // Right-continuous: at a breakpoint the next step's value applies.
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  return it == t_.end() ? tail_ : v_[static_cast<std::size_t>(it - t_.begin())];
}

bool StepFunction::is_non_increasing() const {
  for (std::size_t i = 1; i < v_.size(); ++i) {
    if (v_[i] > v_[i - 1]) return false;
  }
  return v_.empty() || v_.back() >= tail_;
}

double StepFunction::level_measure(double lambda) const {
  if (tail_ > lambda) return kInf;
  double measure = 0.0;
  for (std::size_t i = 0; i < t_.size() && v_[i] > lambda; ++i) measure = t_[i];
  return measure;
}

StepFunction rearrange(const TailedFunction& f) {
  const auto& space = f.space();
  const double floor = space.has_tail() ? std::abs(f.tail_value()) : 0.0;
  std::vector<double> t;
  std::vector<double> v;
  double mass = 0.0;
  for (std::size_t i : magnitude_order(f)) {
    const double a = std::abs(f.value(i));
    if (!(a > floor)) break;
    mass += space.weight(i);
    if (!v.empty() && v.back() == a) {
      t.back() = mass;
    } else {
      t.push_back(mass);
      v.push_back(a);
    }
  }
  return StepFunction(std::move(t), std::move(v), floor);
}

double cumulative(const StepFunction& sf, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("cumulative: s must be positive");
  const auto t = sf.breakpoints();
  const auto v = sf.values();
  double area = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (s <= t[i]) return area + v[i] * (s - left);
    area += v[i] * (t[i] - left);
    left = t[i];
  }
  return area + sf.tail_value() * (s - left);
}

bool majorizes(const StepFunction& f_star, const StepFunction& g_star, double tol) {
  if (g_star.tail_value() > f_star.tail_value() + tol) return false;
  std::vector<double> points;
  points.reserve(f_star.steps() + g_star.steps() + 1);
  points.insert(points.end(), f_star.breakpoints().begin(), f_star.breakpoints().end());
  points.insert(points.end(), g_star.breakpoints().begin(), g_star.breakpoints().end());
  points.push_back(std::max(f_star.support_end(), g_star.support_end()) + 1.0);
  for (double s : points) {
    if (cumulative(g_star, s) > cumulative(f_star, s) + tol) return false;
  }
  return true;
}

bool majorizes(const TailedFunction& f, const TailedFunction& g, double tol) {
  return majorizes(rearrange(f), rearrange(g), tol);
}

bool tmu_contains(const TailedFunction& f, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("tmu_contains: eps and delta must be positive");
  }
  return distribution(f, delta) <= eps;
}

}  // namespace ergo
