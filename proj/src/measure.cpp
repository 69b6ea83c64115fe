#include "ergo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ergo {

namespace {

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

}  // namespace

TailedMeasureSpace::TailedMeasureSpace(std::vector<double> atom_weights, bool has_infinite_tail)
    : weights_(std::move(atom_weights)), has_tail_(has_infinite_tail), atom_mass_(0.0) {
  if (weights_.empty()) throw std::invalid_argument("measure space needs at least one atom");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("atom weights must be finite and positive");
    }
    atom_mass_ += w;
  }
}

SpacePtr make_space(std::vector<double> atom_weights, bool has_infinite_tail) {
  return std::make_shared<const TailedMeasureSpace>(std::move(atom_weights), has_infinite_tail);
}

SpacePtr uniform_space(std::size_t atoms, bool has_infinite_tail, double weight) {
  return make_space(std::vector<double>(atoms, weight), has_infinite_tail);
}

TailedFunction::TailedFunction(SpacePtr space, std::vector<Complex> atom_values, Complex tail_value)
    : space_(std::move(space)), values_(std::move(atom_values)), tail_(tail_value) {
  if (!space_) throw std::invalid_argument("function requires a measure space");
  if (values_.size() != space_->size()) {
    throw std::invalid_argument("atom value count does not match the space");
  }
  for (Complex v : values_) require_finite(v, "atom value");
  require_finite(tail_, "tail value");
  if (!space_->has_tail()) tail_ = 0.0;
}

TailedFunction TailedFunction::zero(SpacePtr space) {
  const std::size_t n = space->size();
  return TailedFunction(std::move(space), std::vector<Complex>(n, 0.0), 0.0);
}

TailedFunction TailedFunction::one(SpacePtr space) {
  const std::size_t n = space->size();
  return TailedFunction(std::move(space), std::vector<Complex>(n, 1.0), 1.0);
}

TailedFunction TailedFunction::abs() const {
  TailedFunction out = *this;
  for (Complex& v : out.values_) v = std::abs(v);
  out.tail_ = std::abs(tail_);
  return out;
}

TailedFunction TailedFunction::conj() const {
  TailedFunction out = *this;
  for (Complex& v : out.values_) v = std::conj(v);
  out.tail_ = std::conj(tail_);
  return out;
}

bool TailedFunction::same_space(const TailedFunction& other) const {
  return space_ == other.space_ || *space_ == *other.space_;
}

TailedFunction& TailedFunction::operator+=(const TailedFunction& other) {
  if (!same_space(other)) throw std::invalid_argument("functions live on different spaces");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  tail_ += other.tail_;
  return *this;
}

TailedFunction& TailedFunction::operator-=(const TailedFunction& other) {
  if (!same_space(other)) throw std::invalid_argument("functions live on different spaces");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  tail_ -= other.tail_;
  return *this;
}

TailedFunction& TailedFunction::operator*=(Complex c) {
  for (Complex& v : values_) v *= c;
  tail_ *= c;
  return *this;
}

bool TailedFunction::operator==(const TailedFunction& other) const {
  return same_space(other) && values_ == other.values_ && tail_ == other.tail_;
}

std::vector<std::size_t> magnitude_order(const TailedFunction& f) {
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f.value(i));
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
  return order;
}

double distribution(const TailedFunction& f, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("distribution: lambda must be >= 0");
  const auto& space = f.space();
  if (space.has_tail() && std::abs(f.tail_value()) > lambda) return kInf;
  double mass = 0.0;
  for (std::size_t i : magnitude_order(f)) {
    if (!(std::abs(f.value(i)) > lambda)) break;
    mass += space.weight(i);
  }
  return mass;
}

bool in_r_mu(const TailedFunction& f) {
  return !f.space().has_tail() || f.tail_value() == Complex(0.0);
}

RMuSplit split_r_mu(const TailedFunction& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("split_r_mu: eps must be positive");
  if (!in_r_mu(f)) throw std::domain_error("split_r_mu: function is not in R_mu");
  std::vector<Complex> big(f.size(), 0.0);
  std::vector<Complex> small(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Complex v = f.value(i);
    (std::abs(v) > eps ? big : small)[i] = v;
  }
  return {TailedFunction(f.space_ptr(), std::move(big), 0.0),
          TailedFunction(f.space_ptr(), std::move(small), f.tail_value())};
}

double norm_lp(const TailedFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
  const auto& space = f.space();
  const bool tail_active = space.has_tail() && f.tail_value() != Complex(0.0);
  if (std::isinf(p)) {
    double m = tail_active ? std::abs(f.tail_value()) : 0.0;
    for (Complex v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (tail_active) return kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.value(i));
    sum += space.weight(i) * (p == 1.0 ? a : std::pow(a, p));
  }
  return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

double sup_distance(const TailedFunction& a, const TailedFunction& b) {
  if (!a.same_space(b)) throw std::invalid_argument("sup_distance: different spaces");
  double m = a.space().has_tail() ? std::abs(a.tail_value() - b.tail_value()) : 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.value(i) - b.value(i)));
  return m;
}

double paper_example_value(int depth, double omega) {
  if (depth < 1) throw std::invalid_argument("series depth must be >= 1");
  if (!(omega >= 1.0)) throw std::invalid_argument("series is defined on [1, inf)");
  double sum = 0.0;
  for (int k = depth; k >= 1; --k) {
    sum += std::ldexp(1.0, -k) * std::pow(omega, -1.0 / k);
  }
  return sum;
}

TailedFunction sample_paper_example(int depth, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("sample_paper_example: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 1.0)) throw std::invalid_argument("grid points must be >= 1");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
  std::vector<double> weights(grid.size());
  std::vector<Complex> values(grid.size());
  double left = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double right = i + 1 < grid.size() ? 0.5 * (grid[i] + grid[i + 1]) : grid[i];
    // A lone grid point at 1 has an empty cell; give it unit mass instead.
    weights[i] = right > left ? right - left : 1.0;
    values[i] = paper_example_value(depth, grid[i]);
    left = right;
  }
  return TailedFunction(make_space(std::move(weights), true), std::move(values), 0.0);
}

}  // namespace ergo
