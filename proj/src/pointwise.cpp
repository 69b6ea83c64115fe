#include "ergo/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ergo {

namespace {

void require_on_system(const MPTSystem& sys, const TailedFunction& f) {
  if (f.size() != sys.size()) throw std::invalid_argument("function does not match the system size");
  const auto w = f.space().weights();
  if (std::adjacent_find(w.begin(), w.end(), std::not_equal_to<>()) != w.end()) {
    throw std::invalid_argument("orbit experiments need equal atom weights");
  }
}

void require_indices(std::span<const std::size_t> n_list) {
  if (n_list.empty()) throw std::invalid_argument("index list must be non-empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] == 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw std::invalid_argument("indices must be positive and strictly increasing");
    }
  }
}

// Partial averages of the sequence term(k) at the requested n.
template <typename Term>
OrbitSeries partial_averages(std::span<const std::size_t> n_list, Term term) {
  OrbitSeries series;
  series.horizon = n_list.back();
  series.n.assign(n_list.begin(), n_list.end());
  series.values.reserve(n_list.size());
  Complex sum = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < series.horizon; ++k) {
    sum += term(k);
    if (k + 1 == n_list[next]) {
      series.values.push_back(sum / static_cast<double>(k + 1));
      ++next;
    }
  }
  return series;
}

}  // namespace

MPTSystem MPTSystem::integer_shift(std::size_t window) {
  if (window == 0) throw std::invalid_argument("integer shift window must be non-empty");
  return MPTSystem(Kind::IntegerShift, window, 1);
}

MPTSystem MPTSystem::cyclic(std::size_t n, std::size_t step) {
  if (n == 0) throw std::invalid_argument("cyclic rotation needs at least one point");
  if (n > (std::size_t{1} << 31)) throw std::invalid_argument("cyclic rotation is limited to 2^31 points");
  return MPTSystem(Kind::CyclicRotation, n, step % n);
}

std::size_t MPTSystem::image(std::size_t point) const {
  if (point >= size_) throw OrbitEscape("point outside the system");
  if (kind_ == Kind::CyclicRotation) return (point + step_) % size_;
  if (point + 1 >= size_) throw OrbitEscape("orbit escapes the integer-shift window");
  return point + 1;
}

std::size_t MPTSystem::iterate(std::size_t point, std::size_t k) const {
  if (point >= size_) throw OrbitEscape("point outside the system");
  if (kind_ == Kind::CyclicRotation) {
    return (point + ((k % size_) * step_) % size_) % size_;
  }
  if (k >= size_ - point) throw OrbitEscape("orbit escapes the integer-shift window");
  return point + k;
}

void MPTSystem::require_orbit(std::size_t point, std::size_t horizon) const {
  if (horizon > 0) iterate(point, horizon - 1);
}

std::string MPTSystem::describe() const {
  if (kind_ == Kind::CyclicRotation) {
    return "cyclic:N=" + std::to_string(size_) + ",r=" + std::to_string(step_);
  }
  return "shift:W=" + std::to_string(size_);
}

OrbitSeries OrbitSeries::prefix(std::size_t n_max) const {
  OrbitSeries out;
  out.base = base;
  out.second_base = second_base;
  for (std::size_t i = 0; i < n.size() && n[i] <= n_max; ++i) {
    out.n.push_back(n[i]);
    out.values.push_back(values[i]);
  }
  out.horizon = out.n.empty() ? 0 : out.n.back();
  return out;
}

OrbitSeries orbit_weighted_avg(const MPTSystem& sys, const TailedFunction& f,
                               const BesicovitchSequence& beta, std::size_t omega,
                               std::span<const std::size_t> n_list) {
  require_on_system(sys, f);
  require_indices(n_list);
  sys.require_orbit(omega, n_list.back());
  std::size_t point = omega;
  OrbitSeries series = partial_averages(n_list, [&](std::size_t k) {
    if (k > 0) point = sys.image(point);
    return beta(k) * f.value(point);
  });
  series.base = omega;
  return series;
}

OscillationReport oscillation(const OrbitSeries& series) {
  if (series.values.size() < 4) throw std::invalid_argument("oscillation needs at least 4 entries");
  const std::size_t last = series.n.back();
  std::size_t start = 0;
  while (2 * series.n[start] < last) ++start;
  double re_lo = kInf, re_hi = -kInf, im_lo = kInf, im_hi = -kInf;
  for (std::size_t i = start; i < series.values.size(); ++i) {
    const Complex v = series.values[i];
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  return {re_hi - re_lo, im_hi - im_lo, series.n[start]};
}

std::vector<SweepRow> wiener_wintner_sweep(const MPTSystem& sys, const TailedFunction& f,
                                           std::size_t omega, std::span<const Complex> lambda_grid,
                                           std::span<const std::size_t> n_list) {
  if (lambda_grid.empty()) throw std::invalid_argument("wiener_wintner_sweep: empty frequency grid");
  std::vector<SweepRow> rows;
  rows.reserve(lambda_grid.size());
  for (Complex lambda : lambda_grid) {
    OrbitSeries series =
        orbit_weighted_avg(sys, f, BesicovitchSequence::character(lambda), omega, n_list);
    const OscillationReport report = oscillation(series);
    rows.push_back({lambda, std::move(series), report});
  }
  return rows;
}

OrbitSeries return_times_avg(const MPTSystem& sys_omega, const TailedFunction& f,
                             const MPTSystem& sys_x, const TailedFunction& g, std::size_t omega,
                             std::size_t x, std::span<const std::size_t> n_list) {
  require_on_system(sys_omega, f);
  require_on_system(sys_x, g);
  require_indices(n_list);
  sys_omega.require_orbit(omega, n_list.back());
  sys_x.require_orbit(x, n_list.back());
  const ProductSystem product{sys_omega, sys_x};
  std::pair<std::size_t, std::size_t> point{omega, x};
  OrbitSeries series = partial_averages(n_list, [&](std::size_t k) {
    if (k > 0) point = product.image(point);
    return g.value(point.second) * f.value(point.first);
  });
  series.base = omega;
  series.second_base = x;
  return series;
}

double orbit_maximal_avg(const MPTSystem& sys, const TailedFunction& f, std::size_t omega,
                         std::size_t horizon) {
  require_on_system(sys, f);
  if (horizon == 0) throw std::invalid_argument("orbit_maximal_avg: horizon must be >= 1");
  sys.require_orbit(omega, horizon);
  double sum = 0.0;
  double best = 0.0;
  std::size_t point = omega;
  for (std::size_t k = 0; k < horizon; ++k) {
    if (k > 0) point = sys.image(point);
    sum += std::abs(f.value(point));
    best = std::max(best, sum / static_cast<double>(k + 1));
  }
  return best;
}

std::vector<Complex> unit_circle_grid(std::size_t count) {
  std::vector<Complex> grid(count);
  for (std::size_t j = 0; j < count; ++j) {
    grid[j] = j == 0 ? Complex(1.0)
                     : std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(count));
  }
  return grid;
}

std::vector<std::size_t> dense_indices(std::size_t n_max) {
  std::vector<std::size_t> n(n_max);
  std::iota(n.begin(), n.end(), std::size_t{1});
  return n;
}

}  // namespace ergo
