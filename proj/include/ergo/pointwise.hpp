#pragma once

// Orbit averages along measure-preserving transformations: weighted averages,
// Wiener-Wintner sweeps over unimodular frequencies, and return-times
// products. Results are per base point; no full-measure set is constructed.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ergo/averaging.hpp"
#include "ergo/measure.hpp"

namespace ergo {

/// An orbit left the window of an integer-shift system.
class OrbitEscape : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class MPTSystem {
 public:
  enum class Kind { IntegerShift, CyclicRotation };

  /// Counting measure on the integers 0..window-1 under x -> x + 1. Leaving the
  /// window is an error; orbits never wrap.
  static MPTSystem integer_shift(std::size_t window);
  /// Z_n with equal weights under x -> x + step (mod n).
  static MPTSystem cyclic(std::size_t n, std::size_t step);

  Kind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  std::size_t step() const { return step_; }

  std::size_t image(std::size_t point) const;
  /// tau^k(point); throws OrbitEscape if the orbit leaves the window.
  std::size_t iterate(std::size_t point, std::size_t k) const;
  /// Every tau^k(point), k < horizon, stays in the window.
  void require_orbit(std::size_t point, std::size_t horizon) const;

  std::string describe() const;

 private:
  MPTSystem(Kind kind, std::size_t size, std::size_t step) : kind_(kind), size_(size), step_(step) {}
  Kind kind_;
  std::size_t size_;
  std::size_t step_;
};

/// Two systems acting coordinatewise.
struct ProductSystem {
  MPTSystem first;
  MPTSystem second;

  std::pair<std::size_t, std::size_t> image(std::pair<std::size_t, std::size_t> p) const {
    return {first.image(p.first), second.image(p.second)};
  }
};

struct OrbitSeries {
  std::size_t base = 0;
  std::optional<std::size_t> second_base;
  std::size_t horizon = 0;
  std::vector<std::size_t> n;
  std::vector<Complex> values;

  /// Entries with n <= n_max.
  OrbitSeries prefix(std::size_t n_max) const;
};

struct OscillationReport {
  double delta_real = 0.0;
  double delta_imag = 0.0;
  /// Smallest n in the evaluated window (n >= n_last / 2).
  std::size_t window_begin = 0;
};

/// (1/n) sum_{k<n} beta_k f(tau^k omega) for n in n_list.
OrbitSeries orbit_weighted_avg(const MPTSystem& sys, const TailedFunction& f,
                               const BesicovitchSequence& beta, std::size_t omega,
                               std::span<const std::size_t> n_list);

/// max - min of the real and imaginary parts over entries with n >= n_last / 2.
OscillationReport oscillation(const OrbitSeries& series);

struct SweepRow {
  Complex lambda;
  OrbitSeries series;
  OscillationReport report;
};

/// Orbit averages with beta_k = lambda^k for every lambda in the grid, all
/// sharing the same base point.
std::vector<SweepRow> wiener_wintner_sweep(const MPTSystem& sys, const TailedFunction& f,
                                           std::size_t omega, std::span<const Complex> lambda_grid,
                                           std::span<const std::size_t> n_list);

/// (1/n) sum_{k<n} g(phi^k x) f(tau^k omega).
OrbitSeries return_times_avg(const MPTSystem& sys_omega, const TailedFunction& f,
                             const MPTSystem& sys_x, const TailedFunction& g, std::size_t omega,
                             std::size_t x, std::span<const std::size_t> n_list);

/// sup_{1<=n<=horizon} (1/n) sum_{k<n} |f|(tau^k omega).
double orbit_maximal_avg(const MPTSystem& sys, const TailedFunction& f, std::size_t omega,
                         std::size_t horizon);

/// exp(2 pi i j / count), j = 0..count-1.
std::vector<Complex> unit_circle_grid(std::size_t count);

/// 1, 2, ..., n_max.
std::vector<std::size_t> dense_indices(std::size_t n_max);

}  // namespace ergo
