#pragma once

// Desk model of a sigma-finite measure space: finitely many weighted atoms,
// optionally followed by one region of infinite measure (the "tail") on which
// every function is constant. Functions on it model L1 + Linf.

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace ergo {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance used for derived-quantity comparisons unless a caller
/// supplies its own.
inline constexpr double kDefaultTol = 1e-12;

class TailedMeasureSpace {
 public:
  TailedMeasureSpace(std::vector<double> atom_weights, bool has_infinite_tail);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  bool has_tail() const { return has_tail_; }
  double atom_mass() const { return atom_mass_; }
  /// Atom mass, or infinity when the tail is present.
  double total_mass() const { return has_tail_ ? kInf : atom_mass_; }

  bool operator==(const TailedMeasureSpace&) const = default;

 private:
  std::vector<double> weights_;
  bool has_tail_;
  double atom_mass_;
};

using SpacePtr = std::shared_ptr<const TailedMeasureSpace>;

SpacePtr make_space(std::vector<double> atom_weights, bool has_infinite_tail);
SpacePtr uniform_space(std::size_t atoms, bool has_infinite_tail, double weight = 1.0);

/// A function on a TailedMeasureSpace. On spaces without a tail the stored
/// tail value is always 0.
class TailedFunction {
 public:
  TailedFunction(SpacePtr space, std::vector<Complex> atom_values, Complex tail_value = 0.0);

  static TailedFunction zero(SpacePtr space);
  /// The constant function 1 (atoms and tail).
  static TailedFunction one(SpacePtr space);

  const TailedMeasureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  Complex value(std::size_t i) const { return values_[i]; }
  Complex tail_value() const { return tail_; }

  TailedFunction abs() const;
  TailedFunction conj() const;
  bool same_space(const TailedFunction& other) const;

  TailedFunction& operator+=(const TailedFunction& other);
  TailedFunction& operator-=(const TailedFunction& other);
  TailedFunction& operator*=(Complex c);

  friend TailedFunction operator+(TailedFunction a, const TailedFunction& b) { return a += b; }
  friend TailedFunction operator-(TailedFunction a, const TailedFunction& b) { return a -= b; }
  friend TailedFunction operator*(Complex c, TailedFunction a) { return a *= c; }
  friend TailedFunction operator*(TailedFunction a, Complex c) { return a *= c; }

  /// Exact coordinatewise equality, space included.
  bool operator==(const TailedFunction& other) const;

 private:
  SpacePtr space_;
  std::vector<Complex> values_;
  Complex tail_;
};

/// Atom indices ordered by |value| descending, ties by index ascending.
std::vector<std::size_t> magnitude_order(const TailedFunction& f);

/// mu{|f| > lambda}. Weights are summed in magnitude order so the result is
/// bit-identical to the matching breakpoint of rearrange(f).
double distribution(const TailedFunction& f, double lambda);

/// Membership in R_mu: every super-level set {|f| > lambda}, lambda > 0, has
/// finite measure.
bool in_r_mu(const TailedFunction& f);

struct RMuSplit {
  TailedFunction integrable;  // f on {|f| > eps}; tail 0
  TailedFunction small;       // f on {|f| <= eps}; sup norm <= eps
};

/// Splits f in R_mu as integrable + small with ||small||_inf <= eps.
/// Throws std::domain_error when f is not in R_mu.
RMuSplit split_r_mu(const TailedFunction& f, double eps);

/// L^p norm for p in [1, inf]; pass kInf for the sup norm.
double norm_lp(const TailedFunction& f, double p);

/// ||a - b||_inf including the tail when present.
double sup_distance(const TailedFunction& a, const TailedFunction& b);

/// Truncation of sum_{k=1}^{K} 2^{-k} w^{-1/k} at a single point.
double paper_example_value(int depth, double omega);

/// Samples the series above on a grid over [1, grid.back()]. Each grid point
/// owns the cell between the midpoints to its neighbours (clamped to 1 on the
/// left and to the last grid point on the right). The tail is present with
/// value 0.
TailedFunction sample_paper_example(int depth, std::span<const double> grid);

}  // namespace ergo
