#pragma once

#include <cstddef>
#include <vector>

#include "ergo/measure.hpp"

namespace ergo {

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Largest square kernel accepted.
inline constexpr std::size_t kMaxAtoms = 512;

/// Operator on the tailed model:
///   (Tf)_i = sum_j K_ij f_j + b_i f_tail,   (Tf)_tail = eta f_tail.
/// On spaces without a tail f_tail is 0, so only K acts.
class DSOperator {
 public:
  DSOperator(ComplexMatrix kernel, std::vector<Complex> tail_injection, Complex tail_coeff);

  static DSOperator identity(std::size_t n);

  std::size_t size() const { return kernel_.rows(); }
  const ComplexMatrix& kernel() const { return kernel_; }
  const std::vector<Complex>& tail_injection() const { return tail_injection_; }
  Complex tail_coeff() const { return tail_coeff_; }

  /// All of K, b and eta real and nonnegative.
  bool is_positive() const;
  /// K is a 0/1 permutation matrix, b = 0 and eta = 1.
  bool is_permutation() const;
  /// For a permutation operator, the atom that atom j is sent to.
  std::vector<std::size_t> permutation_targets() const;

  /// Atom values only: K v + b t.
  void apply_atoms(std::span<const Complex> values, Complex tail, std::span<Complex> out) const;

  bool operator==(const DSOperator& other) const;

 private:
  struct Entry {
    std::size_t col;
    Complex value;
  };

  ComplexMatrix kernel_;
  std::vector<Complex> tail_injection_;
  Complex tail_coeff_;
  // Nonzero kernel entries per row; permutations and sparse mixtures apply in
  // O(nnz).
  std::vector<std::vector<Entry>> rows_;
};

struct DSReport {
  bool l1_ok = false;
  bool linf_ok = false;
  bool positive = false;
  /// max_j (sum_i w_i |K_ij|) / w_j
  double max_column_ratio = 0.0;
  /// max(max_i sum_j |K_ij| + |b_i|, |eta|)
  double max_row_sum = 0.0;

  bool contraction() const { return l1_ok && linf_ok; }
};

/// Checks the L1 (weighted column) and Linf (row) substochasticity bounds.
DSReport verify_ds(const DSOperator& op, const TailedMeasureSpace& space, double tol = kDefaultTol);

TailedFunction apply(const DSOperator& op, const TailedFunction& f);

/// T^k f.
TailedFunction apply_power(const DSOperator& op, const TailedFunction& f, std::size_t k);

/// Linear modulus |T|: entrywise absolute values.
DSOperator modulus(const DSOperator& op);

/// Adjoint for <u, v> = sum_i w_i u_i conj(v_i) on tail-0 functions:
/// K*_ij = (w_j / w_i) conj(K_ji), b* = 0, eta* = conj(eta).
DSOperator adjoint(const DSOperator& op, const TailedMeasureSpace& space);

/// Canonical extension of an atom kernel to L1 + Linf: b = 0, eta = 1.
/// Throws std::domain_error when K violates either bound.
DSOperator extend_from_l1(const ComplexMatrix& kernel, const TailedMeasureSpace& space,
                          double tol = kDefaultTol);

/// T f is majorized by f.
bool check_majorization_contract(const DSOperator& op, const TailedFunction& f,
                                 double tol = kDefaultTol);

/// Weighted pairing sum_i w_i u_i conj(v_i) over atoms.
Complex pairing(const TailedFunction& u, const TailedFunction& v);

}  // namespace ergo
