#include "ergo/ds_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergo/rearrangement.hpp"

namespace ergo {

namespace {

bool is_nonneg_real(Complex z) { return z.imag() == 0.0 && z.real() >= 0.0; }

void require_shape(const DSOperator& op, std::size_t atoms) {
  if (op.size() != atoms) throw std::invalid_argument("operator shape does not match the space");
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DSOperator::DSOperator(ComplexMatrix kernel, std::vector<Complex> tail_injection, Complex tail_coeff)
    : kernel_(std::move(kernel)), tail_injection_(std::move(tail_injection)), tail_coeff_(tail_coeff) {
  const std::size_t n = kernel_.rows();
  if (n == 0 || kernel_.cols() != n) throw std::invalid_argument("kernel must be square and non-empty");
  if (n > kMaxAtoms) throw std::invalid_argument("kernel exceeds the maximum supported size");
  if (tail_injection_.size() != n) throw std::invalid_argument("tail injection size mismatch");
  rows_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex k = kernel_(i, j);
      if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) {
        throw std::invalid_argument("kernel entries must be finite");
      }
      if (k != Complex(0.0)) rows_[i].push_back({j, k});
    }
  }
}

DSOperator DSOperator::identity(std::size_t n) {
  return DSOperator(ComplexMatrix::identity(n), std::vector<Complex>(n, 0.0), 1.0);
}

bool DSOperator::is_positive() const {
  for (const auto& row : rows_) {
    for (const Entry& e : row) {
      if (!is_nonneg_real(e.value)) return false;
    }
  }
  return std::all_of(tail_injection_.begin(), tail_injection_.end(), is_nonneg_real) &&
         is_nonneg_real(tail_coeff_);
}

bool DSOperator::is_permutation() const {
  if (tail_coeff_ != Complex(1.0)) return false;
  for (Complex b : tail_injection_) {
    if (b != Complex(0.0)) return false;
  }
  std::vector<bool> hit(size(), false);
  for (const auto& row : rows_) {
    if (row.size() != 1 || row[0].value != Complex(1.0) || hit[row[0].col]) return false;
    hit[row[0].col] = true;
  }
  return true;
}

std::vector<std::size_t> DSOperator::permutation_targets() const {
  if (!is_permutation()) throw std::logic_error("operator is not a permutation");
  std::vector<std::size_t> target(size());
  for (std::size_t i = 0; i < size(); ++i) target[rows_[i][0].col] = i;
  return target;
}

void DSOperator::apply_atoms(std::span<const Complex> values, Complex tail,
                             std::span<Complex> out) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Complex acc = tail_injection_[i] * tail;
    for (const Entry& e : rows_[i]) acc += e.value * values[e.col];
    out[i] = acc;
  }
}

bool DSOperator::operator==(const DSOperator& other) const {
  return kernel_ == other.kernel_ && tail_injection_ == other.tail_injection_ &&
         tail_coeff_ == other.tail_coeff_;
}

DSReport verify_ds(const DSOperator& op, const TailedMeasureSpace& space, double tol) {
  require_shape(op, space.size());
  const std::size_t n = op.size();
  const auto& k = op.kernel();
  DSReport report;
  report.positive = op.is_positive();

  report.l1_ok = true;
  for (std::size_t j = 0; j < n; ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i) column += space.weight(i) * std::abs(k(i, j));
    report.max_column_ratio = std::max(report.max_column_ratio, column / space.weight(j));
    if (column > space.weight(j) + tol) report.l1_ok = false;
  }

  report.max_row_sum = std::abs(op.tail_coeff());
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(op.tail_injection()[i]);
    for (std::size_t j = 0; j < n; ++j) row += std::abs(k(i, j));
    report.max_row_sum = std::max(report.max_row_sum, row);
  }
  report.linf_ok = report.max_row_sum <= 1.0 + tol;
  return report;
}

TailedFunction apply(const DSOperator& op, const TailedFunction& f) {
  require_shape(op, f.size());
  std::vector<Complex> out(f.size());
  op.apply_atoms(f.values(), f.tail_value(), out);
  return TailedFunction(f.space_ptr(), std::move(out), op.tail_coeff() * f.tail_value());
}

TailedFunction apply_power(const DSOperator& op, const TailedFunction& f, std::size_t k) {
  TailedFunction g = f;
  for (std::size_t i = 0; i < k; ++i) g = apply(op, g);
  return g;
}

DSOperator modulus(const DSOperator& op) {
  const std::size_t n = op.size();
  ComplexMatrix k(n, n);
  std::vector<Complex> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = std::abs(op.kernel()(i, j));
    b[i] = std::abs(op.tail_injection()[i]);
  }
  return DSOperator(std::move(k), std::move(b), std::abs(op.tail_coeff()));
}

DSOperator adjoint(const DSOperator& op, const TailedMeasureSpace& space) {
  require_shape(op, space.size());
  const std::size_t n = op.size();
  ComplexMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k(i, j) = (space.weight(j) / space.weight(i)) * std::conj(op.kernel()(j, i));
    }
  }
  return DSOperator(std::move(k), std::vector<Complex>(n, 0.0), std::conj(op.tail_coeff()));
}

DSOperator extend_from_l1(const ComplexMatrix& kernel, const TailedMeasureSpace& space, double tol) {
  DSOperator op(kernel, std::vector<Complex>(kernel.rows(), 0.0), 1.0);
  const DSReport report = verify_ds(op, space, tol);
  if (!report.l1_ok) throw std::domain_error("extend_from_l1: kernel is not an L1 contraction");
  if (!report.linf_ok) throw std::domain_error("extend_from_l1: kernel is not an Linf contraction");
  return op;
}

bool check_majorization_contract(const DSOperator& op, const TailedFunction& f, double tol) {
  return majorizes(f, apply(op, f), tol);
}

Complex pairing(const TailedFunction& u, const TailedFunction& v) {
  if (!u.same_space(v)) throw std::invalid_argument("pairing: different spaces");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += u.space().weight(i) * u.value(i) * std::conj(v.value(i));
  }
  return sum;
}

}  // namespace ergo
