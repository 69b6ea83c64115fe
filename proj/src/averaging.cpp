#include "ergo/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

constexpr double kUnimodularTol = 1e-12;

Complex unimodular_power(Complex lambda, std::size_t k) {
  if (lambda == Complex(1.0) || k == 0) return 1.0;
  return std::polar(1.0, static_cast<double>(k) * std::arg(lambda));
}

// Atom values plus tail value, the working state of every power iteration.
struct Orbit {
  Orbit(const DSOperator& op, const TailedFunction& f)
      : op(op), cur(f.values().begin(), f.values().end()), next(f.size()), tail(f.tail_value()) {
    if (op.size() != f.size()) throw std::invalid_argument("operator shape does not match the space");
  }

  void step() {
    op.apply_atoms(cur, tail, next);
    cur.swap(next);
    tail *= op.tail_coeff();
  }

  const DSOperator& op;
  std::vector<Complex> cur;
  std::vector<Complex> next;
  Complex tail;
};

struct Accumulator {
  explicit Accumulator(std::size_t n) : atoms(n, 0.0) {}

  void add(const Orbit& orbit, Complex weight) {
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] += weight * orbit.cur[i];
    tail += weight * orbit.tail;
  }
  void add(const Orbit& orbit) {
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] += orbit.cur[i];
    tail += orbit.tail;
  }
  TailedFunction mean(const SpacePtr& space, std::size_t n) const {
    const double count = static_cast<double>(n);
    std::vector<Complex> v(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) v[i] = atoms[i] / count;
    return TailedFunction(space, std::move(v), tail / count);
  }

  std::vector<Complex> atoms;
  Complex tail = 0.0;
};

void require_increasing(std::span<const std::size_t> n_list) {
  if (n_list.empty()) throw std::invalid_argument("index list must be non-empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] == 0) throw std::invalid_argument("averaging indices must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw std::invalid_argument("averaging indices must increase strictly");
    }
  }
}

TailedFunction running_maximum(const DSOperator& op, const TailedFunction& f,
                               const BesicovitchSequence* beta, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("maximal function horizon must be >= 1");
  Orbit orbit(op, f);
  Accumulator acc(f.size());
  std::vector<double> best(f.size(), 0.0);
  double best_tail = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    if (k > 0) orbit.step();
    if (beta) {
      acc.add(orbit, (*beta)(k));
    } else {
      acc.add(orbit);
    }
    const double n = static_cast<double>(k + 1);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], std::abs(acc.atoms[i] / n));
    best_tail = std::max(best_tail, std::abs(acc.tail / n));
  }
  return TailedFunction(f.space_ptr(), std::vector<Complex>(best.begin(), best.end()), best_tail);
}

void require_tail_zero(const TailedFunction& f, const char* what) {
  if (f.tail_value() != Complex(0.0)) {
    throw std::invalid_argument(std::string(what) + ": function must vanish on the tail");
  }
}

// Indices of trace entries with 2 n >= n_last.
std::size_t window_start(const std::vector<std::size_t>& indices) {
  const std::size_t last = indices.back();
  std::size_t start = 0;
  while (2 * indices[start] < last) ++start;
  return start;
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("trigonometric polynomial needs at least one term");
  for (const Term& t : terms_) {
    if (std::abs(std::abs(t.lambda) - 1.0) > kUnimodularTol) {
      throw std::invalid_argument("frequencies must be unimodular");
    }
  }
}

Complex TrigPolynomial::operator()(std::size_t k) const {
  Complex sum = 0.0;
  for (const Term& t : terms_) sum += t.z * unimodular_power(t.lambda, k);
  return sum;
}

double TrigPolynomial::coefficient_bound() const {
  double sum = 0.0;
  for (const Term& t : terms_) sum += std::abs(t.z);
  return sum;
}

Perturbation Perturbation::geometric(Complex c, Complex r) {
  if (!(std::abs(r) < 1.0)) throw std::invalid_argument("geometric perturbation needs |r| < 1");
  return Perturbation(Kind::Geometric, c, r);
}

Complex Perturbation::operator()(std::size_t k) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Harmonic:
      return c_ / static_cast<double>(k + 1);
    case Kind::Geometric:
      if (k == 0) return c_;
      if (r_.imag() == 0.0) return c_ * std::pow(r_.real(), static_cast<double>(k));
      return c_ * std::pow(r_, static_cast<double>(k));
  }
  return 0.0;
}

double Perturbation::mean_bound(std::size_t n) const {
  const double dn = static_cast<double>(n);
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Harmonic:
      return std::abs(c_) * (1.0 + std::log(dn)) / dn;
    case Kind::Geometric:
      return std::abs(c_) / (dn * (1.0 - std::abs(r_)));
  }
  return 0.0;
}

BesicovitchSequence::BesicovitchSequence(TrigPolynomial base, Perturbation perturbation,
                                         std::optional<double> bound)
    : base_(std::move(base)),
      perturbation_(perturbation),
      bound_(bound.value_or(base_.coefficient_bound() + perturbation_.sup_abs())) {
  if (!(bound_ > 0.0) || !std::isfinite(bound_)) {
    throw std::invalid_argument("Besicovitch bound C must be positive and finite");
  }
}

BesicovitchSequence BesicovitchSequence::ones() {
  return BesicovitchSequence(TrigPolynomial::constant(1.0), Perturbation::zero());
}

BesicovitchSequence BesicovitchSequence::character(Complex lambda) {
  return BesicovitchSequence(TrigPolynomial::character(lambda), Perturbation::zero());
}

bool BesicovitchSequence::check_bound(std::size_t horizon, double tol) const {
  for (std::size_t k = 0; k < horizon; ++k) {
    if (std::abs((*this)(k)) > bound_ + tol) return false;
  }
  return true;
}

TailedFunction cesaro_avg(const DSOperator& op, const TailedFunction& f, std::size_t n) {
  const std::size_t idx[] = {n};
  return make_trace(op, f, idx).averages.front();
}

TailedFunction weighted_avg(const DSOperator& op, const TailedFunction& f,
                            const BesicovitchSequence& beta, std::size_t n) {
  const std::size_t idx[] = {n};
  return make_trace(op, f, idx, beta).averages.front();
}

AveragesTrace make_trace(const DSOperator& op, const TailedFunction& f,
                         std::span<const std::size_t> n_list,
                         const std::optional<BesicovitchSequence>& beta) {
  require_increasing(n_list);
  AveragesTrace trace;
  trace.source = beta ? "weighted" : "cesaro";
  trace.indices.assign(n_list.begin(), n_list.end());
  trace.averages.reserve(n_list.size());
  Orbit orbit(op, f);
  Accumulator acc(f.size());
  std::size_t next = 0;
  for (std::size_t k = 0; next < n_list.size(); ++k) {
    if (k > 0) orbit.step();
    if (beta) {
      acc.add(orbit, (*beta)(k));
    } else {
      acc.add(orbit);
    }
    if (k + 1 == n_list[next]) {
      trace.averages.push_back(acc.mean(f.space_ptr(), k + 1));
      ++next;
    }
  }
  return trace;
}

TailedFunction maximal_fn(const DSOperator& op, const TailedFunction& f, std::size_t horizon) {
  return running_maximum(op, f, nullptr, horizon);
}

TailedFunction weighted_maximal_fn(const DSOperator& op, const TailedFunction& f,
                                   const BesicovitchSequence& beta, std::size_t horizon) {
  return running_maximum(op, f, &beta, horizon);
}

Weak11Result check_weak11(const DSOperator& op, const TailedFunction& f, double lambda,
                          std::size_t horizon) {
  if (!op.is_positive()) {
    throw std::invalid_argument("check_weak11: operator must be positive; pass its modulus");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("check_weak11: lambda must be positive");
  require_tail_zero(f, "check_weak11");
  Weak11Result r;
  r.lhs = distribution(maximal_fn(op, f.abs(), horizon), lambda);
  r.rhs = norm_lp(f, 1.0) / lambda;
  r.ok = r.lhs <= r.rhs + kDefaultTol;
  return r;
}

Weak11Result check_weighted_weak11(const DSOperator& op, const TailedFunction& f,
                                   const BesicovitchSequence& beta, double lambda,
                                   std::size_t horizon) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_weighted_weak11: lambda must be positive");
  require_tail_zero(f, "check_weighted_weak11");
  Weak11Result r;
  r.lhs = distribution(weighted_maximal_fn(modulus(op), f.abs(), beta, horizon), lambda);
  r.rhs = 6.0 * beta.bound() * norm_lp(f, 1.0) / lambda;
  r.ok = r.lhs <= r.rhs + kDefaultTol;
  return r;
}

double decomposition_identity_residual(const DSOperator& op, const TailedFunction& f,
                                       const BesicovitchSequence& beta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("decomposition_identity_residual: n must be >= 1");
  const double c = beta.bound();
  Orbit orbit(op, f);
  Accumulator weighted(f.size());
  Accumulator re_part(f.size());
  Accumulator im_part(f.size());
  Accumulator plain(f.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) orbit.step();
    const Complex b = beta(k);
    weighted.add(orbit, b);
    re_part.add(orbit, b.real() + c);
    im_part.add(orbit, b.imag() + c);
    plain.add(orbit);
  }
  const auto& space = f.space_ptr();
  const TailedFunction lhs = weighted.mean(space, n);
  const TailedFunction rhs = re_part.mean(space, n) + Complex(0.0, 1.0) * im_part.mean(space, n) -
                             Complex(c, c) * plain.mean(space, n);
  return sup_distance(lhs, rhs);
}

double besicovitch_defect(const BesicovitchSequence& beta, const TrigPolynomial& poly,
                          std::size_t n) {
  if (n == 0) throw std::invalid_argument("besicovitch_defect: n must be >= 1");
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::abs(beta(k) - poly(k));
  return sum / static_cast<double>(n);
}

LimitCandidate limit_candidate(const DSOperator& op, const TailedFunction& f,
                               const AveragesTrace& trace) {
  if (trace.averages.empty()) throw std::invalid_argument("limit_candidate: empty trace");
  if (trace.source != "cesaro" || !op.is_permutation()) {
    return {trace.averages.back(), "last-element"};
  }
  // Row i of a permutation kernel reads atom sigma(i); T^k f at i is f(sigma^k(i)).
  const std::size_t n = op.size();
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (op.kernel()(i, j) != Complex(0.0)) sigma[i] = j;
    }
  }
  std::vector<Complex> means(n);
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t i = start; !seen[i]; i = sigma[i]) {
      seen[i] = true;
      cycle.push_back(i);
    }
    Complex sum = 0.0;
    for (std::size_t i : cycle) sum += f.value(i);
    const Complex mean = sum / static_cast<double>(cycle.size());
    for (std::size_t i : cycle) means[i] = mean;
  }
  return {TailedFunction(f.space_ptr(), std::move(means), f.tail_value()), "orbit-mean"};
}

EgorovCertificate egorov_certify(const AveragesTrace& trace, const TailedFunction& limit,
                                 double eps, double tol) {
  if (trace.averages.empty() || trace.averages.size() != trace.indices.size()) {
    throw std::invalid_argument("egorov_certify: empty or malformed trace");
  }
  if (!(eps >= 0.0) || !(tol >= 0.0)) throw std::invalid_argument("egorov_certify: bad tolerances");
  const auto& space = limit.space();
  for (const auto& fn : trace.averages) {
    if (!fn.same_space(limit)) throw std::invalid_argument("egorov_certify: trace and limit differ in space");
  }

  const std::size_t atoms = limit.size();
  std::vector<double> dev(atoms, 0.0);
  double tail_dev = 0.0;
  for (std::size_t e = window_start(trace.indices); e < trace.averages.size(); ++e) {
    const auto& fn = trace.averages[e];
    for (std::size_t i = 0; i < atoms; ++i) dev[i] = std::max(dev[i], std::abs(limit.value(i) - fn.value(i)));
    tail_dev = std::max(tail_dev, std::abs(limit.tail_value() - fn.tail_value()));
  }

  EgorovCertificate cert;
  cert.tol = tol;
  cert.eps = eps;
  std::vector<bool> exceptional(atoms, false);
  for (std::size_t i = 0; i < atoms; ++i) {
    if (dev[i] > tol) {
      exceptional[i] = true;
      cert.exceptional_atoms.push_back(i);
      cert.exceptional_measure += space.weight(i);
    }
  }
  if (space.has_tail() && tail_dev > tol) {
    cert.tail_exceptional = true;
    cert.exceptional_measure = kInf;
  }
  for (std::size_t e = 0; e < trace.averages.size(); ++e) {
    const auto& fn = trace.averages[e];
    double sup = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      if (!exceptional[i]) sup = std::max(sup, std::abs(limit.value(i) - fn.value(i)));
    }
    if (space.has_tail() && !cert.tail_exceptional) {
      sup = std::max(sup, std::abs(limit.tail_value() - fn.tail_value()));
    }
    cert.sup_decay.emplace_back(trace.indices[e], sup);
  }
  cert.certified = cert.exceptional_measure <= eps;
  return cert;
}

PerturbationCheck au_perturbation_check(const AveragesTrace& target, const AveragesTrace& approx,
                                        const TailedFunction& approx_limit, double gap,
                                        double eps, double tol) {
  if (target.indices != approx.indices) {
    throw std::invalid_argument("au_perturbation_check: traces must share their index list");
  }
  if (target.indices.empty()) throw std::invalid_argument("au_perturbation_check: empty traces");
  PerturbationCheck check;
  for (std::size_t e = window_start(target.indices); e < target.averages.size(); ++e) {
    check.observed_gap = std::max(check.observed_gap, sup_distance(target.averages[e], approx.averages[e]));
  }
  check.hypothesis_ok = check.observed_gap <= gap + kDefaultTol;
  check.certificate = egorov_certify(target, approx_limit, eps, tol + 2.0 * gap);
  return check;
}

}  // namespace ergo
