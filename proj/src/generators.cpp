#include "ergo/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ergo::gen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Complex random_phase(Rng& rng) { return std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi)); }

std::vector<std::size_t> random_perm(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, 0, i - 1)]);
  return p;
}

DSOperator finish(ComplexMatrix kernel, std::vector<Complex> b, Complex eta, const TailedMeasureSpace& space) {
  scale_to_ds(kernel, b, space);
  return DSOperator(std::move(kernel), std::move(b), eta);
}

}  // namespace

Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double uniform(Rng& rng, double lo, double hi) {
  // 53 random bits mapped to [0, 1); std::uniform_real_distribution is not
  // portable across standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::size_t>(rng() % span);
}

SpacePtr random_space(Rng& rng, std::size_t atoms, bool tail) {
  std::vector<double> w(atoms);
  for (double& x : w) x = uniform(rng, 0.1, 2.0);
  return make_space(std::move(w), tail);
}

TailedFunction random_function(Rng& rng, const SpacePtr& space, double scale, bool with_tail) {
  std::vector<Complex> v(space->size());
  for (Complex& x : v) {
    x = uniform(rng, 0.0, 1.0) < 0.2 ? Complex(0.0) : uniform(rng, 0.0, scale) * random_phase(rng);
  }
  Complex tail = 0.0;
  if (with_tail && space->has_tail()) tail = uniform(rng, 0.05, scale) * random_phase(rng);
  return TailedFunction(space, std::move(v), tail);
}

std::string to_string(OperatorFamily family) {
  switch (family) {
    case OperatorFamily::Permutation:
      return "permutation";
    case OperatorFamily::BirkhoffMixture:
      return "birkhoff";
    case OperatorFamily::PositiveKernel:
      return "positive";
    case OperatorFamily::ComplexPhase:
      return "complex-phase";
  }
  return {};
}

void scale_to_ds(ComplexMatrix& kernel, std::vector<Complex>& tail_injection,
                 const TailedMeasureSpace& space) {
  const std::size_t n = kernel.rows();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i) column += space.weight(i) * std::abs(kernel(i, j));
    worst = std::max(worst, column / space.weight(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(tail_injection[i]);
    for (std::size_t j = 0; j < n; ++j) row += std::abs(kernel(i, j));
    worst = std::max(worst, row);
  }
  if (worst == 0.0 || worst == 1.0) return;
  // Dividing can round a sum a hair above 1; nudge the scale down by an ulp-sized margin.
  const double s = worst * (1.0 + 4e-16 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) kernel(i, j) /= s;
    tail_injection[i] /= s;
  }
}

DSOperator random_permutation(Rng& rng, const TailedMeasureSpace& space) {
  const std::size_t n = space.size();
  const auto p = random_perm(rng, n);
  ComplexMatrix k(n, n);
  for (std::size_t j = 0; j < n; ++j) k(p[j], j) = 1.0;
  return finish(std::move(k), std::vector<Complex>(n, 0.0), 1.0, space);
}

DSOperator birkhoff_mixture(Rng& rng, const TailedMeasureSpace& space, std::size_t terms) {
  const std::size_t n = space.size();
  std::vector<double> coeff(std::max<std::size_t>(terms, 1));
  for (double& c : coeff) c = uniform(rng, 0.05, 1.0);
  const double total = std::accumulate(coeff.begin(), coeff.end(), 0.0);
  ComplexMatrix k(n, n);
  for (double c : coeff) {
    const auto p = random_perm(rng, n);
    for (std::size_t j = 0; j < n; ++j) k(p[j], j) += c / total;
  }
  return finish(std::move(k), std::vector<Complex>(n, 0.0), 1.0, space);
}

DSOperator random_positive(Rng& rng, const TailedMeasureSpace& space, double density) {
  const std::size_t n = space.size();
  ComplexMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (uniform(rng, 0.0, 1.0) < density) k(i, j) = uniform(rng, 0.0, 1.0);
    }
  }
  std::vector<Complex> b(n, 0.0);
  Complex eta = 1.0;
  if (space.has_tail()) {
    for (Complex& x : b) x = uniform(rng, 0.0, 1.0) < 0.3 ? uniform(rng, 0.0, 0.5) : 0.0;
    eta = uniform(rng, 0.0, 1.0);
  }
  return finish(std::move(k), std::move(b), eta, space);
}

DSOperator complex_phase(Rng& rng, const TailedMeasureSpace& space) {
  const std::size_t n = space.size();
  const DSOperator base = random_positive(rng, space);
  ComplexMatrix k = base.kernel();
  std::vector<Complex> b = base.tail_injection();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) *= random_phase(rng);
    b[i] *= random_phase(rng);
  }
  const Complex eta = uniform(rng, 0.0, 1.0) * random_phase(rng);
  return DSOperator(std::move(k), std::move(b), eta);
}

DSOperator random_operator(Rng& rng, const TailedMeasureSpace& space, OperatorFamily family) {
  switch (family) {
    case OperatorFamily::Permutation:
      return random_permutation(rng, space);
    case OperatorFamily::BirkhoffMixture:
      return birkhoff_mixture(rng, space, uniform_index(rng, 2, 5));
    case OperatorFamily::PositiveKernel:
      return random_positive(rng, space, uniform(rng, 0.1, 1.0));
    case OperatorFamily::ComplexPhase:
      return complex_phase(rng, space);
  }
  throw std::logic_error("random_operator: unknown family");
}

DSOperator cyclic_shift(std::size_t n, std::size_t step) {
  ComplexMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) k(i, (i + n - step % n) % n) = 1.0;
  return DSOperator(std::move(k), std::vector<Complex>(n, 0.0), 1.0);
}

BesicovitchSequence random_besicovitch(Rng& rng) {
  std::vector<TrigPolynomial::Term> terms(uniform_index(rng, 1, 3));
  for (auto& t : terms) {
    t.z = uniform(rng, 0.1, 1.0) * random_phase(rng);
    t.lambda = random_phase(rng);
  }
  Perturbation pert = Perturbation::zero();
  switch (uniform_index(rng, 0, 2)) {
    case 1:
      pert = Perturbation::harmonic(uniform(rng, 0.0, 1.0) * random_phase(rng));
      break;
    case 2:
      pert = Perturbation::geometric(uniform(rng, 0.0, 1.0), uniform(rng, -0.9, 0.9));
      break;
    default:
      break;
  }
  return BesicovitchSequence(TrigPolynomial(std::move(terms)), pert);
}

}  // namespace ergo::gen
