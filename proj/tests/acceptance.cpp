// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ergo/averaging.hpp"
#include "ergo/cli.hpp"
#include "ergo/generators.hpp"
#include "ergo/norms.hpp"
#include "ergo/pointwise.hpp"
#include "ergo/rearrangement.hpp"

using namespace ergo;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Verdict ds_contraction_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr gen::OperatorFamily kFamilies[] = {gen::OperatorFamily::Permutation,
                                               gen::OperatorFamily::BirkhoffMixture,
                                               gen::OperatorFamily::ComplexPhase};
  double worst_l1 = -kInf, worst_linf = -kInf;
  std::size_t checks = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = gen::instance_rng(1001, i);
    const auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 64), i % 2 == 0);
    const DSOperator op = gen::random_operator(rng, *space, kFamilies[i % 3]);
    for (int j = 0; j < 20; ++j) {
      const auto f = gen::random_function(rng, space, gen::uniform(rng, 0.1, 10.0), j % 2 == 1);
      const auto tf = apply(op, f);
      if (f.tail_value() == Complex(0.0)) {
        const double gap = norm_lp(tf, 1.0) - norm_lp(f, 1.0);
        worst_l1 = std::max(worst_l1, gap);
        v.require(gap <= 1e-12, fmt("L1 bound broken by %.3g on operator %llu", gap, (unsigned long long)i));
      }
      const double gap = norm_lp(tf, kInf) - norm_lp(f, kInf);
      worst_linf = std::max(worst_linf, gap);
      v.require(gap <= 1e-12, fmt("Linf bound broken by %.3g on operator %llu", gap, (unsigned long long)i));
      v.require(check_majorization_contract(op, f), fmt("Tf not majorized by f on operator %llu", (unsigned long long)i));
      ++checks;
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, fmt("runtime %.1f s exceeds 30 s", secs));
  if (v.pass) {
    v.detail = fmt("%zu pairs, max L1 gap %.2e, max Linf gap %.2e, %.2f s", checks, worst_l1, worst_linf, secs);
  }
  return v;
}

// ---------------------------------------------------------------- 2

Verdict weak11_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  cli::ExperimentConfig config;
  config.kind = "weak11-suite";
  config.seed = 42;
  config.params = {{"instances", "500"}, {"weighted-instances", "500"}, {"horizon", "200"}};
  std::ostringstream out, err;
  const int code = cli::run(config, out, err);
  const double secs = seconds_since(t0);
  v.require(code == cli::kExitOk, "suite exit code " + std::to_string(code) + ": " + err.str());
  if (code != cli::kExitOk && code != cli::kExitPropertyFailure) return v;
  const Json result = Json::parse(out.str());
  const auto plain = result["weak11"]["violations"].get<std::size_t>();
  const auto weighted = result["weighted_weak11"]["violations"].get<std::size_t>();
  v.require(plain == 0 && weighted == 0, fmt("%zu + %zu violations", plain, weighted));
  v.require(secs < 60.0, fmt("runtime %.1f s exceeds 60 s", secs));
  if (v.pass) {
    v.detail = fmt("500 + 500 instances, 0 violations, max lhs/rhs %.3f and %.3f, %.2f s",
                   result["weak11"]["max_lhs_over_rhs"].get<double>(),
                   result["weighted_weak11"]["max_lhs_over_rhs"].get<double>(), secs);
  }
  return v;
}

// ---------------------------------------------------------------- 3

Verdict decomposition_identity() {
  Verdict v;
  double worst = 0.0;
  constexpr gen::OperatorFamily kFamilies[] = {
      gen::OperatorFamily::Permutation, gen::OperatorFamily::BirkhoffMixture,
      gen::OperatorFamily::PositiveKernel, gen::OperatorFamily::ComplexPhase};
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = gen::instance_rng(3003, i);
    const auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 32), i % 2 == 0);
    const DSOperator op = gen::random_operator(rng, *space, kFamilies[i % 4]);
    const auto f = gen::random_function(rng, space, gen::uniform(rng, 0.1, 5.0), i % 3 == 0);
    const auto beta = gen::random_besicovitch(rng);
    const double r = decomposition_identity_residual(op, f, beta, gen::uniform_index(rng, 1, 100));
    worst = std::max(worst, r);
    v.require(r <= 1e-12, fmt("residual %.3g on instance %llu", r, (unsigned long long)i));
  }
  if (v.pass) v.detail = fmt("200 instances, max residual %.2e", worst);
  return v;
}

// ---------------------------------------------------------------- 4

// Visits every multiset of (weight, value) pairs of size 1..max_atoms.
// Rearrangement ignores atom order, so multisets cover every function.
void for_each_multiset(std::size_t kinds, std::size_t max_atoms,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    if (!pick.empty()) visit(pick);
    if (pick.size() == max_atoms) return;
    for (std::size_t k = from; k < kinds; ++k) {
      pick.push_back(k);
      grow(k);
      pick.pop_back();
    }
  };
  grow(0);
}

Verdict rearrangement_oracle() {
  Verdict v;
  const double weights[] = {0.5, 1.0, 2.0};
  const double values[] = {0.0, 1.0, 2.0, 3.0};
  constexpr double kStep = 1e-3;
  constexpr std::size_t kGrid = 3001;  // lambda = 0, 0.001, ..., 3
  std::size_t cases = 0;
  double worst_grid = 0.0, worst_integral = 0.0;
  std::vector<double> dist(kGrid);
  for_each_multiset(12, 6, [&](const std::vector<std::size_t>& pick) {
    if (!v.pass) return;
    ++cases;
    std::vector<double> w;
    std::vector<Complex> x;
    for (std::size_t k : pick) {
      w.push_back(weights[k / 4]);
      x.push_back(values[k % 4]);
    }
    const TailedFunction f(make_space(w, false), x);
    const StepFunction sf = rearrange(f);

    for (std::size_t g = 0; g < kGrid; ++g) dist[g] = distribution(f, static_cast<double>(g) * kStep);
    // inf{lambda on the grid : mu{|f| > lambda} <= t}; dist is non-increasing.
    for (int q = 1; q <= 52; ++q) {
      const double t = 0.25 * q;
      const auto it = std::lower_bound(dist.begin(), dist.end(), t, std::greater<>());
      const double oracle = static_cast<double>(it - dist.begin()) * kStep;
      const double gap = std::abs(oracle - sf(t));
      worst_grid = std::max(worst_grid, gap);
      v.require(gap <= kStep + 1e-12, fmt("f*(%.2f) off by %.3g on case %zu", t, gap, cases));
    }
    for (double lambda : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
      v.require(distribution(f, lambda) == sf.level_measure(lambda), fmt("equimeasurability broken on case %zu", cases));
    }
    const double l1 = norm_lp(f, 1.0);
    const double integral = sf.steps() == 0 ? 0.0 : cumulative(sf, sf.support_end());
    worst_integral = std::max(worst_integral, std::abs(integral - l1));
    v.require(std::abs(integral - l1) <= 1e-12, fmt("integral of f* differs from L1 on case %zu", cases));
  });
  if (v.pass) {
    v.detail = fmt("%zu multisets, max grid gap %.2e, max |int f* - ||f||_1| %.2e", cases, worst_grid, worst_integral);
  }
  return v;
}

// ---------------------------------------------------------------- 5

// min_{c >= 0} ||(|f| - c)_+||_1 + c: grid scan over [0, ||f||_inf] then
// ternary refinement of the convex objective.
double truncation_oracle(const TailedFunction& f) {
  auto objective = [&](double c) {
    double sum = c;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f.space().weight(i) * std::max(std::abs(f.value(i)) - c, 0.0);
    return sum;
  };
  const double top = norm_lp(f, kInf);
  if (top == 0.0) return 0.0;
  constexpr int kGrid = 4000;
  int best = 0;
  for (int k = 1; k <= kGrid; ++k) {
    if (objective(top * k / kGrid) < objective(top * best / kGrid)) best = k;
  }
  double lo = top * std::max(best - 1, 0) / kGrid;
  double hi = top * std::min(best + 1, kGrid) / kGrid;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (objective(a) <= objective(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return objective(0.5 * (lo + hi));
}

Verdict norm_oracles() {
  Verdict v;
  double lux = 0.0, sum = 0.0, lor = 0.0, mar = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = gen::instance_rng(5005, i);
    const auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 40), i % 2 == 0);
    const auto f = gen::random_function(rng, space, gen::uniform(rng, 0.1, 10.0));
    for (double p : {1.5, 2.0, 4.0}) {
      const double gap = std::abs(luxemburg_norm(f, OrliczFunction::power(p)) - norm_lp(f, p));
      lux = std::max(lux, gap);
      v.require(gap <= 1e-8, fmt("Luxemburg p=%.1f off by %.3g on instance %llu", p, gap, (unsigned long long)i));
    }
    const double s = std::abs(norm_l1_plus_linf(f) - truncation_oracle(f));
    sum = std::max(sum, s);
    v.require(s <= 1e-6, fmt("L1+Linf off by %.3g on instance %llu", s, (unsigned long long)i));
    const double l1 = norm_lp(f, 1.0);
    const double lg = std::abs(lorentz_norm(f, ConcaveWeight::identity()) - l1);
    lor = std::max(lor, lg / std::max(1.0, l1));
    v.require(lg <= 1e-12 * std::max(1.0, l1), fmt("Lorentz(t) differs from L1 by %.3g", lg));
    const double mg = std::abs(marcinkiewicz_norm(f, ConcaveWeight::identity()) - norm_lp(f, kInf));
    mar = std::max(mar, mg);
    v.require(mg <= 1e-10, fmt("Marcinkiewicz(t) differs from Linf by %.3g", mg));
  }
  if (v.pass) {
    v.detail = fmt("200 functions; max gaps: Luxemburg %.1e, L1+Linf %.1e, Lorentz rel %.1e, Marcinkiewicz %.1e", lux,
                   sum, lor, mar);
  }
  return v;
}

// ---------------------------------------------------------------- 6

Verdict paper_example() {
  Verdict v;
  cli::ExperimentConfig config;
  config.kind = "paper-example";
  config.params = {{"K", "30"}, {"grid-max", "1e6"}};
  std::ostringstream out, err;
  const int code = cli::run(config, out, err);
  v.require(code == cli::kExitOk, "paper-example exit code " + std::to_string(code) + " " + err.str());
  if (code != cli::kExitOk && code != cli::kExitPropertyFailure) return v;
  const Json result = Json::parse(out.str());
  const Json& checks = result["checks"];
  v.require(checks["f_star_non_increasing"] == true, "f* is not non-increasing");
  v.require(checks["f_star_below_total_mass"].get<double>() < 0.06, "f* left of the total mass is not below 0.06");
  v.require(checks["masses_strictly_increasing"] == true, "truncated masses are not strictly increasing");
  v.require(checks["l1_mass_to_1e6"].get<double>() > 10.0, "L1 mass to 1e6 does not exceed 10");
  // Independent recheck of f* from the emitted table.
  const StepFunction sf = step_function_from_json(result["rearrangement"]);
  v.require(sf.is_non_increasing(), "emitted f* table is not non-increasing");
  if (v.pass) {
    v.detail = fmt("f* left of total mass = %.4f, L1 mass to 1e6 = %.2f, %zu steps",
                   checks["f_star_below_total_mass"].get<double>(), checks["l1_mass_to_1e6"].get<double>(), sf.steps());
  }
  return v;
}

// ---------------------------------------------------------------- 7

Verdict egorov_on_rotation() {
  Verdict v;
  constexpr std::size_t N = 257;
  auto rng = gen::instance_rng(7007, 0);
  const auto space = uniform_space(N, false);
  const auto f = gen::random_function(rng, space, 1.0);
  const DSOperator rotation = gen::cyclic_shift(N, 100);
  std::vector<std::size_t> n_list;
  for (std::size_t n = 10; n <= 10000; n += 10) n_list.push_back(n);
  const auto trace = make_trace(rotation, f, n_list);
  const auto candidate = limit_candidate(rotation, f, trace);
  v.require(candidate.rule == "orbit-mean", "limit candidate is not the orbit mean");
  // Tolerance: the rate bound at the start of the certified window.
  const auto cert = egorov_certify(trace, candidate.limit, 0.0, 2.0 * N / 5000.0);
  v.require(cert.certified && cert.exceptional_measure == 0.0,
            fmt("exceptional measure %.3g", cert.exceptional_measure));
  double worst_ratio = 0.0;
  for (auto [n, sup] : cert.sup_decay) {
    if (n < 1000) continue;
    const double bound = 2.0 * N / static_cast<double>(n);
    worst_ratio = std::max(worst_ratio, sup / bound);
    v.require(sup <= bound, fmt("sup_decay(%zu) = %.3g exceeds %.3g", n, sup, bound));
  }
  if (v.pass) v.detail = fmt("exceptional measure 0, max sup_decay / (2N/n) = %.3f over n >= 1000", worst_ratio);
  return v;
}

// ---------------------------------------------------------------- 8

std::size_t modular_inverse(std::size_t r, std::size_t n) {
  for (std::size_t k = 1; k < n; ++k) {
    if ((r * k) % n == 1) return k;
  }
  return 0;
}

Verdict wiener_wintner() {
  Verdict v;
  const std::size_t horizons[] = {100, 1000, 10000};
  const auto dense = dense_indices(10000);

  // Integer shift, single visit at 0.
  {
    const std::size_t W = 10001;
    const auto space = uniform_space(W, true);
    std::vector<Complex> x(W);
    x[0] = 1.0;
    const TailedFunction f(space, x);
    const auto rows = wiener_wintner_sweep(MPTSystem::integer_shift(W), f, 0, unit_circle_grid(64), dense);
    for (const auto& row : rows) {
      for (std::size_t n : horizons) {
        const auto rep = oscillation(row.series.prefix(n));
        const double bound = 2.0 / (static_cast<double>(n) / 2.0);
        v.require(rep.delta_real <= bound && rep.delta_imag <= bound,
                  fmt("shift: Delta %.3g exceeds %.3g at n=%zu", std::max(rep.delta_real, rep.delta_imag), bound, n));
      }
    }
  }

  // Cyclic rotation against the Fourier coefficient.
  constexpr std::size_t N = 257;
  constexpr std::size_t r = 100;
  const std::size_t r_inv = modular_inverse(r, N);
  auto rng = gen::instance_rng(8008, 0);
  const auto space = uniform_space(N, false);
  const auto f = gen::random_function(rng, space, 1.0);
  const double sup = norm_lp(f, kInf);
  const std::size_t omega = 17;
  const auto roots = unit_circle_grid(N);
  const auto rows = wiener_wintner_sweep(MPTSystem::cyclic(N, r), f, omega, roots, dense);
  double worst_oracle = 0.0, worst_ratio = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const auto& row = rows[j];
    // x = omega + k r (mod N)  <=>  k = (x - omega) r^{-1} (mod N).
    Complex coefficient = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      const std::size_t k = ((x + N - omega) % N) * r_inv % N;
      const std::size_t phase = (j * k) % N;
      coefficient += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) / N) * f.value(x);
    }
    coefficient /= static_cast<double>(N);
    for (std::size_t e = 0; e < dense.size(); ++e) {
      if (dense[e] % N != 0) continue;
      const double gap = std::abs(row.series.values[e] - coefficient);
      worst_oracle = std::max(worst_oracle, gap);
      v.require(gap <= 1e-10, fmt("cyclic: full-period average off the Fourier coefficient by %.3g", gap));
    }
    for (std::size_t n : horizons) {
      const auto rep = oscillation(row.series.prefix(n));
      const double bound = 4.0 * N * sup / static_cast<double>(n);
      worst_ratio = std::max(worst_ratio, std::max(rep.delta_real, rep.delta_imag) / bound);
      v.require(rep.delta_real <= bound && rep.delta_imag <= bound,
                fmt("cyclic: Delta exceeds %.3g at n=%zu, lambda index %zu", bound, n, j));
    }
    const double tail_gap = std::abs(row.series.values.back() - coefficient);
    v.require(tail_gap <= 2.0 * N * sup / 10000.0, fmt("cyclic: A_10000 is %.3g from the coefficient", tail_gap));
  }
  if (v.pass) {
    v.detail = fmt("64 + 257 frequencies; max Fourier oracle gap %.1e, max Delta / bound %.3f", worst_oracle,
                   worst_ratio);
  }
  return v;
}

// ---------------------------------------------------------------- 9

Verdict besicovitch_defects() {
  Verdict v;
  double tightest = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = gen::instance_rng(9009, i);
    std::vector<TrigPolynomial::Term> terms;
    for (std::size_t j = 0, s = gen::uniform_index(rng, 1, 3); j < s; ++j) {
      terms.push_back({Complex(gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2)),
                       std::polar(1.0, gen::uniform(rng, 0.0, 2.0 * std::numbers::pi))});
    }
    const TrigPolynomial p(terms);
    const double c = gen::uniform(rng, 0.01, 3.0);
    const BesicovitchSequence harmonic(p, Perturbation::harmonic(c));
    const BesicovitchSequence clean(p, Perturbation::zero());
    for (std::size_t n : {100, 1000, 10000}) {
      const double d = besicovitch_defect(harmonic, p, n);
      const double bound = c * (1.0 + std::log(static_cast<double>(n))) / static_cast<double>(n);
      tightest = std::max(tightest, d / bound);
      v.require(d <= bound, fmt("harmonic defect %.3g exceeds %.3g at n=%zu", d, bound, n));
      v.require(besicovitch_defect(clean, p, n) == 0.0, "zero perturbation gives a nonzero defect");
    }
  }
  if (v.pass) v.detail = fmt("20 polynomials x 3 horizons, max defect / bound %.3f, zero perturbation exactly 0", tightest);
  return v;
}

// ---------------------------------------------------------------- 10

Verdict r_mu_round_trip() {
  Verdict v;
  for (std::uint64_t i = 0; i < 10000 && v.pass; ++i) {
    auto rng = gen::instance_rng(10010, i);
    const auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 32), i % 4 != 0);
    const auto f = gen::random_function(rng, space, gen::uniform(rng, 0.01, 100.0));
    const double eps = gen::uniform(rng, 1e-3, 50.0);
    const auto [g, h] = split_r_mu(f, eps);
    v.require(g + h == f, fmt("g + h != f on instance %llu", (unsigned long long)i));
    v.require(norm_lp(h, kInf) <= eps, fmt("||h||_inf > eps on instance %llu", (unsigned long long)i));
    v.require(std::isfinite(norm_lp(g, 1.0)), fmt("||g||_1 infinite on instance %llu", (unsigned long long)i));
  }
  for (std::size_t atoms : {1, 5, 64}) {
    v.require(!in_r_mu(TailedFunction::one(uniform_space(atoms, true))), "constant 1 reported in R_mu");
  }
  if (v.pass) v.detail = "10000 splits exact; constant 1 outside R_mu on tailed spaces";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*check)();
  };
  const Criterion criteria[] = {
      {"1 DS contraction suite", ds_contraction_suite},
      {"2 weak (1,1) suite", weak11_suite},
      {"3 decomposition identity", decomposition_identity},
      {"4 rearrangement oracle", rearrangement_oracle},
      {"5 norm oracles", norm_oracles},
      {"6 slowly decaying series example", paper_example},
      {"7 Egorov certificate on a rotation", egorov_on_rotation},
      {"8 Wiener-Wintner sweep", wiener_wintner},
      {"9 Besicovitch defect bounds", besicovitch_defects},
      {"10 R_mu split round trip", r_mu_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
