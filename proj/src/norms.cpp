#include "ergo/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ergo {

namespace {

double parse_number(std::string_view text, std::string_view context) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("bad number '" + s + "' in " + std::string(context));
  }
  return value;
}

ConcaveWeight parse_weight(std::string_view text) {
  if (text == "sqrt") return ConcaveWeight::sqrt();
  if (text == "id" || text == "t") return ConcaveWeight::identity();
  if (text == "log") return ConcaveWeight::log();
  if (text.starts_with("power=")) return ConcaveWeight::power(parse_number(text.substr(6), text));
  throw std::invalid_argument("unknown concave weight '" + std::string(text) + "'");
}

std::string format_param(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("Orlicz power needs p >= 1");
  return OrliczFunction(Kind::Power, p);
}

OrliczFunction OrliczFunction::exp() { return OrliczFunction(Kind::Exp, 0.0); }

OrliczFunction OrliczFunction::lin_log() { return OrliczFunction(Kind::LinLog, 0.0); }

double OrliczFunction::operator()(double u) const {
  switch (kind_) {
    case Kind::Power:
      return p_ == 1.0 ? u : std::pow(u, p_);
    case Kind::Exp:
      return std::expm1(u);
    case Kind::LinLog:
      return u * std::log1p(u);
  }
  return 0.0;
}

std::string OrliczFunction::name() const {
  switch (kind_) {
    case Kind::Power:
      return "p=" + format_param(p_);
    case Kind::Exp:
      return "exp";
    case Kind::LinLog:
      return "linlog";
  }
  return {};
}

bool OrliczFunction::check_shape() const {
  const OrliczFunction& phi = *this;
  if (phi(0.0) != 0.0) return false;
  double prev_u = 0.0;
  double prev_phi = 0.0;
  double prev_slope = 0.0;
  for (int k = -30; k <= 16; ++k) {
    const double u = std::pow(10.0, k / 10.0);
    const double v = phi(u);
    if (!(v > 0.0)) return false;
    const double slope = (v - prev_phi) / (u - prev_u);
    if (slope < prev_slope * (1.0 - 1e-9)) return false;
    prev_u = u;
    prev_phi = v;
    prev_slope = slope;
  }
  return true;
}

ConcaveWeight ConcaveWeight::power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("concave power weight needs 0 < alpha <= 1");
  }
  return ConcaveWeight(Kind::Power, alpha);
}

ConcaveWeight ConcaveWeight::log() { return ConcaveWeight(Kind::Log, 0.0); }

double ConcaveWeight::operator()(double t) const {
  if (std::isinf(t)) return kInf;
  if (kind_ == Kind::Log) return std::log1p(t);
  if (alpha_ == 1.0) return t;
  if (alpha_ == 0.5) return std::sqrt(t);
  return std::pow(t, alpha_);
}

std::string ConcaveWeight::name() const {
  if (kind_ == Kind::Log) return "log";
  if (alpha_ == 1.0) return "id";
  if (alpha_ == 0.5) return "sqrt";
  return "power=" + format_param(alpha_);
}

bool ConcaveWeight::check_shape() const {
  const ConcaveWeight& phi = *this;
  if (phi(0.0) != 0.0) return false;
  double prev_t = 0.0;
  double prev_phi = 0.0;
  double prev_slope = kInf;
  for (int k = -30; k <= 30; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    const double v = phi(t);
    if (!(v > prev_phi)) return false;
    const double slope = (v - prev_phi) / (t - prev_t);
    if (slope > prev_slope * (1.0 + 1e-9)) return false;
    prev_t = t;
    prev_phi = v;
    prev_slope = slope;
  }
  return true;
}

NormSpec NormSpec::parse(std::string_view text) {
  if (text == "l1") return l1();
  if (text == "linf") return linf();
  if (text == "l1capLinf") return l1_cap_linf();
  if (text == "l1plusLinf") return l1_plus_linf();
  if (text.starts_with("orlicz:")) {
    const auto arg = text.substr(7);
    if (arg == "exp") return orlicz_space(OrliczFunction::exp());
    if (arg == "linlog") return orlicz_space(OrliczFunction::lin_log());
    if (arg.starts_with("p=")) {
      return orlicz_space(OrliczFunction::power(parse_number(arg.substr(2), text)));
    }
    throw std::invalid_argument("unknown Orlicz function '" + std::string(arg) + "'");
  }
  if (text.starts_with("lorentz:")) return lorentz(parse_weight(text.substr(8)));
  if (text.starts_with("marcinkiewicz:")) return marcinkiewicz(parse_weight(text.substr(14)));
  throw std::invalid_argument("unknown norm spec '" + std::string(text) + "'");
}

std::string NormSpec::to_string() const {
  switch (kind) {
    case Kind::L1:
      return "l1";
    case Kind::Linf:
      return "linf";
    case Kind::L1capLinf:
      return "l1capLinf";
    case Kind::L1plusLinf:
      return "l1plusLinf";
    case Kind::Orlicz:
      return "orlicz:" + orlicz->name();
    case Kind::Lorentz:
      return "lorentz:" + weight->name();
    case Kind::Marcinkiewicz:
      return "marcinkiewicz:" + weight->name();
  }
  return {};
}

double norm_l1_cap_linf(const TailedFunction& f) {
  return std::max(norm_lp(f, 1.0), norm_lp(f, kInf));
}

double norm_l1_plus_linf(const TailedFunction& f) { return cumulative(rearrange(f), 1.0); }

double luxemburg_norm(const TailedFunction& f, const OrliczFunction& phi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol must be positive");
  const auto& space = f.space();
  if (space.has_tail() && f.tail_value() != Complex(0.0)) return kInf;
  const double sup = norm_lp(f, kInf);
  if (sup == 0.0) return 0.0;

  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f.value(i));
  auto modular = [&](double a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
      if (mags[i] != 0.0) sum += space.weight(i) * phi(mags[i] / a);
    }
    return sum;
  };

  constexpr int kMaxDoublings = 200;
  double hi = std::max(1.0, sup * std::max(1.0, space.atom_mass()));
  int doublings = 0;
  while (modular(hi) > 1.0) {
    if (++doublings > kMaxDoublings) {
      throw std::runtime_error("luxemburg_norm: bracket expansion failed; malformed Orlicz function");
    }
    hi *= 2.0;
  }
  double lo = std::min(tol, 0.5 * hi);
  for (int halvings = 0; modular(lo) <= 1.0; ++halvings) {
    if (halvings >= kMaxDoublings) return lo;
    hi = lo;
    lo *= 0.5;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (modular(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lorentz_norm(const TailedFunction& f, const ConcaveWeight& phi) {
  const StepFunction sf = rearrange(f);
  if (sf.tail_value() > 0.0 && phi.phi_at_infinity_infinite()) return kInf;
  const auto t = sf.breakpoints();
  const auto v = sf.values();
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double cur = phi(t[i]);
    sum += v[i] * (cur - prev);
    prev = cur;
  }
  return sum;
}

double marcinkiewicz_norm(const TailedFunction& f, const ConcaveWeight& phi) {
  const StepFunction sf = rearrange(f);
  const auto t = sf.breakpoints();
  const auto v = sf.values();
  const double tail = sf.tail_value();

  if (tail > 0.0) {
    const double at_infinity = tail * phi.t_over_phi_at_infinity();
    if (std::isinf(at_infinity)) return kInf;
  }
  const double first = t.empty() ? tail : v[0];
  double best = first * phi.t_over_phi_at_zero();
  if (tail > 0.0) best = std::max(best, tail * phi.t_over_phi_at_infinity());

  auto psi = [&](double s) { return cumulative(sf, s) / phi(s); };

  // Between kinks the numerator is affine and phi is concave, so psi is smooth
  // but not necessarily unimodal: scan a pre-grid, then refine the best cell.
  // Past the last kink psi is monotone for every catalog weight, so the kink
  // value and the limits above cover it.
  constexpr int kGrid = 64;
  constexpr double kGolden = 0.6180339887498949;
  constexpr double kWidth = 1e-10;
  double left = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double right = t[i];
    best = std::max(best, psi(right));
    const double h = (right - left) / (kGrid + 1);
    int arg = 1;
    double arg_val = -1.0;
    for (int k = 1; k <= kGrid; ++k) {
      const double val = psi(left + k * h);
      if (val > arg_val) {
        arg_val = val;
        arg = k;
      }
    }
    best = std::max(best, arg_val);
    double a = left + (arg - 1) * h;
    double b = left + (arg + 1) * h;
    if (a <= 0.0) a = 0.5 * h;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = psi(c);
    double fd = psi(d);
    while (b - a > kWidth * std::max(1.0, b)) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kGolden * (b - a);
        fc = psi(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kGolden * (b - a);
        fd = psi(d);
      }
    }
    best = std::max({best, fc, fd});
    left = right;
  }
  return best;
}

double norm(const TailedFunction& f, const NormSpec& spec) {
  switch (spec.kind) {
    case NormSpec::Kind::L1:
      return norm_lp(f, 1.0);
    case NormSpec::Kind::Linf:
      return norm_lp(f, kInf);
    case NormSpec::Kind::L1capLinf:
      return norm_l1_cap_linf(f);
    case NormSpec::Kind::L1plusLinf:
      return norm_l1_plus_linf(f);
    case NormSpec::Kind::Orlicz:
      return luxemburg_norm(f, spec.orlicz.value());
    case NormSpec::Kind::Lorentz:
      return lorentz_norm(f, spec.weight.value());
    case NormSpec::Kind::Marcinkiewicz:
      return marcinkiewicz_norm(f, spec.weight.value());
  }
  throw std::logic_error("norm: unhandled kind");
}

bool space_excludes_one(const NormSpec& spec, const TailedMeasureSpace& space) {
  if (!space.has_tail()) {
    throw std::invalid_argument("space_excludes_one: criterion needs a space of infinite measure");
  }
  switch (spec.kind) {
    case NormSpec::Kind::Orlicz:
    case NormSpec::Kind::L1:
    case NormSpec::Kind::L1capLinf:
      return true;
    case NormSpec::Kind::Linf:
    case NormSpec::Kind::L1plusLinf:
      return false;
    case NormSpec::Kind::Lorentz:
      return spec.weight.value().phi_at_infinity_infinite();
    case NormSpec::Kind::Marcinkiewicz:
      return spec.weight.value().phi_over_t_vanishes();
  }
  throw std::logic_error("space_excludes_one: unhandled kind");
}

}  // namespace ergo
