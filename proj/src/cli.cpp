#include "ergo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "ergo/ds_operator.hpp"
#include "ergo/generators.hpp"
#include "ergo/norms.hpp"
#include "ergo/rearrangement.hpp"

namespace ergo::cli {

namespace {

struct KindSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> formats;  // first entry is the default
};

const std::map<std::string, KindSchema>& schemas() {
  static const std::map<std::string, KindSchema> table = {
      {"norms", {{"fn"}, {"spec"}, {"json"}}},
      {"op-verify", {{"op"}, {"fn"}, {"json"}}},
      {"avg-run", {{"op", "fn", "n"}, {"weights", "egorov", "egorov-out"}, {"csv", "json"}}},
      {"weak11-suite", {{}, {"instances", "weighted-instances", "max-atoms", "horizon"}, {"json"}}},
      {"ww-sweep", {{"system", "fn", "n"}, {"omega", "lambda-grid"}, {"csv", "json"}}},
      {"return-times",
       {{"system-omega", "fn-omega", "system-x", "fn-x", "n"}, {"omega", "x"}, {"csv", "json"}}},
      {"paper-example", {{}, {"K", "grid-max", "grid-points"}, {"json", "csv"}}},
  };
  return table;
}

const char* kDefaultNormSpecs =
    "l1,linf,l1capLinf,l1plusLinf,orlicz:p=2,orlicz:exp,orlicz:linlog,lorentz:sqrt,lorentz:log,"
    "marcinkiewicz:sqrt,marcinkiewicz:id";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty number for " + std::string(what));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad number '" + s + "' for " + std::string(what));
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const double v = parse_real(text, what);
  if (v < 0 || v != std::floor(v) || v > 1e15) {
    throw ConfigError("expected a non-negative integer for " + std::string(what));
  }
  return static_cast<std::size_t>(v);
}

const std::string& param(const ExperimentConfig& c, const std::string& key) {
  return c.params.at(key);
}

std::string param_or(const ExperimentConfig& c, const std::string& key, std::string fallback) {
  auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

Json load_json(const std::string& path) {
  try {
    return read_json_file(path);
  } catch (const Json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

TailedFunction load_function(const std::string& path) {
  try {
    return function_from_json(load_json(path));
  } catch (const Json::exception& e) {
    throw ConfigError("bad function file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad function file '" + path + "': " + e.what());
  }
}

DSOperator load_operator(const std::string& path) {
  try {
    return operator_from_json(load_json(path));
  } catch (const Json::exception& e) {
    throw ConfigError("bad operator file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad operator file '" + path + "': " + e.what());
  }
}

// "indicator:<k>", "random", or a function JSON path matching the system.
TailedFunction system_function(const std::string& spec, const MPTSystem& sys, std::uint64_t seed,
                               std::uint64_t stream) {
  const bool tail = sys.kind() == MPTSystem::Kind::IntegerShift;
  auto space = uniform_space(sys.size(), tail);
  if (spec.starts_with("indicator:")) {
    const std::size_t k = parse_count(spec.substr(10), "indicator atom");
    if (k >= sys.size()) throw ConfigError("indicator atom outside the system");
    std::vector<Complex> v(sys.size(), 0.0);
    v[k] = 1.0;
    return TailedFunction(space, std::move(v), 0.0);
  }
  if (spec == "random") {
    auto rng = gen::instance_rng(seed, stream);
    std::vector<Complex> v(sys.size());
    for (Complex& x : v) x = std::polar(gen::uniform(rng, 0.0, 1.0), gen::uniform(rng, 0.0, 6.283185307179586));
    return TailedFunction(space, std::move(v), 0.0);
  }
  TailedFunction f = load_function(spec);
  if (f.size() != sys.size()) throw ConfigError("function size does not match the system");
  return f;
}

std::string csv_preamble(const ExperimentConfig& config) {
  return std::string("# schema: ") + kSchemaVersion + "\n# config: " + config_to_json(config).dump() + "\n";
}

Json json_envelope(const ExperimentConfig& config) {
  return Json{{"schema", kSchemaVersion}, {"config", config_to_json(config)}};
}

void emit(const ExperimentConfig& config, const std::string& content, std::ostream& out) {
  if (config.output_path.empty()) {
    out << content;
  } else {
    write_atomically(config.output_path, content);
  }
}

std::string format_of(const ExperimentConfig& config) {
  return config.format.empty() ? schemas().at(config.kind).formats.front() : config.format;
}

// ---------------------------------------------------------------- runners

int run_norms(const ExperimentConfig& config, std::ostream& out) {
  const TailedFunction f = load_function(param(config, "fn"));
  Json result = json_envelope(config);
  Json norms = Json::object();
  Json excludes = Json::object();
  for (const std::string& raw : split(param_or(config, "spec", kDefaultNormSpecs), ',')) {
    const std::string text = trim(raw);
    NormSpec spec;
    try {
      spec = NormSpec::parse(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const double value = norm(f, spec);
    norms[spec.to_string()] = std::isinf(value) ? Json("inf") : Json(value);
    if (f.space().has_tail()) excludes[spec.to_string()] = space_excludes_one(spec, f.space());
  }
  result["norms"] = std::move(norms);
  if (f.space().has_tail()) result["excludes_one"] = std::move(excludes);
  result["in_r_mu"] = in_r_mu(f);
  emit(config, result.dump(2) + "\n", out);
  return kExitOk;
}

int run_op_verify(const ExperimentConfig& config, std::ostream& out) {
  const DSOperator op = load_operator(param(config, "op"));
  SpacePtr space = config.params.contains("fn") ? load_function(param(config, "fn")).space_ptr()
                                                : uniform_space(op.size(), true);
  if (space->size() != op.size()) throw ConfigError("operator and space sizes differ");
  const DSReport report = verify_ds(op, *space);
  Json result = json_envelope(config);
  result["report"] = report_to_json(report);
  emit(config, result.dump(2) + "\n", out);
  return report.contraction() ? kExitOk : kExitPropertyFailure;
}

int run_avg(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  const DSOperator op = load_operator(param(config, "op"));
  const TailedFunction f = load_function(param(config, "fn"));
  if (f.size() != op.size()) throw ConfigError("operator and function sizes differ");
  const auto n_list = parse_index_list(param(config, "n"));
  std::optional<BesicovitchSequence> beta;
  if (config.params.contains("weights")) beta = parse_weights(param(config, "weights"));
  const AveragesTrace trace = make_trace(op, f, n_list, beta);

  std::optional<EgorovCertificate> cert;
  if (config.params.contains("egorov")) {
    std::string spec = param(config, "egorov");
    std::replace(spec.begin(), spec.end(), ',', ' ');
    std::istringstream is(spec);
    std::string eps_s, tol_s, extra;
    if (!(is >> eps_s >> tol_s) || (is >> extra)) throw ConfigError("egorov expects 'eps tol'");
    const double eps = parse_real(eps_s, "egorov eps");
    const double tol = parse_real(tol_s, "egorov tol");
    const LimitCandidate limit = limit_candidate(op, f, trace);
    cert = egorov_certify(trace, limit.limit, eps, tol);
    cert->limit_rule = limit.rule;
  }

  const std::string format = format_of(config);
  if (format == "json") {
    Json result = json_envelope(config);
    Json rows = Json::array();
    for (std::size_t e = 0; e < trace.indices.size(); ++e) {
      rows.push_back(Json{{"n", trace.indices[e]}, {"average", function_to_json(trace.averages[e])}});
    }
    result["trace"] = std::move(rows);
    if (cert) result["egorov"] = certificate_to_json(*cert);
    emit(config, result.dump(2) + "\n", out);
  } else {
    std::string csv = csv_preamble(config) + "n";
    for (std::size_t i = 0; i < f.size(); ++i) {
      csv += ",v" + std::to_string(i) + "_re,v" + std::to_string(i) + "_im";
    }
    csv += ",tail_re,tail_im\n";
    for (std::size_t e = 0; e < trace.indices.size(); ++e) {
      const auto& a = trace.averages[e];
      csv += std::to_string(trace.indices[e]);
      for (Complex v : a.values()) csv += "," + format_double(v.real()) + "," + format_double(v.imag());
      csv += "," + format_double(a.tail_value().real()) + "," + format_double(a.tail_value().imag()) + "\n";
    }
    emit(config, csv, out);
    if (cert) {
      Json doc = json_envelope(config);
      doc["egorov"] = certificate_to_json(*cert);
      std::string path = param_or(config, "egorov-out", "");
      if (path.empty() && !config.output_path.empty()) path = config.output_path + ".egorov.json";
      if (path.empty()) {
        err << doc.dump(2) << "\n";
      } else {
        write_atomically(path, doc.dump(2) + "\n");
      }
    }
  }
  return !cert || cert->certified ? kExitOk : kExitPropertyFailure;
}

int run_weak11_suite(const ExperimentConfig& config, std::ostream& out) {
  const std::size_t instances = parse_count(param_or(config, "instances", "500"), "instances");
  const std::size_t weighted =
      parse_count(param_or(config, "weighted-instances", "500"), "weighted-instances");
  const std::size_t max_atoms = parse_count(param_or(config, "max-atoms", "64"), "max-atoms");
  const std::size_t horizon = parse_count(param_or(config, "horizon", "200"), "horizon");
  if (max_atoms == 0 || max_atoms > kMaxAtoms || horizon == 0) {
    throw ConfigError("max-atoms must be in [1, 512] and horizon >= 1");
  }

  constexpr gen::OperatorFamily kFamilies[] = {
      gen::OperatorFamily::Permutation, gen::OperatorFamily::BirkhoffMixture,
      gen::OperatorFamily::PositiveKernel, gen::OperatorFamily::ComplexPhase};

  struct Outcome {
    Weak11Result result;
    std::string family;
  };
  auto draw = [&](std::uint64_t index, bool with_weights) {
    auto rng = gen::instance_rng(config.seed, index);
    const std::size_t atoms = gen::uniform_index(rng, 1, max_atoms);
    const auto space = gen::random_space(rng, atoms, gen::uniform(rng, 0.0, 1.0) < 0.5);
    const auto family = kFamilies[gen::uniform_index(rng, 0, 3)];
    const DSOperator op = gen::random_operator(rng, *space, family);
    const TailedFunction f = gen::random_function(rng, space, gen::uniform(rng, 0.1, 10.0));
    const double lambda = gen::uniform(rng, 0.02, 1.5) * std::max(norm_lp(f, kInf), 1e-3);
    if (with_weights) {
      const BesicovitchSequence beta = gen::random_besicovitch(rng);
      return Outcome{check_weighted_weak11(op, f, beta, lambda, horizon), gen::to_string(family)};
    }
    return Outcome{check_weak11(modulus(op), f, lambda, horizon), gen::to_string(family)};
  };

  Json result = json_envelope(config);
  bool all_ok = true;
  auto suite = [&](const char* name, std::size_t count, bool with_weights, std::uint64_t offset) {
    std::size_t violations = 0;
    double worst = 0.0;
    Json failures = Json::array();
    for (std::size_t i = 0; i < count; ++i) {
      const Outcome o = draw(offset + i, with_weights);
      if (o.result.rhs > 0.0) worst = std::max(worst, o.result.lhs / o.result.rhs);
      if (!o.result.ok) {
        ++violations;
        failures.push_back(Json{{"instance", i}, {"family", o.family}, {"lhs", o.result.lhs}, {"rhs", o.result.rhs}});
      }
    }
    all_ok = all_ok && violations == 0;
    result[name] = Json{{"instances", count},
                        {"violations", violations},
                        {"max_lhs_over_rhs", worst},
                        {"failures", std::move(failures)}};
  };
  suite("weak11", instances, false, 0);
  suite("weighted_weak11", weighted, true, 1u << 30);
  result["horizon"] = horizon;
  result["passed"] = all_ok;
  emit(config, result.dump(2) + "\n", out);
  return all_ok ? kExitOk : kExitPropertyFailure;
}

int run_ww_sweep(const ExperimentConfig& config, std::ostream& out) {
  const MPTSystem sys = parse_system(param(config, "system"));
  const TailedFunction f = system_function(param(config, "fn"), sys, config.seed, 0);
  const std::size_t omega = parse_count(param_or(config, "omega", "0"), "omega");
  const std::size_t grid = parse_count(param_or(config, "lambda-grid", "64"), "lambda-grid");
  if (grid == 0) throw ConfigError("lambda-grid must be >= 1");
  const auto requested = parse_index_list(param(config, "n"));
  if (requested.front() < 4) throw ConfigError("reported horizons must be >= 4");
  const auto dense = dense_indices(requested.back());
  const auto lambdas = unit_circle_grid(grid);
  const auto rows = wiener_wintner_sweep(sys, f, omega, lambdas, dense);

  const std::string format = format_of(config);
  Json json_rows = Json::array();
  std::string csv = csv_preamble(config) + "lambda_re,lambda_im,n,avg_re,avg_im,delta_re,delta_im\n";
  for (const SweepRow& row : rows) {
    for (std::size_t n : requested) {
      const OscillationReport rep = oscillation(row.series.prefix(n));
      const Complex avg = row.series.values[n - 1];
      if (format == "json") {
        json_rows.push_back(Json{{"lambda", complex_to_json(row.lambda)},
                                 {"n", n},
                                 {"average", complex_to_json(avg)},
                                 {"delta_re", rep.delta_real},
                                 {"delta_im", rep.delta_imag}});
      } else {
        csv += format_double(row.lambda.real()) + "," + format_double(row.lambda.imag()) + "," +
               std::to_string(n) + "," + format_double(avg.real()) + "," + format_double(avg.imag()) +
               "," + format_double(rep.delta_real) + "," + format_double(rep.delta_imag) + "\n";
      }
    }
  }
  if (format == "json") {
    Json result = json_envelope(config);
    result["note"] = "per base point; no full-measure exceptional set is constructed";
    result["rows"] = std::move(json_rows);
    emit(config, result.dump(2) + "\n", out);
  } else {
    emit(config, csv, out);
  }
  return kExitOk;
}

int run_return_times(const ExperimentConfig& config, std::ostream& out) {
  const MPTSystem sys_omega = parse_system(param(config, "system-omega"));
  const MPTSystem sys_x = parse_system(param(config, "system-x"));
  const TailedFunction f = system_function(param(config, "fn-omega"), sys_omega, config.seed, 0);
  const TailedFunction g = system_function(param(config, "fn-x"), sys_x, config.seed, 1);
  const std::size_t omega = parse_count(param_or(config, "omega", "0"), "omega");
  const std::size_t x = parse_count(param_or(config, "x", "0"), "x");
  const auto n_list = parse_index_list(param(config, "n"));
  const OrbitSeries series = return_times_avg(sys_omega, f, sys_x, g, omega, x, n_list);
  if (format_of(config) == "json") {
    Json result = json_envelope(config);
    Json rows = Json::array();
    for (std::size_t i = 0; i < series.n.size(); ++i) {
      rows.push_back(Json{{"n", series.n[i]}, {"average", complex_to_json(series.values[i])}});
    }
    result["rows"] = std::move(rows);
    emit(config, result.dump(2) + "\n", out);
  } else {
    std::string csv = csv_preamble(config) + "n,avg_re,avg_im\n";
    for (std::size_t i = 0; i < series.n.size(); ++i) {
      csv += std::to_string(series.n[i]) + "," + format_double(series.values[i].real()) + "," +
             format_double(series.values[i].imag()) + "\n";
    }
    emit(config, csv, out);
  }
  return kExitOk;
}

int run_paper_example(const ExperimentConfig& config, std::ostream& out) {
  const std::size_t depth = parse_count(param_or(config, "K", "30"), "K");
  const double grid_max = parse_real(param_or(config, "grid-max", "1e6"), "grid-max");
  const std::size_t points = parse_count(param_or(config, "grid-points", "4000"), "grid-points");
  if (depth == 0 || depth > 10000) throw ConfigError("K must be in [1, 10000]");
  if (!(grid_max > 1.0) || points < 2) throw ConfigError("need grid-max > 1 and grid-points >= 2");

  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(grid_max, static_cast<double>(i) / static_cast<double>(points - 1));
  }
  grid.back() = grid_max;
  const TailedFunction f = sample_paper_example(static_cast<int>(depth), grid);
  const StepFunction rearranged = rearrange(f);

  bool decreasing = true;
  for (std::size_t i = 1; i < f.size(); ++i) decreasing = decreasing && f.value(i).real() < f.value(i - 1).real();
  // f* just below the total sampled mass (f* itself is 0 from there on).
  const double last_value = rearranged.steps() == 0 ? 0.0 : rearranged.values().back();

  const auto decades = static_cast<int>(std::floor(std::log10(grid_max) + 1e-12));
  Json masses = Json::object();
  bool masses_increasing = true;
  double l1_mass_at_six = -1.0;
  for (int p = 1; p <= 3; ++p) {
    Json row = Json::array();
    double prev = -1.0;
    for (int j = 1; j <= decades; ++j) {
      const double cut = std::pow(10.0, j);
      double mass = 0.0;
      for (std::size_t i = 0; i < grid.size() && grid[i] <= cut * (1.0 + 1e-12); ++i) {
        mass += f.space().weight(i) * std::pow(f.value(i).real(), p);
      }
      masses_increasing = masses_increasing && mass > prev;
      prev = mass;
      if (p == 1 && j == 6) l1_mass_at_six = mass;
      row.push_back(Json{{"j", j}, {"mass", mass}});
    }
    masses["p=" + std::to_string(p)] = std::move(row);
  }

  const bool ok = rearranged.is_non_increasing() && decreasing && last_value < 0.06 &&
                  masses_increasing && (decades < 6 || l1_mass_at_six > 10.0);

  if (format_of(config) == "csv") {
    std::string csv = csv_preamble(config) + "t,f_star\n";
    const auto t = rearranged.breakpoints();
    const auto v = rearranged.values();
    for (std::size_t i = 0; i < t.size(); ++i) csv += format_double(t[i]) + "," + format_double(v[i]) + "\n";
    emit(config, csv, out);
  } else {
    Json result = json_envelope(config);
    result["rearrangement"] = step_function_to_json(rearranged);
    result["truncated_masses"] = std::move(masses);
    result["checks"] = Json{{"f_star_non_increasing", rearranged.is_non_increasing()},
                            {"values_decrease_along_grid", decreasing},
                            {"f_star_below_total_mass", last_value},
                            {"f_star_below_total_mass_below_0.06", last_value < 0.06},
                            {"masses_strictly_increasing", masses_increasing},
                            {"l1_mass_to_1e6", l1_mass_at_six}};
    result["passed"] = ok;
    emit(config, result.dump(2) + "\n", out);
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : schemas()) k.push_back(name);
    return k;
  }();
  return kinds;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      c.kind = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("params must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (pv.is_string()) {
          c.params[pk] = pv.get<std::string>();
        } else if (pv.is_number_integer()) {
          c.params[pk] = std::to_string(pv.get<long long>());
        } else if (pv.is_number()) {
          c.params[pk] = format_double(pv.get<double>());
        } else {
          throw ConfigError("param '" + pk + "' must be a string or number");
        }
      }
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("seed must be an unsigned integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_object()) throw ConfigError("output must be an object");
      for (const auto& [ok, ov] : value.items()) {
        if (ok == "path") {
          c.output_path = ov.get<std::string>();
        } else if (ok == "format") {
          c.format = ov.get<std::string>();
        } else {
          throw ConfigError("unknown output key '" + ok + "'");
        }
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

Json config_to_json(const ExperimentConfig& config) {
  Json params = Json::object();
  for (const auto& [k, v] : config.params) params[k] = v;
  return Json{{"kind", config.kind},
              {"params", std::move(params)},
              {"seed", config.seed},
              {"output", Json{{"path", config.output_path}, {"format", config.format}}}};
}

void validate(const ExperimentConfig& config) {
  auto it = schemas().find(config.kind);
  if (it == schemas().end()) throw ConfigError("unknown experiment kind '" + config.kind + "'");
  const KindSchema& schema = it->second;
  for (const auto& [key, _] : config.params) {
    const bool known = std::find(schema.required.begin(), schema.required.end(), key) != schema.required.end() ||
                       std::find(schema.optional.begin(), schema.optional.end(), key) != schema.optional.end();
    if (!known) throw ConfigError("unknown parameter '" + key + "' for " + config.kind);
  }
  for (const auto& key : schema.required) {
    if (!config.params.contains(key)) throw ConfigError("missing parameter '" + key + "' for " + config.kind);
  }
  if (!config.format.empty() &&
      std::find(schema.formats.begin(), schema.formats.end(), config.format) == schema.formats.end()) {
    throw ConfigError("format '" + config.format + "' not supported by " + config.kind);
  }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const std::string& k = config.kind;
    if (k == "norms") return run_norms(config, out);
    if (k == "op-verify") return run_op_verify(config, out);
    if (k == "avg-run") return run_avg(config, out, err);
    if (k == "weak11-suite") return run_weak11_suite(config, out);
    if (k == "ww-sweep") return run_ww_sweep(config, out);
    if (k == "return-times") return run_return_times(config, out);
    if (k == "paper-example") return run_paper_example(config, out);
    throw ConfigError("unhandled kind '" + k + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

Complex parse_complex(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty complex literal");
  if (s.back() != 'i') return {parse_real(s, "complex literal"), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part, "imaginary part of '" + s + "'");
  };
  if (split_at == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split_at), "real part of '" + s + "'"), imag_of(body.substr(split_at))};
}

BesicovitchSequence parse_weights(std::string_view text) {
  const std::string s(text);
  if (!s.starts_with("trig:")) throw ConfigError("weights: expected 'trig:' at position 0");
  std::vector<TrigPolynomial::Term> terms;
  Perturbation pert = Perturbation::zero();
  bool have_pert = false;
  std::size_t pos = 5;
  for (const std::string& segment : split(std::string_view(s).substr(5), ';')) {
    const std::string where = " at position " + std::to_string(pos);
    if (segment.starts_with("pert:")) {
      if (have_pert) throw ConfigError("weights: duplicate perturbation" + where);
      have_pert = true;
      const auto parts = split(std::string_view(segment).substr(5), ':');
      const std::string& name = parts[0];
      try {
        if (name == "zero" && parts.size() == 1) {
          pert = Perturbation::zero();
        } else if (name == "harmonic" && parts.size() == 2) {
          pert = Perturbation::harmonic(parse_complex(parts[1]));
        } else if (name == "geometric" && parts.size() == 3) {
          pert = Perturbation::geometric(parse_complex(parts[1]), parse_complex(parts[2]));
        } else {
          throw ConfigError("weights: unknown perturbation '" + segment + "'" + where);
        }
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("weights: ") + e.what() + where);
      }
    } else {
      if (have_pert) throw ConfigError("weights: terms must precede the perturbation" + where);
      const auto fields = split(segment, ',');
      if (fields.size() != 2 || !fields[0].starts_with("z=") || !fields[1].starts_with("lambda=")) {
        throw ConfigError("weights: expected 'z=<c>,lambda=<c>'" + where);
      }
      const Complex z = parse_complex(fields[0].substr(2));
      const Complex lambda = parse_complex(fields[1].substr(7));
      if (std::abs(std::abs(lambda) - 1.0) > 1e-12) {
        throw ConfigError("weights: frequency " + fields[1].substr(7) + " is not unimodular" + where);
      }
      terms.push_back({z, lambda});
    }
    pos += segment.size() + 1;
  }
  if (terms.empty()) throw ConfigError("weights: no trigonometric terms");
  return BesicovitchSequence(TrigPolynomial(std::move(terms)), pert);
}

MPTSystem parse_system(std::string_view text) {
  const std::string s(text);
  std::map<std::string, std::size_t> fields;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("system: expected '<kind>:<params>'");
  const std::string kind = s.substr(0, colon);
  for (const std::string& kv : split(std::string_view(s).substr(colon + 1), ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("system: bad field '" + kv + "'");
    fields[kv.substr(0, eq)] = parse_count(kv.substr(eq + 1), "system field " + kv.substr(0, eq));
  }
  auto expect = [&](std::set<std::string> keys) {
    for (const auto& [k, _] : fields) {
      if (!keys.contains(k)) throw ConfigError("system: unknown field '" + k + "'");
    }
    for (const auto& k : keys) {
      if (!fields.contains(k)) throw ConfigError("system: missing field '" + k + "'");
    }
  };
  try {
    if (kind == "cyclic") {
      expect({"N", "r"});
      return MPTSystem::cyclic(fields["N"], fields["r"]);
    }
    if (kind == "shift") {
      expect({"W"});
      return MPTSystem::integer_shift(fields["W"]);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
  throw ConfigError("system: unknown kind '" + kind + "'");
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (const std::string& part : split(text, ',')) {
    const std::size_t n = parse_count(part, "index list");
    if (n == 0) throw ConfigError("index list entries must be >= 1");
    if (!out.empty() && n <= out.back()) throw ConfigError("index list must increase strictly");
    out.push_back(n);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write '" + tmp.string() + "'");
    os << content;
    os.flush();
    if (!os) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto '" + path + "'");
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Workbench for Dunford-Schwartz operators and weighted ergodic averages"};
  app.require_subcommand(0, 1);
  // Global flags may follow the subcommand; inherited by every subcommand below.
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  app.add_option("--config", config_path, "JSON experiment config (same schema as the flags)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random suites")->capture_default_str();
  auto* out_opt = app.add_option("--out", out_path, "Output file (default: stdout)");
  auto* format_opt =
      app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::App*, std::string>> kind_of;
  std::vector<std::pair<CLI::Option*, std::string>> bound;
  auto bind = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    bound.emplace_back(sub->add_option("--" + key, values[key], help), key);
  };

  auto* norms = app.add_subcommand("norms", "Fully symmetric norms of a function");
  bind(norms, "fn", "Function JSON");
  bind(norms, "spec", "Comma-separated norm specs, e.g. lorentz:sqrt,orlicz:p=2");
  kind_of.emplace_back(norms, "norms");

  auto* op = app.add_subcommand("op", "Operator tools");
  op->require_subcommand(1);
  auto* verify = op->add_subcommand("verify", "Check the L1 and Linf contraction bounds");
  bind(verify, "op", "Operator JSON");
  bind(verify, "fn", "Function JSON supplying the measure space (default: unit weights, tail)");
  kind_of.emplace_back(verify, "op-verify");

  auto* avg = app.add_subcommand("avg", "Ergodic averages");
  avg->require_subcommand(1);
  auto* avg_run = avg->add_subcommand("run", "Trace of Cesaro or weighted averages");
  bind(avg_run, "op", "Operator JSON");
  bind(avg_run, "fn", "Function JSON");
  bind(avg_run, "weights", "Besicovitch weights, e.g. trig:z=1,lambda=0.6+0.8i;pert:harmonic:1");
  bind(avg_run, "n", "Comma-separated averaging indices");
  bind(avg_run, "egorov-out", "Certificate path (default: <out>.egorov.json)");
  std::vector<std::string> egorov;
  auto* egorov_opt = avg_run->add_option("--egorov", egorov, "Certify: eps tol")->expected(2);
  kind_of.emplace_back(avg_run, "avg-run");

  auto* weak = app.add_subcommand("weak11-suite", "Random weak (1,1) maximal inequality suite");
  bind(weak, "instances", "Unweighted instances (default 500)");
  bind(weak, "weighted-instances", "Weighted instances (default 500)");
  bind(weak, "max-atoms", "Largest space (default 64)");
  bind(weak, "horizon", "Maximal function horizon (default 200)");
  kind_of.emplace_back(weak, "weak11-suite");

  auto* ww = app.add_subcommand("ww", "Wiener-Wintner experiments");
  ww->require_subcommand(1);
  auto* sweep = ww->add_subcommand("sweep", "Orbit averages over a grid of unimodular frequencies");
  bind(sweep, "system", "cyclic:N=<n>,r=<r> or shift:W=<w>");
  bind(sweep, "fn", "Function JSON, indicator:<k>, or random");
  bind(sweep, "omega", "Base point (default 0)");
  bind(sweep, "lambda-grid", "Number of equally spaced frequencies (default 64)");
  bind(sweep, "n", "Comma-separated horizons");
  kind_of.emplace_back(sweep, "ww-sweep");

  auto* rt = app.add_subcommand("return-times", "Return-times product averages");
  bind(rt, "system-omega", "First system");
  bind(rt, "fn-omega", "Function on the first system");
  bind(rt, "system-x", "Second system");
  bind(rt, "fn-x", "Function on the second system");
  bind(rt, "omega", "Base point in the first system (default 0)");
  bind(rt, "x", "Base point in the second system (default 0)");
  bind(rt, "n", "Comma-separated horizons");
  kind_of.emplace_back(rt, "return-times");

  auto* paper = app.add_subcommand("paper-example", "Rearrangement of the slowly decaying series example");
  bind(paper, "K", "Series truncation depth (default 30)");
  bind(paper, "grid-max", "Right end of the grid (default 1e6)");
  bind(paper, "grid-points", "Number of log-spaced grid points (default 4000)");
  kind_of.emplace_back(paper, "paper-example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      config = config_from_json(load_json(config_path));
    }
    for (const auto& [sub, kind] : kind_of) {
      if (sub->parsed()) config.kind = kind;
    }
    for (const auto& [opt, key] : bound) {
      if (opt->count() > 0) config.params[key] = values[key];
    }
    if (egorov_opt->count() > 0) config.params["egorov"] = egorov[0] + " " + egorov[1];
    if (seed_opt->count() > 0) config.seed = seed;
    if (out_opt->count() > 0) config.output_path = out_path;
    if (format_opt->count() > 0) config.format = format;
    if (config.kind.empty()) throw ConfigError("no subcommand or config kind given");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIoError;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace ergo::cli
