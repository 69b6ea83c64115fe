#include "ergo/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ergo {

namespace {

// JSON has no infinity; extended reals use the string "inf".
Json extended(double x) { return std::isinf(x) ? Json("inf") : Json(x); }

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
  }
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("expected a complex number [re, im]");
}

Json function_to_json(const TailedFunction& f) {
  Json values = Json::array();
  for (Complex v : f.values()) values.push_back(complex_to_json(v));
  const auto w = f.space().weights();
  return Json{{"weights", std::vector<double>(w.begin(), w.end())},
              {"tail", f.space().has_tail()},
              {"values", std::move(values)},
              {"tail_value", complex_to_json(f.tail_value())}};
}

TailedFunction function_from_json(const Json& j) {
  require_keys(j, {"weights", "tail", "values", "tail_value"}, "function");
  auto weights = j.at("weights").get<std::vector<double>>();
  const bool tail = j.value("tail", false);
  std::vector<Complex> values;
  for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
  const Complex tail_value = j.contains("tail_value") ? complex_from_json(j.at("tail_value")) : Complex(0.0);
  return TailedFunction(make_space(std::move(weights), tail), std::move(values), tail_value);
}

Json step_function_to_json(const StepFunction& sf) {
  return Json{{"t", std::vector<double>(sf.breakpoints().begin(), sf.breakpoints().end())},
              {"v", std::vector<double>(sf.values().begin(), sf.values().end())},
              {"tail", sf.tail_value()}};
}

StepFunction step_function_from_json(const Json& j) {
  require_keys(j, {"t", "v", "tail"}, "step function");
  return StepFunction(j.at("t").get<std::vector<double>>(), j.at("v").get<std::vector<double>>(),
                      j.at("tail").get<double>());
}

Json operator_to_json(const DSOperator& op) {
  const std::size_t n = op.size();
  Json k = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t jj = 0; jj < n; ++jj) row.push_back(complex_to_json(op.kernel()(i, jj)));
    k.push_back(std::move(row));
  }
  Json b = Json::array();
  for (Complex x : op.tail_injection()) b.push_back(complex_to_json(x));
  return Json{{"K", std::move(k)}, {"b", std::move(b)}, {"eta", complex_to_json(op.tail_coeff())}};
}

DSOperator operator_from_json(const Json& j) {
  require_keys(j, {"K", "b", "eta"}, "operator");
  const Json& rows = j.at("K");
  const std::size_t n = rows.size();
  ComplexMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("operator: kernel must be square");
    for (std::size_t c = 0; c < n; ++c) k(i, c) = complex_from_json(rows[i][c]);
  }
  std::vector<Complex> b(n, 0.0);
  if (j.contains("b")) {
    b.clear();
    for (const auto& x : j.at("b")) b.push_back(complex_from_json(x));
  }
  const Complex eta = j.contains("eta") ? complex_from_json(j.at("eta")) : Complex(1.0);
  return DSOperator(std::move(k), std::move(b), eta);
}

Json report_to_json(const DSReport& report) {
  return Json{{"l1_ok", report.l1_ok},
              {"linf_ok", report.linf_ok},
              {"positive", report.positive},
              {"max_column_ratio", report.max_column_ratio},
              {"max_row_sum", report.max_row_sum}};
}

Json certificate_to_json(const EgorovCertificate& cert) {
  Json decay = Json::array();
  for (const auto& [n, sup] : cert.sup_decay) decay.push_back(Json::array({n, sup}));
  return Json{{"exceptional_atoms", cert.exceptional_atoms},
              {"tail_exceptional", cert.tail_exceptional},
              {"exceptional_measure", extended(cert.exceptional_measure)},
              {"sup_decay", std::move(decay)},
              {"certified", cert.certified},
              {"eps", cert.eps},
              {"tol", cert.tol},
              {"limit_rule", cert.limit_rule},
              {"note", "finite-horizon witness over the observed window"}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return Json::parse(in);
}

}  // namespace ergo
