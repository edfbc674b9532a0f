#include "circlekit/cli/serialize.hpp"

#include <charconv>
#include <cmath>

#include "circlekit/errors.hpp"

namespace circlekit {

namespace {

Json finite(double x) {
  if (!std::isfinite(x)) return Json(nullptr);
  return Json(x);
}

double number(const Json& j) {
  if (j.is_null()) return std::nan("");
  return j.get<double>();
}

Json complex_list(const std::vector<std::complex<double>>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Json to_json(const std::complex<double>& z) { return Json::array({finite(z.real()), finite(z.imag())}); }

std::complex<double> complex_from_json(const Json& j) { return {number(j.at(0)), number(j.at(1))}; }

Json to_json(const IndexTuple& t) {
  Json out;
  out["I1"] = t.I1;
  out["I2"] = t.I2;
  out["tau"] = t.tau;
  out["label"] = to_string(t);
  return out;
}

IndexTuple tuple_from_json(const Json& j) {
  IndexTuple t;
  t.I1 = j.at("I1").get<std::vector<int>>();
  t.I2 = j.at("I2").get<std::vector<int>>();
  t.tau = j.at("tau").get<std::vector<int>>();
  return t;
}

Json to_json(const SeriesValue& v) {
  Json out;
  out["value"] = to_json(v.value);
  out["imag_residual"] = finite(v.imag_residual);
  out["Q"] = v.Q;
  out["term_tail_estimate"] = finite(v.term_tail_estimate);
  out["converged"] = v.converged;
  out["blocks"] = complex_list(v.blocks);
  return out;
}

SeriesValue series_from_json(const Json& j) {
  SeriesValue v;
  v.value = complex_from_json(j.at("value"));
  v.imag_residual = number(j.at("imag_residual"));
  v.Q = j.at("Q").get<int>();
  v.term_tail_estimate = number(j.at("term_tail_estimate"));
  v.converged = j.at("converged").get<bool>();
  for (const auto& b : j.at("blocks")) v.blocks.push_back(complex_from_json(b));
  return v;
}

Json to_json(const IntegralValue& v) {
  Json out;
  out["value"] = to_json(v.value);
  out["imag_residual"] = finite(v.imag_residual);
  out["Q"] = finite(v.Q);
  out["tail_estimate"] = finite(v.tail_estimate);
  out["error_estimate"] = finite(v.error_estimate);
  out["convergence_unguaranteed"] = v.convergence_unguaranteed;
  return out;
}

IntegralValue integral_from_json(const Json& j) {
  IntegralValue v;
  v.value = complex_from_json(j.at("value"));
  v.imag_residual = number(j.at("imag_residual"));
  v.Q = number(j.at("Q"));
  v.tail_estimate = number(j.at("tail_estimate"));
  v.error_estimate = number(j.at("error_estimate"));
  v.convergence_unguaranteed = j.at("convergence_unguaranteed").get<bool>();
  return v;
}

Json to_json(const ExpansionTerm& t) {
  Json out;
  out["tuple"] = to_json(t.tuple);
  out["series"] = to_json(t.series);
  out["integral"] = to_json(t.integral);
  out["exponent"] = t.exponent;
  out["term_value"] = finite(t.term_value);
  out["failed"] = t.failed;
  out["failure"] = t.failure;
  return out;
}

ExpansionTerm term_from_json(const Json& j) {
  ExpansionTerm t;
  t.tuple = tuple_from_json(j.at("tuple"));
  t.series = series_from_json(j.at("series"));
  t.integral = integral_from_json(j.at("integral"));
  t.exponent = j.at("exponent").get<int>();
  t.term_value = number(j.at("term_value"));
  t.failed = j.at("failed").get<bool>();
  t.failure = j.at("failure").get<std::string>();
  return t;
}

Json to_json(const ExpansionResult& r) {
  Json out;
  out["terms"] = Json::array();
  for (const auto& t : r.terms) out["terms"].push_back(to_json(t));
  out["total"] = finite(r.total);
  out["P"] = to_string(r.P);
  out["n"] = to_string(r.n);
  out["K"] = r.K;
  out["Q_series"] = r.Q_series;
  out["Q_integral"] = finite(r.Q_integral);
  out["exact_count"] = r.exact_count ? Json(to_string(*r.exact_count)) : Json(nullptr);
  out["residual"] = r.residual ? finite(*r.residual) : Json(nullptr);
  out["warnings"] = r.warnings;
  return out;
}

ExpansionResult expansion_from_json(const Json& j) {
  ExpansionResult r;
  for (const auto& t : j.at("terms")) r.terms.push_back(term_from_json(t));
  r.total = number(j.at("total"));
  r.P = parse_rational(j.at("P").get<std::string>());
  r.n = Integer(j.at("n").get<std::string>());
  r.K = j.at("K").get<int>();
  r.Q_series = j.at("Q_series").get<int>();
  r.Q_integral = number(j.at("Q_integral"));
  if (!j.at("exact_count").is_null()) r.exact_count = Integer(j.at("exact_count").get<std::string>());
  if (!j.at("residual").is_null()) r.residual = number(j.at("residual"));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

Json to_json(const ReportRow& r) {
  Json out;
  out["P"] = to_string(r.P);
  out["K"] = r.K;
  out["n"] = to_string(r.n);
  out["exact"] = to_string(r.exact);
  out["total"] = finite(r.total);
  out["residual"] = finite(r.residual);
  out["normalized_residual"] = finite(r.normalized_residual);
  return out;
}

ReportRow report_row_from_json(const Json& j) {
  ReportRow r;
  r.P = parse_rational(j.at("P").get<std::string>());
  r.K = j.at("K").get<int>();
  r.n = Integer(j.at("n").get<std::string>());
  r.exact = Integer(j.at("exact").get<std::string>());
  r.total = number(j.at("total"));
  r.residual = number(j.at("residual"));
  r.normalized_residual = number(j.at("normalized_residual"));
  return r;
}

}  // namespace circlekit
