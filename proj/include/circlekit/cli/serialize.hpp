#pragma once

#include <complex>
#include <string>

#include <json.hpp>

#include "circlekit/expansion.hpp"

namespace circlekit {

using Json = nlohmann::json;

// JSON encodings used by the command-line front end. Exact quantities travel as strings,
// complex numbers as [re, im] pairs. Every to_json has an inverse from_json with
// from_json(to_json(x)) == x.

Json to_json(const std::complex<double>& z);
std::complex<double> complex_from_json(const Json& j);

Json to_json(const IndexTuple& t);
IndexTuple tuple_from_json(const Json& j);

Json to_json(const SeriesValue& v);
SeriesValue series_from_json(const Json& j);

Json to_json(const IntegralValue& v);
IntegralValue integral_from_json(const Json& j);

Json to_json(const ExpansionTerm& t);
ExpansionTerm term_from_json(const Json& j);

Json to_json(const ExpansionResult& r);
ExpansionResult expansion_from_json(const Json& j);

Json to_json(const ReportRow& r);
ReportRow report_row_from_json(const Json& j);

// Seventeen significant digits (printf %.17g semantics), locale independent.
std::string format_double(double x);

}  // namespace circlekit
