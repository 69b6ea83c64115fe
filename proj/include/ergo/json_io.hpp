#pragma once

#include <string>

#include "json.hpp"

#include "ergo/averaging.hpp"
#include "ergo/ds_operator.hpp"
#include "ergo/measure.hpp"
#include "ergo/rearrangement.hpp"

namespace ergo {

using Json = nlohmann::json;

/// Complex numbers are [re, im]; plain numbers are accepted on input.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

/// {"weights": [...], "tail": bool, "values": [[re, im], ...], "tail_value": [re, im]}
Json function_to_json(const TailedFunction& f);
TailedFunction function_from_json(const Json& j);

/// {"t": [...], "v": [...], "tail": x}
Json step_function_to_json(const StepFunction& sf);
StepFunction step_function_from_json(const Json& j);

/// {"K": [[[re, im], ...], ...], "b": [[re, im], ...], "eta": [re, im]}
Json operator_to_json(const DSOperator& op);
DSOperator operator_from_json(const Json& j);

Json report_to_json(const DSReport& report);
Json certificate_to_json(const EgorovCertificate& cert);

/// Reads a JSON document from disk; throws std::runtime_error on I/O failure
/// and nlohmann::json::exception on malformed input.
Json read_json_file(const std::string& path);

}  // namespace ergo
