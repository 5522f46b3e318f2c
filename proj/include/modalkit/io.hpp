#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "modalkit/correspondence.hpp"
#include "modalkit/model.hpp"
#include "modalkit/search.hpp"
#include "modalkit/semantics.hpp"

namespace modalkit {

using json = nlohmann::json;

/// A loaded model file: propositional unless it declares a domain.
using AnyModel = std::variant<PropModel, FoModel>;

/// Model file format:
///
///     {"worlds": ["w0", "w1"], "access": [["w0", "w1"]], "valuation": {"g": ["w1"]},
///      "domain": ["a", "b"], "mode": "varying", "exists_in": {"w0": ["a"], "w1": ["a", "b"]},
///      "flexible_preds": {"P": {"arity": 1, "extension": {"w0": [["a"]], "w1": []}}},
///      "rigid_preds": {"R": {"arity": 2, "extension": [["a", "b"]]}},
///      "rigid_consts": {"c": "a"}}
///
/// Everything from "domain" on is optional. Unknown keys are rejected, except
/// "certificate", which countermodel output carries. Violations throw
/// ModelError naming the JSON path of the first offending value.
AnyModel model_from_json(const json& j);
Frame frame_from_json(const json& j);
DomainFrame dframe_from_json(const json& j);

/// Reads and parses a file; unreadable or malformed files throw ModelError with path "$".
json read_json_file(const std::string& path);

json to_json(const Frame& fr);
json to_json(const PropModel& m);
json to_json(const DomainFrame& df);
json to_json(const FoModel& m);
json to_json(const AnyModel& m);

/// World and individual indices are written as names taken from `fr` / `domain`.
json to_json(const Verdict& v, const Frame& fr, const std::vector<std::string>& domain = {});
json to_json(const AxiomReport& r, const Frame& fr);
json to_json(const BarcanReport& r, const DomainFrame& df);
json to_json(const ReadingReport& r);
/// The countermodel in model-file format plus a "certificate" block.
json to_json(const Countermodel& cm);

}  // namespace modalkit
