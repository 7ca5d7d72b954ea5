#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbrp/benchmark.hpp"
#include "dbrp/matching.hpp"

namespace dbrp {

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent input document.
class InputError : public Error {
 public:
  using Error::Error;
};

struct SceneFile {
  SceneState state;
  GoalSpec goal;
  CostConfig cost;
};

// Scene document:
//   {"schema": 1, "mode": "ee"|"mb", "table": {"w", "h"}, "c_pp"?, "manipulator"?: [x, y],
//    "objects": [{"id", "category", "w", "d", "x", "y"}], "stacks": [[top_id, base_id]],
//    "goal": [{"id", "x", "y"} | {"id", "on": base_id}]}
// Stacked objects may omit x and y. Table and home default to the mode's normalized setup.
nlohmann::json scene_to_json(const SceneFile& f);
SceneFile scene_from_json(const nlohmann::json& j);

// Plan document:
//   {"schema": 1, "total_cost", "actions": [{"kind": "move", "object", "to": [x, y]} |
//                                           {"kind": "stack", "object", "base"}]}
// Each action also carries its derived "pick" and "place"; they are ignored on input.
nlohmann::json plan_to_json(const SceneState& s, const Plan& p);
Plan plan_from_json(const SceneState& s, const nlohmann::json& j);

// Detections: {"schema": 1, "initial": [{"label", "cx", "cy", "w", "h"}], "target": [...]}
std::pair<std::vector<Detection>, std::vector<Detection>> detections_from_json(const nlohmann::json& j);
nlohmann::json correspondence_to_json(const Correspondence& c);

BenchMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const BenchMatrix& m);

nlohmann::json trial_to_json(const TrialResult& t);
TrialResult trial_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const BenchmarkReport& r);

/// One JSON object per line.
void write_ndjson(std::ostream& os, const std::vector<TrialResult>& trials);
std::vector<TrialResult> read_ndjson(std::istream& is);

nlohmann::json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace dbrp
