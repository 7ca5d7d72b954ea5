#include "dbrp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dbrp {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

void check_schema(const json& j) {
  if (!j.is_object()) throw InputError("document must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
    throw InputError("unsupported schema version " + j.at("schema").dump());
  }
}

json point(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::size_t index_of(const SceneState& s, const json& id) {
  if (!id.is_string()) throw InputError("object references must be id strings");
  const auto i = s.find(id.get<std::string>());
  if (!i) throw InputError("unknown object id '" + id.get<std::string>() + "'");
  return *i;
}

}  // namespace

json scene_to_json(const SceneFile& f) {
  const SceneState& s = f.state;
  json objects = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& o = s.object(i);
    objects.push_back({{"id", o.id},
                       {"category", to_string(o.category)},
                       {"w", o.width},
                       {"d", o.depth},
                       {"x", s.positions[i].x},
                       {"y", s.positions[i].y}});
  }
  json stacks = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.is_root(i)) stacks.push_back({s.object(i).id, s.object(static_cast<std::size_t>(s.base_of[i])).id});
  }
  json goal = json::array();
  for (std::size_t i = 0; i < f.goal.goals.size(); ++i) {
    const auto& g = f.goal.goals[i];
    if (const auto* p = std::get_if<TargetPosition>(&g)) {
      goal.push_back({{"id", s.object(i).id}, {"x", p->at.x}, {"y", p->at.y}});
    } else {
      goal.push_back({{"id", s.object(i).id}, {"on", s.object(std::get<TargetStackOn>(g).base).id}});
    }
  }
  return {{"schema", kSchemaVersion},
          {"mode", to_string(f.cost.mode)},
          {"table", {{"w", s.table.width}, {"h", s.table.height}}},
          {"c_pp", f.cost.c_pp},
          {"home", point(f.cost.home)},
          {"manipulator", point(s.manipulator)},
          {"objects", objects},
          {"stacks", stacks},
          {"goal", goal}};
}

SceneFile scene_from_json(const json& j) {
  check_schema(j);
  SceneFile f;
  const auto mode = parse_mode(j.value("mode", std::string("ee")));
  if (!mode) throw InputError("mode must be \"ee\" or \"mb\"");
  f.cost = CostConfig::for_mode(*mode);
  if (j.contains("table")) {
    f.cost.table = Table{field<double>(j["table"], "w"), field<double>(j["table"], "h")};
  }
  if (j.contains("c_pp")) f.cost.c_pp = field<double>(j, "c_pp");
  if (j.contains("home")) f.cost.home = point_from(j["home"], "home");
  const Point manip = j.contains("manipulator") ? point_from(j["manipulator"], "manipulator") : f.cost.home;

  const json& objs = j.contains("objects") ? j["objects"] : json::array();
  if (!objs.is_array()) throw InputError("objects must be an array");
  std::vector<ObjectSpec> specs;
  std::vector<Point> positions;
  for (const json& o : objs) {
    const auto cat = parse_category(field<std::string>(o, "category"));
    if (!cat) throw InputError("unknown category '" + o["category"].get<std::string>() + "'");
    specs.push_back({field<std::string>(o, "id"), *cat, field<double>(o, "w"), field<double>(o, "d")});
    positions.push_back({o.value("x", 0.0), o.value("y", 0.0)});
  }
  std::vector<std::pair<std::size_t, std::size_t>> stacks;
  const auto lookup = [&specs](const json& id) -> std::size_t {
    if (!id.is_string()) throw InputError("object references must be id strings");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].id == id.get<std::string>()) return i;
    }
    throw InputError("unknown object id '" + id.get<std::string>() + "'");
  };
  if (j.contains("stacks")) {
    for (const json& pr : j["stacks"]) {
      if (!pr.is_array() || pr.size() != 2) throw InputError("stacks entries must be [top, base]");
      stacks.emplace_back(lookup(pr[0]), lookup(pr[1]));
    }
  }
  try {
    f.state = make_scene(std::move(specs), f.cost.table, std::move(positions), stacks, manip);
  } catch (const InvalidScene& e) {
    throw InputError(std::string("invalid scene: ") + e.what());
  }

  f.goal.goals.assign(f.state.size(), Goal{});
  std::vector<bool> seen(f.state.size(), false);
  const json& goals = j.contains("goal") ? j["goal"] : json::array();
  for (const json& g : goals) {
    const std::size_t i = index_of(f.state, g.contains("id") ? g["id"] : json());
    if (seen[i]) throw InputError("duplicate goal for '" + f.state.object(i).id + "'");
    seen[i] = true;
    if (g.contains("on")) {
      f.goal.goals[i] = TargetStackOn{index_of(f.state, g["on"])};
    } else {
      f.goal.goals[i] = TargetPosition{{field<double>(g, "x"), field<double>(g, "y")}};
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InputError("missing goal for '" + f.state.object(i).id + "'");
  }
  try {
    check_goal(f.state, f.goal);
  } catch (const InvalidScene& e) {
    throw InputError(std::string("invalid goal: ") + e.what());
  }
  return f;
}

json plan_to_json(const SceneState& s, const Plan& p) {
  json actions = json::array();
  for (const Action& a : p.actions) {
    json ja = {{"kind", a.kind == ActionKind::Move ? "move" : "stack"}, {"object", s.object(a.object).id}};
    if (a.kind == ActionKind::Move) {
      ja["to"] = point(a.to);
    } else {
      ja["base"] = s.object(a.base).id;
    }
    ja["pick"] = point(a.pick);
    ja["place"] = point(a.place);
    actions.push_back(std::move(ja));
  }
  return {{"schema", kSchemaVersion}, {"total_cost", p.total_cost}, {"actions", actions}};
}

Plan plan_from_json(const SceneState& s, const json& j) {
  check_schema(j);
  Plan p;
  const json& actions = j.contains("actions") ? j["actions"] : json::array();
  if (!actions.is_array()) throw InputError("actions must be an array");
  for (const json& ja : actions) {
    const std::string kind = field<std::string>(ja, "kind");
    const std::size_t obj = index_of(s, ja.contains("object") ? ja["object"] : json());
    if (kind == "move") {
      p.actions.push_back(Action::move(obj, point_from(ja.contains("to") ? ja["to"] : json(), "to")));
    } else if (kind == "stack") {
      p.actions.push_back(Action::stack(obj, index_of(s, ja.contains("base") ? ja["base"] : json())));
    } else {
      throw InputError("action kind must be \"move\" or \"stack\"");
    }
  }
  p.total_cost = j.value("total_cost", 0.0);
  return p;
}

std::pair<std::vector<Detection>, std::vector<Detection>> detections_from_json(const json& j) {
  check_schema(j);
  const auto read = [](const json& arr, const char* name) {
    if (!arr.is_array()) throw InputError(std::string(name) + " must be an array");
    std::vector<Detection> out;
    for (const json& d : arr) {
      out.push_back({field<std::string>(d, "label"), field<double>(d, "cx"), field<double>(d, "cy"),
                     d.value("w", 0.0), d.value("h", 0.0)});
    }
    return out;
  };
  return {read(j.contains("initial") ? j["initial"] : json(), "initial"),
          read(j.contains("target") ? j["target"] : json(), "target")};
}

json correspondence_to_json(const Correspondence& c) {
  return {{"schema", kSchemaVersion}, {"target_of", c.target_of}, {"total_cost", c.total_cost}};
}

BenchMatrix matrix_from_json(const json& j) {
  check_schema(j);
  BenchMatrix m;
  try {
    if (j.contains("algos")) {
      m.algos.clear();
      for (const auto& a : j["algos"]) {
        const auto algo = parse_algo(a.get<std::string>());
        if (!algo) throw InputError("unknown algorithm '" + a.get<std::string>() + "'");
        m.algos.push_back(*algo);
      }
    }
    if (j.contains("n")) m.n_values = j["n"].get<std::vector<std::size_t>>();
    if (j.contains("phi")) m.phi_values = j["phi"].get<std::vector<double>>();
    if (j.contains("modes")) {
      m.modes.clear();
      for (const auto& s : j["modes"]) {
        const auto mode = parse_mode(s.get<std::string>());
        if (!mode) throw InputError("unknown mode '" + s.get<std::string>() + "'");
        m.modes.push_back(*mode);
      }
    }
    if (j.contains("seeds")) {
      if (j["seeds"].is_number_integer()) {
        m.seeds.resize(j["seeds"].get<std::size_t>());
        for (std::size_t i = 0; i < m.seeds.size(); ++i) m.seeds[i] = i;
      } else {
        m.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      }
    }
    m.time_limit = j.value("time_limit", m.time_limit);
    m.max_expansions = j.value("max_expansions", m.max_expansions);
    m.mcts_iterations = j.value("mcts_iterations", m.mcts_iterations);
    m.goal_attempt_iterations = j.value("goal_attempt_iterations", m.goal_attempt_iterations);
    m.goal_attempt_every = j.value("goal_attempt_every", m.goal_attempt_every);
    m.n_buf = j.value("n_buf", m.n_buf);
    m.stack_fraction = j.value("stack_fraction", m.stack_fraction);
    m.with_stacks = j.value("with_stacks", m.with_stacks);
    m.refine = j.value("refine", m.refine);
    m.jobs = j.value("jobs", m.jobs);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad matrix: ") + e.what());
  }
  if (m.algos.empty() || m.n_values.empty() || m.phi_values.empty() || m.modes.empty()) {
    throw InputError("matrix needs at least one algorithm, object count, density and mode");
  }
  if (!(m.time_limit > 0.0) || m.n_buf < 1) throw InputError("time_limit and n_buf must be positive");
  return m;
}

json matrix_to_json(const BenchMatrix& m) {
  json algos = json::array();
  for (Algo a : m.algos) algos.push_back(to_string(a));
  json modes = json::array();
  for (ManipulatorMode md : m.modes) modes.push_back(to_string(md));
  return {{"schema", kSchemaVersion},
          {"algos", algos},
          {"n", m.n_values},
          {"phi", m.phi_values},
          {"modes", modes},
          {"seeds", m.seed_list()},
          {"time_limit", m.time_limit},
          {"max_expansions", m.max_expansions},
          {"mcts_iterations", m.mcts_iterations},
          {"goal_attempt_iterations", m.goal_attempt_iterations},
          {"goal_attempt_every", m.goal_attempt_every},
          {"n_buf", m.n_buf},
          {"stack_fraction", m.stack_fraction},
          {"with_stacks", m.with_stacks},
          {"refine", m.refine},
          {"jobs", m.jobs}};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

json trial_to_json(const TrialResult& t) {
  return {{"schema", kSchemaVersion},
          {"algo", to_string(t.spec.algo)},
          {"n", t.spec.n},
          {"phi", t.spec.phi},
          {"mode", to_string(t.spec.mode)},
          {"seed", t.spec.seed},
          {"success", t.success},
          {"cost", optional_number(t.cost)},
          {"actions", t.actions},
          {"seconds", t.seconds},
          {"expansions", t.expansions},
          {"refined", t.refined},
          {"refined_static", optional_number(t.refined_static)},
          {"refined_dynamic", optional_number(t.refined_dynamic)},
          {"error", t.error}};
}

TrialResult trial_from_json(const json& j) {
  check_schema(j);
  TrialResult t;
  try {
    const auto algo = parse_algo(j.at("algo").get<std::string>());
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!algo || !mode) throw InputError("bad algo or mode in trial record");
    t.spec = TrialSpec{*algo, j.at("n").get<std::size_t>(), j.at("phi").get<double>(), *mode,
                       j.at("seed").get<std::uint64_t>()};
    t.success = j.at("success").get<bool>();
    t.cost = number_or_null(j, "cost");
    t.actions = j.value("actions", std::size_t{0});
    t.seconds = j.value("seconds", 0.0);
    t.expansions = j.value("expansions", std::size_t{0});
    t.refined = j.value("refined", false);
    t.refined_static = number_or_null(j, "refined_static");
    t.refined_dynamic = number_or_null(j, "refined_dynamic");
    t.error = j.value("error", std::string());
  } catch (const json::exception& e) {
    throw InputError(std::string("bad trial record: ") + e.what());
  }
  if (t.success != t.cost.has_value()) throw InputError("trial cost must be present exactly when successful");
  return t;
}

json report_to_json(const BenchmarkReport& r) {
  json groups = json::array();
  for (const auto& [key, per_n] : r.cells) {
    json cells = json::array();
    for (const auto& [n, c] : per_n) {
      cells.push_back({{"n", n},
                       {"trials", c.trials},
                       {"successes", c.successes},
                       {"success_rate", c.success_rate},
                       {"avg_cost", optional_number(c.avg_cost)},
                       {"avg_actions", optional_number(c.avg_actions)},
                       {"esc", optional_number(c.esc)}});
    }
    const auto it = r.ops.find(key);
    groups.push_back({{"mode", to_string(key.mode)},
                      {"phi", key.phi},
                      {"variant", key.variant},
                      {"cells", cells},
                      {"ops", it == r.ops.end() ? json(nullptr) : optional_number(it->second)}});
  }
  json pirs = json::array();
  for (const auto& [mp, table] : r.pir) {
    for (const auto& [ab, value] : table) {
      pirs.push_back({{"mode", to_string(mp.first)}, {"phi", mp.second}, {"a", ab.first}, {"b", ab.second},
                      {"pir", value}});
    }
  }
  return {{"schema", kSchemaVersion}, {"groups", groups}, {"pir", pirs}, {"trials", r.trials.size()}};
}

void write_ndjson(std::ostream& os, const std::vector<TrialResult>& trials) {
  for (const auto& t : trials) os << trial_to_json(t).dump() << '\n';
}

std::vector<TrialResult> read_ndjson(std::istream& is) {
  std::vector<TrialResult> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("bad ndjson line: ") + e.what());
    }
    out.push_back(trial_from_json(j));
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("cannot write '" + path + "'");
}

}  // namespace dbrp
