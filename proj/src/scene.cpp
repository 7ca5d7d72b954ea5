#include "dbrp/scene.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dbrp {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::PrimaryBase:
      return "primary_base";
    case Category::SecondaryBase:
      return "secondary_base";
    case Category::LowMass:
      return "low_mass";
    case Category::HighMass:
      return "high_mass";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view s) {
  for (Category c : kAllCategories) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

int SceneState::item_on(std::size_t base) const {
  for (std::size_t i = 0; i < base_of.size(); ++i) {
    if (base_of[i] == static_cast<int>(base)) return static_cast<int>(i);
  }
  return kNoBase;
}

std::vector<std::size_t> SceneState::substack(std::size_t i) const {
  std::vector<std::size_t> out{i};
  int top = item_on(i);
  while (top != kNoBase && out.size() <= size()) {
    out.push_back(static_cast<std::size_t>(top));
    top = item_on(static_cast<std::size_t>(top));
  }
  return out;
}

bool SceneState::in_substack(std::size_t root, std::size_t other) const {
  // walk down from `other`; cheaper than building the substack
  int cur = static_cast<int>(other);
  for (std::size_t steps = 0; cur != kNoBase && steps <= size(); ++steps) {
    if (cur == static_cast<int>(root)) return true;
    cur = base_of[static_cast<std::size_t>(cur)];
  }
  return false;
}

std::optional<std::size_t> SceneState::find(std::string_view id) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (object(i).id == id) return i;
  }
  return std::nullopt;
}

namespace {

bool point_in_table(Point p, const Table& t) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= t.width && p.y <= t.height;
}

}  // namespace

void check_scene(const SceneState& s, const GridSpec& grid) {
  const std::size_t n = s.size();
  if (!s.objects || s.objects->size() != n || s.base_of.size() != n) {
    throw InvalidScene("object catalogue, positions and forest disagree in size");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = s.object(i);
    if (!(o.width > 0.0) || !(o.depth > 0.0)) throw InvalidScene("object '" + o.id + "' has a non-positive footprint");
    if (!ids.insert(o.id).second) throw InvalidScene("duplicate object id '" + o.id + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int b = s.base_of[i];
    if (b == kNoBase) continue;
    if (b < 0 || static_cast<std::size_t>(b) >= n || static_cast<std::size_t>(b) == i) {
      throw InvalidScene("object '" + s.object(i).id + "' has an invalid base");
    }
    if (!stackable(s.category(i), s.category(static_cast<std::size_t>(b)))) {
      throw InvalidScene("unstable stack: '" + s.object(i).id + "' on '" + s.object(static_cast<std::size_t>(b)).id + "'");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s.base_of[j] == b) throw InvalidScene("base '" + s.object(static_cast<std::size_t>(b)).id + "' supports two items");
    }
  }
  // acyclic: every chain must reach a root within n steps
  for (std::size_t i = 0; i < n; ++i) {
    int cur = static_cast<int>(i);
    std::size_t steps = 0;
    while (cur != kNoBase && steps <= n) {
      cur = s.base_of[static_cast<std::size_t>(cur)];
      ++steps;
    }
    if (cur != kNoBase) throw InvalidScene("stacking relation contains a cycle");
    if (s.base_of[i] != kNoBase && !(s.positions[i] == s.positions[static_cast<std::size_t>(s.base_of[i])])) {
      throw InvalidScene("stacked object '" + s.object(i).id + "' is not at its base position");
    }
  }
  const int cols = table_cols(s.table, grid);
  const int rows = table_rows(s.table, grid);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.is_root(i)) continue;
    const CellRect r = s.cells(i, grid);
    if (r.empty()) throw ResolutionTooCoarse("object '" + s.object(i).id + "' rasterizes to zero cells");
    if (!r.inside(cols, rows)) throw InvalidScene("object '" + s.object(i).id + "' lies outside the table");
    roots.push_back(i);
  }
  for (std::size_t a = 0; a < roots.size(); ++a) {
    for (std::size_t b = a + 1; b < roots.size(); ++b) {
      if (s.cells(roots[a], grid).intersects(s.cells(roots[b], grid))) {
        throw InvalidScene("objects '" + s.object(roots[a]).id + "' and '" + s.object(roots[b]).id + "' overlap");
      }
    }
  }
  if (!point_in_table(s.manipulator, s.table)) throw InvalidScene("manipulator outside the workspace");
}

SceneState make_scene(std::vector<ObjectSpec> objects, Table table, std::vector<Point> positions,
                      const std::vector<std::pair<std::size_t, std::size_t>>& stacks, Point manipulator,
                      const GridSpec& grid) {
  if (positions.size() != objects.size()) throw InvalidScene("one position per object required");
  SceneState s;
  s.table = table;
  s.base_of.assign(objects.size(), kNoBase);
  s.objects = std::make_shared<const std::vector<ObjectSpec>>(std::move(objects));
  s.positions = std::move(positions);
  s.manipulator = manipulator;
  for (auto [top, base] : stacks) {
    if (top >= s.size() || base >= s.size()) throw InvalidScene("stack references an unknown object");
    if (s.base_of[top] != kNoBase) throw InvalidScene("object stacked on two bases");
    s.base_of[top] = static_cast<int>(base);
  }
  // snap stacked objects to the root of their chain
  for (std::size_t i = 0; i < s.size(); ++i) {
    int cur = static_cast<int>(i);
    std::size_t steps = 0;
    while (s.base_of[static_cast<std::size_t>(cur)] != kNoBase && steps <= s.size()) {
      cur = s.base_of[static_cast<std::size_t>(cur)];
      ++steps;
    }
    s.positions[i] = s.positions[static_cast<std::size_t>(cur)];
  }
  check_scene(s, grid);
  return s;
}

bool at_goal(const SceneState& s, const GoalSpec& goal, std::size_t i, double tol) {
  return std::visit(
      [&](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, TargetPosition>) {
          return s.is_root(i) && euclidean(s.positions[i], g.at) <= tol + 1e-9;
        } else {
          return s.base_of[i] == static_cast<int>(g.base);
        }
      },
      goal.goals[i]);
}

bool is_goal(const SceneState& s, const GoalSpec& goal, double tol) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!at_goal(s, goal, i, tol)) return false;
  }
  return true;
}

std::size_t satisfied_count(const SceneState& s, const GoalSpec& goal, double tol) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < s.size(); ++i) k += at_goal(s, goal, i, tol) ? 1 : 0;
  return k;
}

SceneState goal_state(const SceneState& s, const GoalSpec& goal, const GridSpec& grid) {
  if (goal.goals.size() != s.size()) throw InvalidScene("goal must have one entry per object");
  std::vector<Point> positions(s.size());
  std::vector<std::pair<std::size_t, std::size_t>> stacks;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (const auto* tp = std::get_if<TargetPosition>(&goal.goals[i])) {
      positions[i] = tp->at;
    } else {
      const auto base = std::get<TargetStackOn>(goal.goals[i]).base;
      if (base >= s.size()) throw InvalidScene("goal stacks onto an unknown object");
      stacks.emplace_back(i, base);
    }
  }
  return make_scene(*s.objects, s.table, std::move(positions), stacks, s.manipulator, grid);
}

void check_goal(const SceneState& s, const GoalSpec& goal, const GridSpec& grid) { (void)goal_state(s, goal, grid); }

bool can_stack(const SceneState& s, std::size_t object, std::size_t base) {
  if (object == base || object >= s.size() || base >= s.size()) return false;
  if (!s.top_clear(base)) return false;
  if (s.in_substack(object, base)) return false;
  return stackable(s.category(object), s.category(base));
}

bool validate_action(const SceneState& s, const Action& a, const GridSpec& grid) {
  if (a.object >= s.size()) return false;
  if (a.kind == ActionKind::Stack) return can_stack(s, a.object, a.base);

  const auto& o = s.object(a.object);
  const CellRect target = footprint_cells(a.to, o.width, o.depth, grid);
  if (target.empty() || !target.inside(table_cols(s.table, grid), table_rows(s.table, grid))) return false;
  const CellRect window = target.inflated(grid.clearance);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j == a.object || !s.is_root(j)) continue;
    if (window.intersects(s.cells(j, grid))) return false;
  }
  return true;
}

Action resolve(const SceneState& s, Action a) {
  a.pick = s.positions[a.object];
  a.place = a.kind == ActionKind::Move ? a.to : s.positions[a.base];
  return a;
}

SceneState apply_unchecked(const SceneState& s, const Action& a) {
  SceneState next = s;
  const Point place = a.kind == ActionKind::Move ? a.to : s.positions[a.base];
  for (std::size_t k : s.substack(a.object)) next.positions[k] = place;
  next.base_of[a.object] = a.kind == ActionKind::Move ? kNoBase : static_cast<int>(a.base);
  next.manipulator = place;
  return next;
}

SceneState apply_action(const SceneState& s, const Action& a, const GridSpec& grid) {
  if (!validate_action(s, a, grid)) {
    std::ostringstream msg;
    msg << (a.kind == ActionKind::Move ? "move" : "stack") << " of object " << a.object << " is not valid";
    throw InvalidAction(msg.str());
  }
  return apply_unchecked(s, a);
}

std::vector<SceneState> replay(const SceneState& s0, std::vector<Action>& actions, const GridSpec& grid) {
  std::vector<SceneState> states;
  states.reserve(actions.size() + 1);
  states.push_back(s0);
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const SceneState& cur = states.back();
    if (!validate_action(cur, actions[t], grid)) {
      throw InvalidPlan("action " + std::to_string(t) + " is not valid on replay");
    }
    actions[t] = resolve(cur, actions[t]);
    states.push_back(apply_unchecked(cur, actions[t]));
  }
  return states;
}

bool same_arrangement(const SceneState& a, const SceneState& b, double tol) {
  if (a.size() != b.size() || a.base_of != b.base_of) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (euclidean(a.positions[i], b.positions[i]) > tol) return false;
  }
  return true;
}

}  // namespace dbrp
