#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dbrp/astar.hpp"
#include "dbrp/benchmark.hpp"
#include "dbrp/io.hpp"
#include "dbrp/matching.hpp"
#include "dbrp/mcts.hpp"
#include "dbrp/refinement.hpp"
#include "dbrp/scene_gen.hpp"
#include "dbrp/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoPlan = 1;
constexpr int kExitInput = 2;

constexpr const char* kSchemaHelp = R"(Input documents (JSON, "schema": 1):
  scene:      {"mode": "ee"|"mb", "table": {"w", "h"}, "c_pp", "manipulator": [x, y],
               "objects": [{"id", "category", "w", "d", "x", "y"}],
               "stacks": [[top_id, base_id]],
               "goal": [{"id", "x", "y"} | {"id", "on": base_id}]}
              categories: primary_base, secondary_base, low_mass, high_mass
  plan:       {"actions": [{"kind": "move", "object", "to": [x, y]} |
                           {"kind": "stack", "object", "base"}], "total_cost"}
  detections: {"initial": [{"label", "cx", "cy", "w", "h"}], "target": [...]}
  matrix:     {"algos", "n", "phi", "modes", "seeds", "time_limit", "max_expansions",
               "n_buf", "stack_fraction", "refine", "jobs", ...}
)";

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    dbrp::save_text_file(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rearrangement planning with dynamic stacking"};
  app.require_subcommand(1);
  app.fallthrough();  // global options such as --seed are accepted after the subcommand
  app.set_config("--config", "", "TOML file with option overrides");
  app.footer(kSchemaHelp);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Random seed")->envname("DBRP_SEED");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random start/goal scene pair");
  dbrp::GenConfig gc;
  std::string gen_mode = "ee";
  std::string gen_out;
  gen->add_option("--n", gc.n, "Object count")->check(CLI::PositiveNumber);
  gen->add_option("--phi", gc.phi, "Footprint density in (0, 1)");
  gen->add_option("--mode", gen_mode, "ee or mb")->check(CLI::IsMember({"ee", "mb"}));
  gen->add_flag("--stacks", gc.with_stacks, "Sample stacks in both scenes");
  gen->add_option("--out", gen_out, "Output scene file (default stdout)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Plan a rearrangement");
  std::string scene_path;
  std::string algo_name = "astar-ds";
  std::string plan_out;
  double time_limit = 360.0;
  std::size_t max_expansions = 0;
  int n_buf = 4;
  double stack_fraction = 0.6;
  int mcts_iterations = 0;
  plan_cmd->add_option("--scene", scene_path, "Scene file")->required();
  plan_cmd->add_option("--algo", algo_name, "astar-ds|astar-ss|astar-ns|mcts-ds|mcts-ns");
  plan_cmd->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--max-expansions", max_expansions, "A* expansion cap, 0 for none");
  plan_cmd->add_option("--buffers", n_buf, "Successor actions per object")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--stack-fraction", stack_fraction, "Share of the successors offered to stacks")
      ->check(CLI::Range(0.0, 1.0));
  plan_cmd->add_option("--mcts-iterations", mcts_iterations, "MCTS iteration cap, 0 for none");
  plan_cmd->add_option("--out", plan_out, "Output plan file (default stdout)");

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "Prune and re-buffer a plan");
  std::string refine_plan;
  std::string refine_mode = "dynamic";
  std::string refine_out;
  refine_cmd->add_option("--scene", scene_path, "Scene file")->required();
  refine_cmd->add_option("--plan", refine_plan, "Plan file")->required();
  refine_cmd->add_option("--mode", refine_mode, "static or dynamic")->check(CLI::IsMember({"static", "dynamic"}));
  refine_cmd->add_option("--out", refine_out, "Output plan file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark matrix");
  std::string matrix_path;
  std::string report_out;
  std::string raw_out;
  std::size_t jobs = 0;
  bench->add_option("--matrix", matrix_path, "Matrix file")->required();
  bench->add_option("--out", report_out, "Report file (default stdout)");
  bench->add_option("--raw", raw_out, "Raw trials, one JSON object per line");
  bench->add_option("--jobs", jobs, "Parallel trials (overrides the matrix)");

  // render
  auto* render = app.add_subcommand("render", "Draw a scene and optional plan as SVG");
  std::string render_plan;
  std::string render_out;
  render->add_option("--scene", scene_path, "Scene file")->required();
  render->add_option("--plan", render_plan, "Plan file");
  render->add_option("--out", render_out, "Output SVG (default stdout)");

  // match
  auto* match = app.add_subcommand("match", "Match initial and target detections per class");
  std::string detections_path;
  std::string match_out;
  match->add_option("--detections", detections_path, "Detections file")->required();
  match->add_option("--out", match_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) {
      gc.mode = *dbrp::parse_mode(gen_mode);
      gc.seed = seed;
      const dbrp::ScenePair pair = dbrp::generate_pair(gc);
      const auto cost = dbrp::CostConfig::for_mode(gc.mode);
      emit(gen_out, dbrp::scene_to_json({pair.start, pair.goal, cost}).dump(2) + "\n");
      return kExitOk;
    }

    if (*plan_cmd) {
      const auto algo = dbrp::parse_algo(algo_name);
      if (!algo) throw dbrp::InputError("unknown algorithm '" + algo_name + "'");
      const dbrp::SceneFile f = dbrp::scene_from_json(dbrp::load_json_file(scene_path));
      dbrp::ExpansionConfig ex;
      ex.n_buf = n_buf;
      ex.stack_fraction = stack_fraction;
      ex.stacking = dbrp::stacking_of(*algo);
      dbrp::Plan p;
      if (dbrp::is_astar(*algo)) {
        dbrp::PlannerConfig pc;
        pc.time_limit = time_limit;
        pc.max_expansions = max_expansions;
        pc.expansion = ex;
        pc.cost = f.cost;
        pc.seed = seed;
        pc.goal_attempt.max_iterations = 300;
        p = dbrp::plan(f.state, f.goal, pc);
      } else {
        dbrp::MctsConfig mc;
        mc.max_iterations = mcts_iterations;
        mc.time_budget = time_limit;
        mc.seed = seed;
        mc.expansion = ex;
        mc.cost = f.cost;
        auto found = dbrp::mcts_plan(f.state, f.goal, mc);
        if (!found) throw dbrp::NoPlanFound("no plan within budget");
        p = std::move(*found);
      }
      emit(plan_out, dbrp::plan_to_json(f.state, p).dump(2) + "\n");
      return kExitOk;
    }

    if (*refine_cmd) {
      const dbrp::SceneFile f = dbrp::scene_from_json(dbrp::load_json_file(scene_path));
      dbrp::Plan p = dbrp::plan_from_json(f.state, dbrp::load_json_file(refine_plan));
      try {
        p = dbrp::finalize_plan(f.cost, f.state, p.actions);
      } catch (const dbrp::InvalidPlan& e) {
        throw dbrp::InputError(std::string("plan does not replay: ") + e.what());
      }
      const dbrp::Plan out = dbrp::refine(f.state, p, f.cost, *dbrp::parse_refine_mode(refine_mode));
      emit(refine_out, dbrp::plan_to_json(f.state, out).dump(2) + "\n");
      return kExitOk;
    }

    if (*bench) {
      dbrp::BenchMatrix m = dbrp::matrix_from_json(dbrp::load_json_file(matrix_path));
      if (jobs > 0) m.jobs = jobs;
      std::ofstream raw;
      if (!raw_out.empty()) {
        raw.open(raw_out);
        if (!raw) throw dbrp::Error("cannot write '" + raw_out + "'");
      }
      const auto report = dbrp::run_suite(m, [&](const dbrp::TrialResult& t) {
        if (raw) raw << dbrp::trial_to_json(t).dump() << '\n' << std::flush;
        std::cerr << dbrp::to_string(t.spec.algo) << " n=" << t.spec.n << " phi=" << t.spec.phi
                  << " seed=" << t.spec.seed << (t.success ? " ok" : " FAIL") << '\n';
      });
      emit(report_out, dbrp::report_to_json(report).dump(2) + "\n");
      return kExitOk;
    }

    if (*render) {
      const dbrp::SceneFile f = dbrp::scene_from_json(dbrp::load_json_file(scene_path));
      std::optional<dbrp::Plan> p;
      if (!render_plan.empty()) {
        dbrp::Plan raw_plan = dbrp::plan_from_json(f.state, dbrp::load_json_file(render_plan));
        try {
          p = dbrp::finalize_plan(f.cost, f.state, raw_plan.actions);
        } catch (const dbrp::InvalidPlan& e) {
          throw dbrp::InputError(std::string("plan does not replay: ") + e.what());
        }
      }
      emit(render_out, dbrp::render_svg(f.state, p));
      return kExitOk;
    }

    if (*match) {
      const auto [initial, target] = dbrp::detections_from_json(dbrp::load_json_file(detections_path));
      emit(match_out, dbrp::correspondence_to_json(dbrp::match_instances(initial, target)).dump(2) + "\n");
      return kExitOk;
    }
  } catch (const dbrp::NoPlanFound& e) {
    std::cerr << "no plan: " << e.what() << '\n';
    return kExitNoPlan;
  } catch (const dbrp::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n\n" << kSchemaHelp;
    return kExitInput;
  } catch (const dbrp::CountMismatch& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const dbrp::GenerationFailed& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitNoPlan;
  } catch (const dbrp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
