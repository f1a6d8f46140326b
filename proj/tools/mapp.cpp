// Command-line front end: gen / classify / solve / validate / oracle / bench.
// Exit codes: 0 success, 1 algorithmic failure, 2 input error, 3 timeout.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "mapp/bench.hpp"
#include "mapp/classify.hpp"
#include "mapp/engine.hpp"
#include "mapp/io.hpp"
#include "mapp/scenario.hpp"
#include "mapp/verify.hpp"

namespace {

mapp::PlanMode parse_mode(const std::string& s) {
  if (s == "basic") return mapp::PlanMode::Basic;
  if (s == "ti") return mapp::PlanMode::Ti;
  if (s == "ac") return mapp::PlanMode::Ac;
  if (s == "ti-ac") return mapp::PlanMode::TiAc;
  throw CLI::ValidationError("--mode", "expected basic|ti|ac|ti-ac");
}

mapp::Repositioning parse_repositioning(const std::string& s) {
  if (s == "reverse") return mapp::Repositioning::Reverse;
  if (s == "counting") return mapp::Repositioning::Counting;
  throw CLI::ValidationError("--repositioning", "expected reverse|counting");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    mapp::write_file(out_path, content);
}

struct CommonArgs {
  std::string map_path;
  std::string scen_path;
  std::string mode = "ti-ac";
  std::string repositioning = "counting";
  std::string out;
  std::string omega_cache;
  bool attempt_all = false;
  double timeout_s = 600.0;
};

mapp::GridMap load_map(const std::string& path) {
  return mapp::GridMap::parse(mapp::read_file(path));
}

mapp::Scenario load_scenario(const mapp::GridMap& map, const std::string& path) {
  mapp::Scenario scen = mapp::parse_scenario(mapp::read_file(path));
  mapp::check_scenario(map, scen);
  return scen;
}

std::string classification_csv(const std::vector<mapp::UnitSpec>& units,
                               const mapp::Classification& cls) {
  std::ostringstream out;
  out << "id,label,pi_len,tunnels,tau,kappa_init,crossed_targets\n";
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& p = cls.plans[i];
    out << units[i].id << ',' << to_string(p.label) << ',' << (p.pi ? p.pi->k() : -1) << ','
        << p.tunnels.size() << ',' << (p.buffer ? p.buffer->tau : 0) << ','
        << (p.buffer ? p.buffer->kappa_init : 0) << ','
        << (p.pi ? p.pi->crossed_targets.size() : 0) << '\n';
  }
  return out.str();
}

int cmd_classify(const CommonArgs& args) {
  auto map = load_map(args.map_path);
  auto scen = load_scenario(map, args.scen_path);
  mapp::OmegaCache cache;
  if (!args.omega_cache.empty()) {
    std::istringstream in(mapp::read_file(args.omega_cache));
    cache.load(in);
  }
  auto cls = mapp::classify_instance(map, cache, scen.units, parse_mode(args.mode));
  emit(args.out, classification_csv(scen.units, cls));
  int provable = cls.provable_count();
  int total = int(scen.units.size());
  double pct = total == 0 ? 100.0 : 100.0 * double(provable) / double(total);
  std::cout << "provable " << provable << "/" << total << " (" << pct << "%)\n";
  if (!args.omega_cache.empty()) {
    std::ostringstream out;
    cache.save(out);
    mapp::write_file(args.omega_cache, out.str());
  }
  return 0;
}

int cmd_solve(const CommonArgs& args) {
  auto map = load_map(args.map_path);
  auto scen = load_scenario(map, args.scen_path);
  mapp::OmegaCache cache;
  if (!args.omega_cache.empty()) {
    try {
      std::istringstream in(mapp::read_file(args.omega_cache));
      cache.load(in);
    } catch (const mapp::ParseError&) {
      // first run: the cache file does not exist yet
    }
  }
  mapp::RunOptions opt;
  opt.mode = parse_mode(args.mode);
  opt.repositioning = parse_repositioning(args.repositioning);
  opt.attempt_all = args.attempt_all;
  opt.timeout_s = args.timeout_s;
  auto res = mapp::run_instance(map, scen, opt, cache);
  emit(args.out, emit_trace(res.solution.moves));
  if (!args.omega_cache.empty()) {
    std::ostringstream out;
    cache.save(out);
    mapp::write_file(args.omega_cache, out.str());
  }
  std::cout << "solved " << res.metrics.solved_units << "/" << res.metrics.units << " moves "
            << res.metrics.total_moves << " undo " << res.metrics.undo_moves << " steps "
            << res.metrics.progression_steps << "\n";
  return res.row.exit_code;
}

int cmd_validate(const CommonArgs& args, const std::string& trace_path) {
  auto map = load_map(args.map_path);
  auto scen = load_scenario(map, args.scen_path);
  auto moves = mapp::parse_trace(mapp::read_file(trace_path));
  // The trace alone does not say which units ended solved; require that every
  // unit whose final position is its target is consistent, and that moves are
  // legal. Solved flags are reconstructed from final positions.
  std::vector<std::uint8_t> solved(scen.units.size(), 0);
  {
    std::unordered_map<int, mapp::Loc> pos;
    for (const auto& u : scen.units) pos[u.id] = u.start;
    for (const auto& m : moves) {
      auto it = pos.find(m.unit);
      if (it != pos.end() && it->second == m.from) it->second = m.to;
    }
    for (std::size_t i = 0; i < scen.units.size(); ++i)
      solved[i] = pos[scen.units[i].id] == scen.units[i].target ? 1 : 0;
  }
  auto violation = mapp::validate(map, scen.units, moves, solved);
  if (violation) {
    std::cout << "VIOLATION at move " << violation->move_ordinal << ": "
              << to_string(violation->reason) << "\n";
    return 1;
  }
  std::cout << "OK\n";
  return 0;
}

int cmd_gen(const std::string& map_path, int n, std::uint64_t seed, const std::string& out) {
  auto map = load_map(map_path);
  mapp::Scenario scen = mapp::gen_scenario(map, n, seed);
  scen.map_ref = map_path;
  emit(out, emit_scenario(scen));
  return 0;
}

int cmd_oracle(const CommonArgs& args, std::uint64_t max_states) {
  auto map = load_map(args.map_path);
  auto scen = load_scenario(map, args.scen_path);
  auto res = mapp::joint_oracle(map, scen.units, max_states);
  switch (res.verdict) {
    case mapp::OracleVerdict::Solvable:
      std::cout << "SOLVABLE " << res.opt_moves << "\n";
      break;
    case mapp::OracleVerdict::Unsolvable: std::cout << "UNSOLVABLE\n"; break;
    case mapp::OracleVerdict::Limit: std::cout << "LIMIT\n"; break;
  }
  return 0;
}

int cmd_bench(const CommonArgs& args, const std::string& dir, int jobs) {
  mapp::RunOptions opt;
  opt.mode = parse_mode(args.mode);
  opt.repositioning = parse_repositioning(args.repositioning);
  opt.attempt_all = args.attempt_all;
  opt.timeout_s = args.timeout_s;
  opt.jobs = jobs;
  opt.omega_cache_path = args.omega_cache;
  auto rows = mapp::run_bench(mapp::find_scenarios(dir), opt);
  std::string csv = mapp::result_csv_header() + "\n";
  for (const auto& r : rows) csv += mapp::to_csv(r) + "\n";
  emit(args.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAPP multi-agent path planning toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string trace_path, dir;
  int n = 0, jobs = 1;
  std::uint64_t seed = 0, max_states = 5'000'000;

  auto add_common = [&](CLI::App* cmd, bool needs_scen = true) {
    cmd->add_option("--map", args.map_path)->required();
    if (needs_scen) cmd->add_option("--scen", args.scen_path)->required();
    cmd->add_option("--out", args.out);
  };
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mode", args.mode, "basic|ti|ac|ti-ac");
    cmd->add_option("--repositioning", args.repositioning, "reverse|counting");
    cmd->add_flag("--attempt-all", args.attempt_all);
    cmd->add_option("--timeout-s", args.timeout_s);
    cmd->add_option("--omega-cache", args.omega_cache);
  };

  auto* c_gen = app.add_subcommand("gen", "generate a random scenario");
  c_gen->add_option("--map", args.map_path)->required();
  c_gen->add_option("--n", n)->required();
  c_gen->add_option("--seed", seed);
  c_gen->add_option("--out", args.out);

  auto* c_classify = app.add_subcommand("classify", "label units by solvable subclass");
  add_common(c_classify);
  add_solver_flags(c_classify);

  auto* c_solve = app.add_subcommand("solve", "run the solver and write a trace");
  add_common(c_solve);
  add_solver_flags(c_solve);

  auto* c_validate = app.add_subcommand("validate", "replay and check a trace");
  add_common(c_validate, true);
  c_validate->add_option("--trace", trace_path)->required();

  auto* c_oracle = app.add_subcommand("oracle", "brute-force joint-state ground truth");
  add_common(c_oracle);
  c_oracle->add_option("--max-states", max_states);

  auto* c_bench = app.add_subcommand("bench", "run every scenario under a directory");
  c_bench->add_option("--dir", dir)->required();
  c_bench->add_option("--out", args.out);
  c_bench->add_option("--jobs", jobs);
  add_solver_flags(c_bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_gen->parsed()) return cmd_gen(args.map_path, n, seed, args.out);
    if (c_classify->parsed()) return cmd_classify(args);
    if (c_solve->parsed()) return cmd_solve(args);
    if (c_validate->parsed()) return cmd_validate(args, trace_path);
    if (c_oracle->parsed()) return cmd_oracle(args, max_states);
    if (c_bench->parsed()) return cmd_bench(args, dir, jobs);
  } catch (const mapp::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const mapp::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
