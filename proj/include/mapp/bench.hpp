#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mapp/classify.hpp"
#include "mapp/engine.hpp"
#include "mapp/io.hpp"
#include "mapp/scenario.hpp"
#include "mapp/verify.hpp"

namespace mapp {

struct RunOptions {
  PlanMode mode = PlanMode::TiAc;
  Repositioning repositioning = Repositioning::Counting;
  bool attempt_all = false;
  double timeout_s = 600.0;  // per instance
  int jobs = 1;
  std::string omega_cache_path;  // optional: load before, save after (single runs)
};

// Exit codes shared by the CLI and the bench rows: 0 success, 1 algorithmic
// failure (a provably solvable unit was left unsolved, or the trace failed
// validation), 2 input error, 3 timeout.
struct InstanceResult {
  ResultRow row;
  Solution solution;
  Classification classification;
  Metrics metrics;
};

inline InstanceResult run_instance(const GridMap& map, const Scenario& scen,
                                   const RunOptions& opt, OmegaCache& cache) {
  const auto t0 = std::chrono::steady_clock::now();
  InstanceResult out;
  check_scenario(map, scen);

  out.classification = classify_instance(map, cache, scen.units, opt.mode);

  SolveOptions sopt;
  sopt.repositioning = opt.repositioning;
  sopt.attempt_all = opt.attempt_all;
  if (opt.timeout_s > 0)
    sopt.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(opt.timeout_s));
  out.solution = solve(map, scen.units, out.classification, sopt);

  out.metrics = extract_metrics(out.solution, scen.units);
  out.metrics.lambda_observed = cache.lambda_observed();
  for (const auto& p : out.classification.plans)
    if (p.pi) out.metrics.pi_length_sum += std::uint64_t(p.pi->k());

  ResultRow& row = out.row;
  row.n = int(scen.units.size());
  row.m = map.passable_count();
  row.mode = to_string(opt.mode);
  for (const auto& p : out.classification.plans) {
    switch (p.label) {
      case ClassLabel::Slidable: ++row.slidable; break;
      case ClassLabel::TiSlidable: ++row.ti_slidable; break;
      case ClassLabel::AcSlidable: ++row.ac_slidable; break;
      case ClassLabel::TiAcSlidable: ++row.ti_ac_slidable; break;
      case ClassLabel::Unproven: ++row.unproven; break;
    }
  }
  row.solved = out.metrics.solved_units;
  row.total_moves = out.metrics.total_moves;
  row.undo_moves = out.metrics.undo_moves;

  bool provable_unsolved = false;
  for (std::size_t i = 0; i < scen.units.size(); ++i)
    if (out.classification.plans[i].provable() && !out.solution.solved[i])
      provable_unsolved = true;
  const bool valid =
      !validate(map, scen.units, out.solution.moves, out.solution.solved).has_value();

  if (out.solution.timed_out)
    row.exit_code = 3;
  else if (provable_unsolved || !valid || !out.solution.diag.clean())
    row.exit_code = 1;
  else
    row.exit_code = 0;
  row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return out;
}

// Scenario files under dir, sorted by path for reproducible row sets.
inline std::vector<std::string> find_scenarios(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".scen")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

// Runs every scenario file in its own engine; failures are isolated per
// instance. With jobs > 1 the rows are identical to a sequential run apart
// from ordering (each instance owns a private omega cache), so the output is
// sorted before it is returned.
inline std::vector<ResultRow> run_bench(const std::vector<std::string>& scen_paths,
                                        const RunOptions& opt) {
  std::vector<ResultRow> rows(scen_paths.size());
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, opt.jobs);

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= scen_paths.size()) return;
      ResultRow row;
      row.scen_id = std::filesystem::path(scen_paths[i]).filename().string();
      try {
        Scenario scen = parse_scenario(read_file(scen_paths[i]));
        std::filesystem::path map_path(scen.map_ref);
        if (map_path.is_relative())
          map_path = std::filesystem::path(scen_paths[i]).parent_path() / map_path;
        GridMap map = GridMap::parse(read_file(map_path.string()));
        row.map_id = map_path.filename().string();
        OmegaCache cache;
        if (!opt.omega_cache_path.empty()) {
          std::istringstream in(read_file(opt.omega_cache_path));
          cache.load(in);
        }
        InstanceResult res = run_instance(map, scen, opt, cache);
        res.row.scen_id = row.scen_id;
        res.row.map_id = row.map_id;
        row = res.row;
      } catch (const std::exception&) {
        row.exit_code = 2;
      }
      rows[i] = std::move(row);
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.scen_id != b.scen_id) return a.scen_id < b.scen_id;
    return a.map_id < b.map_id;
  });
  return rows;
}

}  // namespace mapp
