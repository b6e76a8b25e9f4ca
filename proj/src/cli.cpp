#include "mlpgg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "mlpgg/config.hpp"
#include "mlpgg/errors.hpp"

namespace mlpgg::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;
  std::string rg;
  int verbosity = 0;
};

std::string frequencies(const Trajectory& t) {
  std::string s;
  const auto labels = strategy_labels(t.setting());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k) s += ',';
    s += labels[k] + ":" + format_number(t.frequency(t.rounds(), k));
  }
  return s;
}

int simulate(const Options& opt, std::ostream& out) {
  auto cfg = config::load_simulate(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  const fs::path dir = opt.out;
  fs::create_directories(dir);

  const auto graph = PopulationGraph::periodic_lattice(cfg.lattice.width, cfg.lattice.height);
  const InitSpec init = cfg.init.value_or(UniformRandomInit{cfg.setting});
  const auto initial = initialize_profile(graph, init, derive_seed(cfg.seed, {0}));
  const auto traj = run(graph, initial, cfg.params, cfg.stop, derive_seed(cfg.seed, {1}), cfg.target);

  export_trajectory_csv(dir / "trajectory.csv", traj);
  for (const auto& [round, profile] : traj.snapshots()) {
    export_snapshot(dir, profile, cfg.lattice, round, cfg.snapshot_scale);
  }

  const auto& status = traj.status();
  if (status.kind == TerminalKind::absorbed) {
    out << "absorbed=" << format_strategy(*status.strategy);
  } else {
    out << "status=" << to_string(status.kind);
  }
  out << " rounds=" << traj.rounds() << " final=" << frequencies(traj) << '\n';
  return kExitOk;
}

int sweep_cmd(const Options& opt, std::ostream& out, std::ostream& err) {
  auto spec = config::load_sweep(opt.config);
  if (opt.seed) spec.base_seed = *opt.seed;
  const fs::path dir = opt.out;
  fs::create_directories(dir);
  const auto csv_path = dir / "phase.csv";
  const auto manifest_path = dir / "phase.manifest.jsonl";

  SweepOptions options;
  options.workers = opt.workers;
  if (opt.resume) {
    options.completed = read_manifest(manifest_path, spec);
  } else {
    fs::remove(manifest_path);
  }
  std::set<std::size_t> restored;
  for (const auto& [idx, rec] : options.completed) restored.insert(idx);

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw IoError("cannot write " + csv_path.string());
  csv << phase_csv_header() << '\n';
  std::ofstream manifest(manifest_path, std::ios::app);
  if (!manifest) throw IoError("cannot write " + manifest_path.string());

  options.sink = [&](const PhaseRecord& rec) {
    if (!restored.count(rec.point.index)) {
      manifest << manifest_line(rec) << '\n';
      manifest.flush();
      if (!manifest) throw IoError("manifest write failed for cell " + std::to_string(rec.point.index));
    }
    csv << phase_csv_row(spec, rec) << '\n';
    csv.flush();
    if (!csv) throw IoError("phase CSV write failed for cell " + std::to_string(rec.point.index));
    if (opt.verbosity > 0) err << "cell " << rec.point.index << ": " << rec.label << '\n';
  };

  const auto result = sweep(spec, std::move(options));
  for (const auto& e : result.errors) err << "cell " << e.cell_index << ": " << e.message << '\n';
  out << "cells=" << result.records.size() << " resumed=" << restored.size() << " errors=" << result.errors.size()
      << '\n';
  return result.errors.empty() ? kExitOk : kExitRuntime;
}

int boundary_cmd(const Options& opt, std::ostream& out) {
  auto cfg = config::load_boundary(opt.config);
  if (!opt.rg.empty()) {
    cfg.rg_values = config::parse_number_list(opt.rg);
    if (cfg.rg_values.size() < 2) throw ConfigError("--rg needs at least two values");
  }
  const fs::path dir = opt.out;
  fs::create_directories(dir);

  std::ofstream table(dir / "boundary_table.csv", std::ios::trunc);
  std::ofstream report(dir / "invariance_report.csv", std::ios::trunc);
  if (!table || !report) throw IoError("cannot write boundary outputs in " + dir.string());
  table << "patch_id,focus,direction,neighbor,focus_payoff,neighbor_payoff,probability\n";
  report << "patch_id,r_g,global_coop_fraction,direction,probability,deviation,status\n";

  bool all_pass = true;
  for (const auto& patch : cfg.patches) {
    const auto t = imitation_table(patch, cfg.params, cfg.population_size);
    for (const auto& e : t.entries) {
      table << patch.id << ',' << format_strategy(t.focus_strategy) << ',' << to_string(e.direction) << ','
            << format_strategy(e.neighbor_strategy) << ',' << format_number(e.focus_payoff) << ','
            << format_number(e.neighbor_payoff) << ',' << format_number(e.probability) << '\n';
    }
    const auto rep = rg_invariance_report(patch, cfg.params, cfg.rg_values, cfg.population_size);
    for (const auto& row : rep.rows) {
      report << patch.id << ',' << format_number(row.r_global) << ',' << format_number(row.global_coop_fraction)
             << ',' << to_string(row.direction) << ',' << format_number(row.probability) << ','
             << format_number(row.deviation) << ',' << (row.pass ? "PASS" : "FAIL") << '\n';
    }
    all_pass = all_pass && rep.all_pass();
  }
  table.flush();
  report.flush();
  if (!table || !report) throw IoError("boundary output write failed in " + dir.string());
  out << "patches=" << cfg.patches.size() << " invariance=" << (all_pass ? "PASS" : "FAIL") << '\n';
  return all_pass ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level public goods game simulator"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_flag("-v,--verbose", opt.verbosity, "More progress output on stderr");
  };
  auto* sim = app.add_subcommand("simulate", "Run one trajectory");
  common(sim);
  sim->add_option("--seed", opt.seed, "Override the config seed");

  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep and write a phase CSV");
  common(sw);
  sw->add_option("--seed", opt.seed, "Override the base seed");
  sw->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_flag("--resume", opt.resume, "Skip cells listed in the manifest of the output directory");

  auto* bd = app.add_subcommand("boundary", "Imitation tables and r_g invariance report for local patches");
  common(bd);
  bd->add_option("--rg", opt.rg, "Comma-separated r_g values, e.g. 5,20,100");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (sim->parsed()) return simulate(opt, out);
    if (sw->parsed()) return sweep_cmd(opt, out, err);
    return boundary_cmd(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace mlpgg::cli
