#include "mlpgg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mlpgg/errors.hpp"

namespace mlpgg {

void SweepSpec::validate() const {
  auto axis = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ParameterError(std::string("sweep axis ") + name + " is empty");
  };
  axis(grid.r_pairwise, "r_p");
  axis(grid.r_local, "r_l");
  axis(grid.r_global, "r_g");
  axis(grid.beta, "beta");
  axis(grid.sigma, "sigma");
  axis(grid.mu, "mu");
  if (lattice.width < 3 || lattice.height < 3) throw ParameterError("lattice must be at least 3x3");
  if (replicates < 1) throw ParameterError("replicates must be at least 1");
  if (stop.max_rounds < 1) throw ParameterError("max_rounds must be at least 1");
  if (!(quorum >= 0.0 && quorum <= 1.0)) throw ParameterError("quorum must lie in [0, 1]");
  if (init && setting_of(*init) != setting) throw ParameterError("initial condition uses another strategy setting");
  for (const auto& cell : expand_grid(*this)) cell.params.validate();
}

std::vector<CellPoint> expand_grid(const SweepSpec& spec) {
  const auto& g = spec.grid;
  std::vector<CellPoint> cells;
  CellCoords c{};
  for (c[0] = 0; c[0] < g.r_pairwise.size(); ++c[0])
    for (c[1] = 0; c[1] < g.r_local.size(); ++c[1])
      for (c[2] = 0; c[2] < g.r_global.size(); ++c[2])
        for (c[3] = 0; c[3] < g.beta.size(); ++c[3])
          for (c[4] = 0; c[4] < g.sigma.size(); ++c[4])
            for (c[5] = 0; c[5] < g.mu.size(); ++c[5]) {
              CellPoint p;
              p.index = cells.size();
              p.coords = c;
              p.params = {g.r_pairwise[c[0]], g.r_local[c[1]], g.r_global[c[2]], g.sigma[c[4]], g.beta[c[3]],
                          g.mu[c[5]]};
              cells.push_back(p);
            }
  return cells;
}

ReplicateSeeds replicate_seeds(std::uint64_t base_seed, const CellCoords& c, std::size_t replicate) {
  return {derive_seed(base_seed, {c[0], c[1], c[2], c[3], c[4], c[5], replicate, 0}),
          derive_seed(base_seed, {c[0], c[1], c[2], c[3], c[4], c[5], replicate, 1})};
}

std::string classify_run(const Trajectory& trajectory) {
  const auto& status = trajectory.status();
  if (status.kind == TerminalKind::absorbed && status.strategy) return format_strategy(*status.strategy);
  const auto counts = trajectory.final_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (static_cast<double>(counts[k]) >= kDominanceThreshold * static_cast<double>(trajectory.node_count())) {
      return format_strategy(Strategy::from_index(trajectory.setting(), k));
    }
  }
  return kMixedLabel;
}

AggregateLabel aggregate(std::span<const std::string> labels, double quorum) {
  if (labels.empty()) throw ParameterError("aggregate needs at least one replicate");
  std::map<std::string, std::size_t> tally;
  for (const auto& l : labels) ++tally[l];
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  const double fraction = static_cast<double>(best->second) / static_cast<double>(labels.size());
  if (fraction < quorum) return {kMixedLabel, fraction};
  return {best->first, fraction};
}

std::vector<std::optional<std::size_t>> extinction_census(const Trajectory& trajectory) {
  std::vector<std::optional<std::size_t>> out(trajectory.types());
  for (std::size_t round = 0; round < trajectory.rows(); ++round) {
    const auto counts = trajectory.counts_at(round);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (!out[k] && counts[k] == 0) out[k] = round;
    }
  }
  return out;
}

Trajectory run_replicate(const SweepSpec& spec, const PopulationGraph& graph, const CellPoint& cell,
                         std::size_t replicate) {
  const auto seeds = replicate_seeds(spec.base_seed, cell.coords, replicate);
  const InitSpec init = spec.init.value_or(UniformRandomInit{spec.setting});
  const auto initial = initialize_profile(graph, init, seeds.init);
  return run(graph, initial, cell.params, spec.stop, seeds.dynamics, spec.target);
}

ReplicateOutcome summarize(const Trajectory& trajectory) {
  ReplicateOutcome out;
  out.status = trajectory.status().kind;
  out.label = classify_run(trajectory);
  out.rounds = trajectory.rounds();
  const auto fc = trajectory.final_counts();
  out.final_counts.assign(fc.begin(), fc.end());
  out.extinction = extinction_census(trajectory);
  return out;
}

PhaseRecord make_record(const SweepSpec& spec, const CellPoint& cell, std::vector<ReplicateOutcome> replicates) {
  PhaseRecord rec;
  rec.point = cell;
  std::vector<std::string> labels;
  double rounds = 0.0;
  for (const auto& r : replicates) {
    labels.push_back(r.label);
    rounds += static_cast<double>(r.rounds);
  }
  const auto agg = aggregate(labels, spec.quorum);
  rec.label = agg.label;
  rec.label_fraction = agg.fraction;
  rec.mean_rounds = rounds / static_cast<double>(replicates.size());
  rec.replicates = std::move(replicates);
  return rec;
}

SweepResult sweep(const SweepSpec& spec, SweepOptions options) {
  spec.validate();
  const auto cells = expand_grid(spec);
  const auto graph = PopulationGraph::periodic_lattice(spec.lattice.width, spec.lattice.height);

  struct Task {
    std::size_t cell;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<ReplicateOutcome>> outcomes(cells.size());
  std::vector<std::optional<PhaseRecord>> records(cells.size());
  std::vector<std::atomic<std::size_t>> remaining(cells.size());
  for (const auto& cell : cells) {
    auto done = options.completed.find(cell.index);
    if (done != options.completed.end()) {
      records[cell.index] = done->second;
      remaining[cell.index] = 0;
      continue;
    }
    outcomes[cell.index].resize(spec.replicates);
    remaining[cell.index] = spec.replicates;
    for (std::size_t r = 0; r < spec.replicates; ++r) tasks.push_back({cell.index, r});
  }

  SweepResult result;
  std::mutex emit_mutex;
  std::size_t next_emit = 0;
  std::vector<bool> ready(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) ready[i] = records[i].has_value();

  // Emits every ready cell from next_emit onward. Caller holds emit_mutex.
  auto flush = [&] {
    while (next_emit < cells.size() && ready[next_emit]) {
      auto& rec = records[next_emit];
      if (!rec) rec = make_record(spec, cells[next_emit], std::move(outcomes[next_emit]));
      if (options.sink) {
        try {
          options.sink(*rec);
        } catch (const std::exception& e) {
          result.errors.push_back({next_emit, e.what()});
        }
      }
      ++next_emit;
    }
  };

  {
    std::lock_guard lock(emit_mutex);
    flush();
  }

  std::atomic<std::size_t> next_task{0};
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      while (true) {
        const std::size_t t = next_task.fetch_add(1);
        if (t >= tasks.size()) break;
        const auto [cell, rep] = tasks[t];
        outcomes[cell][rep] = summarize(run_replicate(spec, graph, cells[cell], rep));
        if (remaining[cell].fetch_sub(1) == 1) {
          std::lock_guard lock(emit_mutex);
          ready[cell] = true;
          flush();
        }
      }
    } catch (...) {
      std::lock_guard lock(emit_mutex);
      if (!failure) failure = std::current_exception();
      next_task = tasks.size();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, tasks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& rec : records) result.records.push_back(std::move(*rec));
  return result;
}

// ---- serialization ----

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_number(std::size_t x) { return std::to_string(x); }

std::string phase_csv_header() {
  return "r_p,r_l,r_g,beta,sigma,mu,lattice_w,lattice_h,strategy_setting,replicates,label,label_fraction,mean_rounds";
}

std::string phase_csv_row(const SweepSpec& spec, const PhaseRecord& record) {
  const auto& p = record.point.params;
  std::ostringstream os;
  os << format_number(p.r_pairwise) << ',' << format_number(p.r_local) << ',' << format_number(p.r_global) << ','
     << format_number(p.beta) << ',' << format_number(p.sigma) << ',' << format_number(p.mu) << ','
     << spec.lattice.width << ',' << spec.lattice.height << ',' << to_string(spec.setting) << ','
     << record.replicates.size() << ',' << record.label << ',' << format_number(record.label_fraction) << ','
     << format_number(record.mean_rounds);
  return os.str();
}

void write_phase_csv(std::ostream& out, const SweepSpec& spec, std::span<const PhaseRecord> records) {
  out << phase_csv_header() << '\n';
  for (const auto& r : records) out << phase_csv_row(spec, r) << '\n';
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void export_phase_csv(const std::filesystem::path& path, const SweepSpec& spec, std::span<const PhaseRecord> records) {
  auto out = open_for_write(path);
  write_phase_csv(out, spec, records);
  check_written(out, path);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "round";
  for (const auto& label : strategy_labels(trajectory.setting())) out << ',' << label;
  out << '\n';
  for (std::size_t round = 0; round < trajectory.rows(); ++round) {
    out << round;
    for (std::size_t k = 0; k < trajectory.types(); ++k) out << ',' << format_number(trajectory.frequency(round, k));
    out << '\n';
  }
}

void export_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
  auto out = open_for_write(path);
  write_trajectory_csv(out, trajectory);
  check_written(out, path);
}

std::array<std::uint8_t, 3> strategy_color(Strategy s) {
  if (s.setting() == StrategySetting::binary) {
    return s.cooperates(Level::pairwise) ? std::array<std::uint8_t, 3>{0, 90, 255}
                                         : std::array<std::uint8_t, 3>{230, 30, 30};
  }
  static constexpr std::array<std::array<std::uint8_t, 3>, 8> palette = {{
      {0, 90, 255},    // CCC
      {0, 200, 120},   // CCD
      {150, 80, 255},  // CDC
      {255, 200, 0},   // CDD
      {0, 220, 255},   // DCC
      {60, 160, 40},   // DCD
      {255, 120, 200}, // DDC
      {230, 30, 30},   // DDD
  }};
  return palette[s.index()];
}

std::array<std::filesystem::path, 2> export_snapshot(const std::filesystem::path& dir, const StrategyProfile& profile,
                                                     LatticeDims dims, std::size_t round, std::size_t scale) {
  if (dims.size() != profile.size()) throw ParameterError("snapshot dimensions do not match the profile");
  if (scale < 1) throw ParameterError("snapshot scale must be positive");
  const auto stem = "snapshot_" + std::to_string(round);
  const auto txt_path = dir / (stem + ".txt");
  const auto ppm_path = dir / (stem + ".ppm");

  auto txt = open_for_write(txt_path);
  for (std::size_t row = 0; row < dims.height; ++row) {
    for (std::size_t col = 0; col < dims.width; ++col) {
      if (col) txt << ' ';
      txt << format_strategy(profile[dims.index(row, col)]);
    }
    txt << '\n';
  }
  check_written(txt, txt_path);

  auto ppm = open_for_write(ppm_path, std::ios::out | std::ios::binary);
  ppm << "P6\n" << dims.width * scale << ' ' << dims.height * scale << "\n255\n";
  std::vector<char> line(dims.width * scale * 3);
  for (std::size_t row = 0; row < dims.height; ++row) {
    for (std::size_t col = 0; col < dims.width; ++col) {
      const auto rgb = strategy_color(profile[dims.index(row, col)]);
      for (std::size_t s = 0; s < scale; ++s) {
        for (std::size_t ch = 0; ch < 3; ++ch) line[(col * scale + s) * 3 + ch] = static_cast<char>(rgb[ch]);
      }
    }
    for (std::size_t s = 0; s < scale; ++s) ppm.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  check_written(ppm, ppm_path);
  return {txt_path, ppm_path};
}

std::string manifest_line(const PhaseRecord& record) {
  using nlohmann::json;
  const auto& p = record.point.params;
  json reps = json::array();
  for (const auto& r : record.replicates) {
    json ext = json::array();
    for (const auto& e : r.extinction) ext.push_back(e ? json(*e) : json(nullptr));
    reps.push_back({{"status", std::string(to_string(r.status))},
                    {"label", r.label},
                    {"rounds", r.rounds},
                    {"final_counts", r.final_counts},
                    {"extinction", ext}});
  }
  json j = {{"cell", record.point.index},
            {"params",
             {{"r_p", p.r_pairwise}, {"r_l", p.r_local}, {"r_g", p.r_global}, {"beta", p.beta}, {"sigma", p.sigma},
              {"mu", p.mu}}},
            {"label", record.label},
            {"label_fraction", record.label_fraction},
            {"mean_rounds", record.mean_rounds},
            {"replicates", reps}};
  return j.dump();
}

std::map<std::size_t, PhaseRecord> read_manifest(const std::filesystem::path& path, const SweepSpec& spec) {
  using nlohmann::json;
  std::map<std::size_t, PhaseRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  const auto cells = expand_grid(spec);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const auto j = json::parse(line);
      const auto idx = j.at("cell").get<std::size_t>();
      if (idx >= cells.size()) throw ConfigError(where + "cell index beyond the sweep grid");
      const auto& p = cells[idx].params;
      const auto& jp = j.at("params");
      if (jp.at("r_p").get<double>() != p.r_pairwise || jp.at("r_l").get<double>() != p.r_local ||
          jp.at("r_g").get<double>() != p.r_global || jp.at("beta").get<double>() != p.beta ||
          jp.at("sigma").get<double>() != p.sigma || jp.at("mu").get<double>() != p.mu) {
        throw ConfigError(where + "manifest cell does not match the sweep config");
      }
      PhaseRecord rec;
      rec.point = cells[idx];
      rec.label = j.at("label").get<std::string>();
      rec.label_fraction = j.at("label_fraction").get<double>();
      rec.mean_rounds = j.at("mean_rounds").get<double>();
      for (const auto& jr : j.at("replicates")) {
        ReplicateOutcome r;
        r.status = parse_terminal_kind(jr.at("status").get<std::string>());
        r.label = jr.at("label").get<std::string>();
        r.rounds = jr.at("rounds").get<std::size_t>();
        r.final_counts = jr.at("final_counts").get<std::vector<std::uint32_t>>();
        for (const auto& e : jr.at("extinction")) {
          r.extinction.push_back(e.is_null() ? std::nullopt : std::optional<std::size_t>(e.get<std::size_t>()));
        }
        rec.replicates.push_back(std::move(r));
      }
      if (rec.replicates.size() != spec.replicates) {
        throw ConfigError(where + "manifest replicate count does not match the sweep config");
      }
      out[idx] = std::move(rec);
    } catch (const json::exception& e) {
      throw ConfigError(where + "malformed manifest line: " + e.what());
    } catch (const ParseError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return out;
}

}  // namespace mlpgg
