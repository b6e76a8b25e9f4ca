#include "mlpgg/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mlpgg/errors.hpp"

namespace mlpgg::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("config") : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown key");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::size_t positive_int(const json& j, const std::string& path) {
  const auto v = unsigned_int(j, path);
  if (v == 0) fail(path, "must be at least 1");
  return static_cast<std::size_t>(v);
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

template <typename F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    fail(path, e.what());
  } catch (const ParameterError& e) {
    fail(path, e.what());
  }
}

std::vector<double> number_axis(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path)};
  if (!j.is_array() || j.empty()) fail(path, "expected a number or a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

GameParams parse_params(const json& j, const std::string& path) {
  require_object(j, path, {"r_p", "r_l", "r_g", "beta", "sigma", "mu"});
  GameParams p;
  if (j.contains("r_p")) p.r_pairwise = number(j["r_p"], join(path, "r_p"));
  if (j.contains("r_l")) p.r_local = number(j["r_l"], join(path, "r_l"));
  if (j.contains("r_g")) p.r_global = number(j["r_g"], join(path, "r_g"));
  if (j.contains("beta")) p.beta = number(j["beta"], join(path, "beta"));
  if (j.contains("sigma")) p.sigma = number(j["sigma"], join(path, "sigma"));
  if (j.contains("mu")) p.mu = number(j["mu"], join(path, "mu"));
  wrap(path, [&] {
    p.validate();
    return 0;
  });
  return p;
}

LatticeDims parse_lattice(const json& j, const std::string& path) {
  require_object(j, path, {"width", "height"});
  if (!j.contains("width") || !j.contains("height")) fail(path, "needs width and height");
  LatticeDims d{positive_int(j["width"], join(path, "width")), positive_int(j["height"], join(path, "height"))};
  if (d.width < 3 || d.height < 3) fail(path, "lattice sides must be at least 3");
  return d;
}

StopCriteria parse_stop(const json& j, const std::string& path) {
  require_object(j, path, {"max_rounds", "stability_window"});
  StopCriteria s;
  if (j.contains("max_rounds")) s.max_rounds = positive_int(j["max_rounds"], join(path, "max_rounds"));
  if (j.contains("stability_window")) {
    s.stability_window = static_cast<std::size_t>(unsigned_int(j["stability_window"], join(path, "stability_window")));
  }
  return s;
}

InitSpec parse_init(const json& j, const std::string& path, StrategySetting setting) {
  if (!j.is_object() || !j.contains("kind")) fail(path, "expected an object with a kind");
  const auto kind = string(j["kind"], join(path, "kind"));
  if (kind == "uniform_random") {
    require_object(j, path, {"kind"});
    return UniformRandomInit{setting};
  }
  if (kind == "fixed_fraction") {
    require_object(j, path, {"kind", "fractions"});
    if (!j.contains("fractions") || !j["fractions"].is_object()) fail(join(path, "fractions"), "expected an object");
    FixedFractionInit f{setting, {}};
    double sum = 0.0;
    for (const auto& [label, value] : j["fractions"].items()) {
      const auto where = join(join(path, "fractions"), label);
      const auto s = wrap(where, [&] { return parse_strategy_label(label); });
      if (s.setting() != setting) fail(where, "label does not belong to the strategy setting");
      const double x = number(value, where);
      if (x < 0.0) fail(where, "fraction must be non-negative");
      sum += x;
      f.fractions.emplace_back(s, x);
    }
    if (f.fractions.empty() || std::abs(sum - 1.0) > 1e-9) fail(join(path, "fractions"), "fractions must sum to 1");
    return f;
  }
  if (kind == "explicit") {
    require_object(j, path, {"kind", "labels"});
    if (!j.contains("labels") || !j["labels"].is_array()) fail(join(path, "labels"), "expected an array of labels");
    ExplicitInit e;
    for (std::size_t k = 0; k < j["labels"].size(); ++k) {
      const auto where = join(path, "labels") + "[" + std::to_string(k) + "]";
      const auto label = string(j["labels"][k], where);
      const auto s = wrap(where, [&] { return parse_strategy_label(label); });
      if (s.setting() != setting) fail(where, "label does not belong to the strategy setting");
      e.strategies.push_back(s);
    }
    return e;
  }
  fail(join(path, "kind"), "expected uniform_random, fixed_fraction or explicit");
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

StrategySetting parse_setting(const json& j) {
  if (!j.contains("strategy_setting")) fail("strategy_setting", "required");
  return wrap("strategy_setting", [&] { return parse_strategy_setting(string(j["strategy_setting"], "strategy_setting")); });
}

TargetMode parse_target(const json& j) {
  if (!j.contains("target")) return TargetMode::neighbor;
  return wrap("target", [&] { return parse_target_mode(string(j["target"], "target")); });
}

}  // namespace

SimulateConfig parse_simulate(std::string_view text) {
  const auto j = parse_document(text);
  require_object(j, "", {"strategy_setting", "lattice", "params", "target", "init", "stop", "snapshot_rounds", "seed",
                         "snapshot_scale"});
  SimulateConfig c;
  c.setting = parse_setting(j);
  if (!j.contains("lattice")) fail("lattice", "required");
  c.lattice = parse_lattice(j["lattice"], "lattice");
  if (j.contains("params")) c.params = parse_params(j["params"], "params");
  c.target = parse_target(j);
  if (j.contains("init")) {
    c.init = parse_init(j["init"], "init", c.setting);
    if (auto* e = std::get_if<ExplicitInit>(&*c.init); e && e->strategies.size() != c.lattice.size()) {
      fail("init.labels", "expected " + std::to_string(c.lattice.size()) + " labels, got " +
                              std::to_string(e->strategies.size()));
    }
  }
  if (j.contains("stop")) c.stop = parse_stop(j["stop"], "stop");
  if (j.contains("snapshot_rounds")) {
    const auto& s = j["snapshot_rounds"];
    if (!s.is_array()) fail("snapshot_rounds", "expected an array of rounds");
    for (std::size_t k = 0; k < s.size(); ++k) {
      c.stop.snapshot_rounds.push_back(
          static_cast<std::size_t>(unsigned_int(s[k], "snapshot_rounds[" + std::to_string(k) + "]")));
    }
  }
  if (j.contains("seed")) c.seed = unsigned_int(j["seed"], "seed");
  if (j.contains("snapshot_scale")) c.snapshot_scale = positive_int(j["snapshot_scale"], "snapshot_scale");
  return c;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto j = parse_document(text);
  require_object(j, "", {"strategy_setting", "lattice", "grid", "replicates", "stop", "base_seed", "quorum", "target",
                         "init"});
  SweepSpec s;
  s.setting = parse_setting(j);
  if (!j.contains("lattice")) fail("lattice", "required");
  s.lattice = parse_lattice(j["lattice"], "lattice");
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    require_object(g, "grid", {"r_p", "r_l", "r_g", "beta", "sigma", "mu"});
    if (g.contains("r_p")) s.grid.r_pairwise = number_axis(g["r_p"], "grid.r_p");
    if (g.contains("r_l")) s.grid.r_local = number_axis(g["r_l"], "grid.r_l");
    if (g.contains("r_g")) s.grid.r_global = number_axis(g["r_g"], "grid.r_g");
    if (g.contains("beta")) s.grid.beta = number_axis(g["beta"], "grid.beta");
    if (g.contains("sigma")) s.grid.sigma = number_axis(g["sigma"], "grid.sigma");
    if (g.contains("mu")) s.grid.mu = number_axis(g["mu"], "grid.mu");
  }
  if (j.contains("replicates")) s.replicates = positive_int(j["replicates"], "replicates");
  if (j.contains("stop")) s.stop = parse_stop(j["stop"], "stop");
  if (j.contains("base_seed")) s.base_seed = unsigned_int(j["base_seed"], "base_seed");
  if (j.contains("quorum")) {
    s.quorum = number(j["quorum"], "quorum");
    if (s.quorum < 0.0 || s.quorum > 1.0) fail("quorum", "must lie in [0, 1]");
  }
  s.target = parse_target(j);
  if (j.contains("init")) {
    s.init = parse_init(j["init"], "init", s.setting);
    if (std::holds_alternative<ExplicitInit>(*s.init)) fail("init.kind", "explicit profiles are not supported in sweeps");
  }
  wrap("grid", [&] {
    s.validate();
    return 0;
  });
  return s;
}

BoundaryConfig parse_boundary(std::string_view text) {
  const auto j = parse_document(text);
  require_object(j, "", {"params", "population_size", "rg_values", "patches"});
  BoundaryConfig c;
  if (j.contains("params")) c.params = parse_params(j["params"], "params");
  if (j.contains("population_size")) c.population_size = positive_int(j["population_size"], "population_size");
  wrap("population_size", [&] { return embedding_side(c.population_size); });
  if (j.contains("rg_values")) c.rg_values = number_axis(j["rg_values"], "rg_values");
  if (c.rg_values.size() < 2) fail("rg_values", "needs at least two values");
  if (!j.contains("patches") || !j["patches"].is_array() || j["patches"].empty()) {
    fail("patches", "expected a non-empty array");
  }
  for (std::size_t k = 0; k < j["patches"].size(); ++k) {
    const auto path = "patches[" + std::to_string(k) + "]";
    const auto& p = j["patches"][k];
    require_object(p, path, {"id", "rows", "fill", "global_coop_fraction"});
    const auto id = p.contains("id") ? string(p["id"], join(path, "id")) : "patch" + std::to_string(k);
    if (!p.contains("rows") || !p["rows"].is_array()) fail(join(path, "rows"), "expected 5 rows of 5 labels");
    std::vector<std::string> rows;
    for (std::size_t r = 0; r < p["rows"].size(); ++r) {
      rows.push_back(string(p["rows"][r], join(path, "rows") + "[" + std::to_string(r) + "]"));
    }
    FillRule fill;
    if (p.contains("fill")) {
      const auto& f = p["fill"];
      const auto where = join(path, "fill");
      if (f.is_object()) {
        require_object(f, where, {"fraction"});
        if (!f.contains("fraction")) fail(where, "expected {\"fraction\": f}");
        fill = {FillRule::Kind::fraction, number(f["fraction"], join(where, "fraction"))};
      } else {
        const auto name = string(f, where);
        if (name == "all_C") fill.kind = FillRule::Kind::all_cooperate;
        else if (name == "all_D") fill.kind = FillRule::Kind::all_defect;
        else if (name == "extend") fill.kind = FillRule::Kind::extend;
        else fail(where, "expected all_C, all_D, extend or {\"fraction\": f}");
      }
    }
    const double gf = p.contains("global_coop_fraction")
                          ? number(p["global_coop_fraction"], join(path, "global_coop_fraction"))
                          : 0.5;
    c.patches.push_back(wrap(path, [&] { return parse_patch(id, rows, fill, gf); }));
  }
  return c;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
      throw ConfigError("invalid number '" + item + "' in list '" + std::string(text) + "'");
    }
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

}  // namespace mlpgg::config
