#include <doctest.h>

#include <cmath>
#include <limits>
#include <tuple>

#include "mlpgg/dynamics.hpp"
#include "mlpgg/errors.hpp"
#include "support.hpp"

using namespace mlpgg;

namespace {

// Replays one synchronous round from the documented draw order with brute-force payoffs.
StrategyProfile reference_step(const StrategyProfile& prof, std::size_t w, std::size_t h, const GameParams& p,
                               Rng& rng) {
  const std::size_t n = w * h;
  auto pay = oracle::eq2(oracle::torus(w, h), support::choices(prof), {p.r_pairwise, p.r_local, p.r_global, p.sigma});
  std::vector<std::size_t> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = i / w, c = i % w;
    const std::size_t order[4] = {r * w + (c + w - 1) % w, r * w + (c + 1) % w, ((r + h - 1) % h) * w + c,
                                  ((r + 1) % h) * w + c};
    target[i] = order[rng.below(4)];
  }
  auto next = prof;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    if (u < oracle::fermi(pay.total(i), pay.total(target[i]), p.beta)) next.set(i, prof[target[i]]);
  }
  if (p.mu > 0) {
    const auto k = strategy_count(prof.setting());
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform() < p.mu) next.set(i, Strategy::from_index(prof.setting(), rng.below(k)));
    }
  }
  return next;
}

}  // namespace

TEST_CASE("Fermi examples") {
  CHECK(imitation_probability(2.0, 2.0, 0.5) == 0.5);
  CHECK(imitation_probability(-7.0, -7.0, 100.0) == 0.5);
  CHECK(std::abs(imitation_probability(1.0, 0.0, 0.5) - 1.0 / (1.0 + std::exp(0.5))) < 1e-12);
  CHECK(std::abs(imitation_probability(1.0, 0.0, 0.5) - 0.37754066879814546) < 1e-12);
  CHECK(imitation_probability(0.0, 1.0, 100.0) > 0.999999);
  CHECK(imitation_probability(0.0, 0.1, 100.0) > 0.999);
  CHECK(imitation_probability(0.3, 0.1, 0.0) == 0.5);
}

TEST_CASE("Fermi is overflow safe") {
  CHECK(imitation_probability(1e6, 0.0, 100.0) == 0.0);
  CHECK(imitation_probability(0.0, 1e6, 100.0) == 1.0);
  const double huge = std::numeric_limits<double>::max();
  CHECK(std::isfinite(imitation_probability(huge, -huge, 10.0)));
}

TEST_CASE("Fermi symmetry and monotonicity") {
  Rng rng(4);
  for (int k = 0; k < 2000; ++k) {
    const double a = 10 * rng.uniform() - 5, b = 10 * rng.uniform() - 5, beta = 20 * rng.uniform();
    CHECK(std::abs(imitation_probability(a, b, beta) + imitation_probability(b, a, beta) - 1.0) <= 1e-15);
    CHECK(std::abs(imitation_probability(a, b, beta) - oracle::fermi(a, b, beta)) < 1e-15);
    const double c = b + 0.01 + rng.uniform();
    if (beta > 0) CHECK(imitation_probability(a, c, beta) >= imitation_probability(a, b, beta));
  }
}

TEST_CASE("step follows the documented draw order") {
  Rng init(8);
  for (auto [w, h, mu] : std::vector<std::tuple<std::size_t, std::size_t, double>>{{5, 5, 0.0}, {6, 4, 0.05}, {10, 10, 0.2}}) {
    auto g = PopulationGraph::periodic_lattice(w, h);
    for (auto setting : {StrategySetting::binary, StrategySetting::level_based}) {
      GameParams p;
      p.mu = mu;
      p.beta = 3.0;
      p.sigma = 0.8;
      SimulationState st{0, support::random_profile(setting, g.node_count(), init), Rng(77)};
      Rng ref_rng(77);
      auto ref = st.profile;
      Simulator sim(g, p);
      for (int round = 0; round < 15; ++round) {
        sim.step(st);
        ref = reference_step(ref, w, h, p, ref_rng);
        REQUIRE(st.profile == ref);
        CHECK(st.rng == ref_rng);
      }
      CHECK(st.round == 15);
    }
  }
}

TEST_CASE("population targets differ from the player") {
  auto g = PopulationGraph::periodic_lattice(3, 3);
  GameParams p;
  p.beta = 0;
  Rng init(1);
  SimulationState st{0, support::random_profile(StrategySetting::binary, 9, init), Rng(3)};
  Simulator sim(g, p, TargetMode::population);
  for (int k = 0; k < 50; ++k) CHECK_NOTHROW(sim.step(st));
  CHECK(parse_target_mode("population") == TargetMode::population);
  CHECK(parse_target_mode("neighbor") == TargetMode::neighbor);
  CHECK_THROWS_AS(parse_target_mode("random"), ParseError);
}

TEST_CASE("monomorphic profiles are absorbing") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  for (std::size_t k = 0; k < 8; ++k) {
    auto s = Strategy::from_index(StrategySetting::level_based, k);
    SimulationState st{0, StrategyProfile::uniform(StrategySetting::level_based, 100, s), Rng(k)};
    auto next = step(st, g, GameParams{});
    CHECK(next.profile == st.profile);
    CHECK(next.round == 1);
  }
}

TEST_CASE("step is deterministic for a fixed seed") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  FixedFractionInit half{StrategySetting::binary, {{Strategy::binary(true), 0.5}, {Strategy::binary(false), 0.5}}};
  SimulationState st{0, initialize_profile(g, half, 5), Rng(6)};
  auto a = step(st, g, GameParams{});
  auto b = step(st, g, GameParams{});
  CHECK(a.profile == b.profile);
  CHECK(a.rng == b.rng);
}

TEST_CASE("beta zero imitates different targets half the time") {
  auto g = PopulationGraph::periodic_lattice(20, 20);
  std::vector<Strategy> s(400);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 20; ++c) s[r * 20 + c] = Strategy::binary((r + c) % 2 == 0);
  StrategyProfile checker(StrategySetting::binary, s);
  GameParams p;
  p.beta = 0;
  p.r_pairwise = 4.5;
  std::size_t switched = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SimulationState st{0, checker, Rng(seed)};
    auto next = step(st, g, p);
    for (std::size_t i = 0; i < 400; ++i) switched += next.profile[i] != checker[i];
    total += 400;
  }
  const double rate = static_cast<double>(switched) / static_cast<double>(total);
  CHECK(rate == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("run terminates on absorption") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  auto d = StrategyProfile::uniform(StrategySetting::binary, 100, Strategy::binary(false));
  auto t = run(g, d, GameParams{}, StopCriteria{}, 1);
  CHECK(t.status().kind == TerminalKind::absorbed);
  CHECK(*t.status().strategy == Strategy::binary(false));
  CHECK(t.rounds() == 0);
  CHECK(t.rows() == 1);

  StopCriteria zero;
  zero.max_rounds = 0;
  CHECK_THROWS_AS(run(g, d, GameParams{}, zero, 1), ParameterError);
}

TEST_CASE("run reaches D at defaults on most seeds") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  int d_wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto init = initialize_profile(g, UniformRandomInit{StrategySetting::binary}, derive_seed(seed, {0}));
    auto t = run(g, init, GameParams{}, StopCriteria{}, derive_seed(seed, {1}));
    for (std::size_t r = 0; r < t.rows(); ++r) {
      auto row = t.counts_at(r);
      CHECK(row[0] + row[1] == 100);
    }
    if (t.status().kind == TerminalKind::absorbed && *t.status().strategy == Strategy::binary(false)) ++d_wins;
  }
  CHECK(d_wins >= 8);
}

TEST_CASE("round cap and stability window") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  Rng rng(2);
  auto init = support::random_profile(StrategySetting::binary, 100, rng);
  GameParams p;
  p.mu = 0.01;
  StopCriteria cap;
  cap.max_rounds = 25;
  cap.stability_window = 0;
  cap.snapshot_rounds = {0, 10, 25};
  auto t = run(g, init, p, cap, 9);
  CHECK(t.status().kind == TerminalKind::round_cap_reached);
  CHECK(t.rounds() == 25);
  CHECK(t.snapshots().size() == 3);
  CHECK(t.snapshots()[1].first == 10);
  CHECK(t.final_profile().has_value());

  // Mutation too rare to fire keeps the count vector fixed.
  GameParams frozen;
  frozen.mu = 1e-12;
  StopCriteria window;
  window.stability_window = 5;
  auto dd = StrategyProfile::uniform(StrategySetting::binary, 100, Strategy::binary(false));
  auto ts = run(g, dd, frozen, window, 4);
  CHECK(ts.status().kind == TerminalKind::frequency_stable);
  CHECK(ts.rounds() == 5);
}

TEST_CASE("trajectories coincide across r_g") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  for (auto setting : {StrategySetting::binary, StrategySetting::level_based}) {
    auto init = initialize_profile(g, UniformRandomInit{setting}, 12);
    GameParams a, b;
    a.r_global = 5;
    b.r_global = 50;
    if (setting == StrategySetting::level_based) a.beta = b.beta = 100;
    StopCriteria stop;
    stop.max_rounds = 3000;
    auto ta = run(g, init, a, stop, 13);
    auto tb = run(g, init, b, stop, 13);
    REQUIRE(ta.rows() == tb.rows());
    bool same = true;
    for (std::size_t r = 0; r < ta.rows(); ++r) {
      auto x = ta.counts_at(r), y = tb.counts_at(r);
      same = same && std::equal(x.begin(), x.end(), y.begin());
    }
    CHECK(same);
    CHECK(*ta.final_profile() == *tb.final_profile());
  }
}

TEST_CASE("initial profiles") {
  auto g = PopulationGraph::periodic_lattice(10, 10);
  auto u = initialize_profile(g, UniformRandomInit{StrategySetting::level_based}, 3);
  CHECK(u == initialize_profile(g, UniformRandomInit{StrategySetting::level_based}, 3));
  for (auto c : u.counts()) CHECK(c > 0);

  Rng seeds(1);
  std::vector<double> mean(8, 0.0);
  for (int k = 0; k < 200; ++k) {
    auto p = initialize_profile(g, UniformRandomInit{StrategySetting::level_based}, seeds.next());
    auto c = p.counts();
    for (std::size_t t = 0; t < 8; ++t) mean[t] += static_cast<double>(c[t]) / 200.0;
  }
  for (double m : mean) CHECK(m == doctest::Approx(12.5).epsilon(0.08));

  auto odd = PopulationGraph::periodic_lattice(3, 3);
  FixedFractionInit half{StrategySetting::binary, {{Strategy::binary(true), 0.5}, {Strategy::binary(false), 0.5}}};
  auto h = initialize_profile(odd, half, 1);
  CHECK((h.counts()[0] == 4 || h.counts()[0] == 5));
  CHECK(initialize_profile(g, half, 1).counts() == std::vector<std::size_t>{50, 50});
  CHECK_FALSE(initialize_profile(g, half, 1) == initialize_profile(g, half, 2));

  FixedFractionInit bad{StrategySetting::binary, {{Strategy::binary(true), 0.5}, {Strategy::binary(false), 0.4}}};
  CHECK_THROWS_AS(initialize_profile(g, bad, 1), ParameterError);

  std::vector<Strategy> labels(100, parse_strategy_label("CDC"));
  labels[42] = parse_strategy_label("DDD");
  auto e = initialize_profile(g, ExplicitInit{labels}, 0);
  CHECK(std::vector<Strategy>(e.strategies().begin(), e.strategies().end()) == labels);
  labels.pop_back();
  CHECK_THROWS_AS(initialize_profile(g, ExplicitInit{labels}, 0), ParameterError);
}

TEST_CASE("terminal kind names") {
  for (auto k : {TerminalKind::absorbed, TerminalKind::round_cap_reached, TerminalKind::frequency_stable}) {
    CHECK(parse_terminal_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_terminal_kind("done"), ParseError);
}
