#include <doctest.h>

#include <cmath>
#include <string>

#include "mlpgg/boundary.hpp"
#include "mlpgg/errors.hpp"
#include "support.hpp"

using namespace mlpgg;

namespace {

FillRule fill(FillRule::Kind k, double f = 0.0) { return {k, f}; }

const std::vector<std::string> kHalfPlane{"C C D D D", "C C D D D", "C C D D D", "C C D D D", "C C D D D"};

}  // namespace

TEST_CASE("homogeneous cooperative patch") {
  auto spec = parse_patch("allc", std::vector<std::string>(5, "C C C C C"), fill(FillRule::Kind::all_cooperate), 1.0);
  GameParams p;
  auto pay = patch_payoffs(spec, p);
  CHECK(pay.focus.total == doctest::Approx((1.6 + 4 + 5) / 3).epsilon(1e-14));
  for (const auto& nb : pay.neighbors) CHECK(nb.total == doctest::Approx(pay.focus.total).epsilon(1e-15));
  for (const auto& e : imitation_table(spec, p).entries) CHECK(e.probability == 0.5);
}

TEST_CASE("half-plane boundary: the defector focus out-earns its cooperator neighbor") {
  auto spec = parse_patch("half", kHalfPlane, fill(FillRule::Kind::extend));
  GameParams p;
  auto pay = patch_payoffs(spec, p);
  CHECK(spec.focus() == Strategy::binary(false));
  CHECK(pay.focus.total > pay.neighbors[0].total);  // left neighbor is C

  GameParams q = p;
  q.r_global = 20;
  auto pay20 = patch_payoffs(spec, q);
  CHECK(pay20.focus.total != pay.focus.total);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs((pay.focus.total - pay.neighbors[k].total) - (pay20.focus.total - pay20.neighbors[k].total)) < 1e-12);
  }
}

TEST_CASE("straight boundary at extend fill has equal up and down neighbors") {
  auto spec = parse_patch("half", kHalfPlane, fill(FillRule::Kind::extend));
  auto t = imitation_table(spec, GameParams{});
  CHECK(t.entries[2].probability == 0.5);
  CHECK(t.entries[3].probability == 0.5);
  CHECK(t.entries[2].direction == Direction::up);
  CHECK(t.entries[0].neighbor_strategy == Strategy::binary(true));
  CHECK(t.entries[1].neighbor_strategy == Strategy::binary(false));
}

TEST_CASE("embedding agrees with brute force on the explicit lattice") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto setting = trial % 2 ? StrategySetting::binary : StrategySetting::level_based;
    PatchSpec spec;
    spec.id = "random";
    for (auto& row : spec.cells)
      for (auto& c : row) c = Strategy::from_index(setting, rng.below(strategy_count(setting)));
    const FillRule::Kind kinds[] = {FillRule::Kind::all_cooperate, FillRule::Kind::all_defect,
                                    FillRule::Kind::extend, FillRule::Kind::fraction};
    spec.fill = fill(kinds[trial % 4], 0.3);
    const std::size_t side = 5 + rng.below(6);
    const std::size_t n = side * side;
    auto layout = embed_patch(spec, n);

    // patch cells sit around (side/2, side/2)
    const std::size_t f = side / 2;
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 5; ++c) {
        const std::size_t row = (f + side + r - 2) % side, col = (f + side + c - 2) % side;
        CHECK(layout[row * side + col] == spec.cells[r][c]);
      }

    std::size_t global_c = 0;
    for (auto s : layout.strategies()) global_c += s.cooperates(Level::global);
    spec.global_coop_fraction = static_cast<double>(global_c) / static_cast<double>(n);

    GameParams p;
    p.sigma = 0.5 + 0.5 * rng.uniform();
    p.r_global = 50 * rng.uniform();
    auto pay = patch_payoffs(spec, p, n);
    auto ref = oracle::eq2(oracle::torus(side, side), support::choices(layout),
                           {p.r_pairwise, p.r_local, p.r_global, p.sigma});
    const std::size_t focus = f * side + f;
    const std::size_t around[4] = {f * side + (f + side - 1) % side, f * side + (f + 1) % side,
                                   ((f + side - 1) % side) * side + f, ((f + 1) % side) * side + f};
    CHECK(std::abs(pay.focus.total - ref.total(focus)) < 1e-12);
    CHECK(std::abs(pay.focus.pairwise - ref.p[focus]) < 1e-12);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(pay.neighbors[k].total - ref.total(around[k])) < 1e-12);
      CHECK(std::abs(pay.neighbors[k].local - ref.l[around[k]]) < 1e-12);
    }
  }
}

TEST_CASE("fill rules") {
  auto spec = parse_patch("p", std::vector<std::string>(5, "C D C D C"), fill(FillRule::Kind::extend));
  auto e = embed_patch(spec, 81);  // side 9, focus (4,4), patch rows/cols 2..6
  for (std::size_t r = 0; r < 9; ++r) {
    CHECK(e[r * 9 + 0] == e[r * 9 + 2]);
    CHECK(e[r * 9 + 8] == e[r * 9 + 6]);
  }
  spec.fill = fill(FillRule::Kind::all_defect);
  auto d = embed_patch(spec, 81);
  CHECK(d[0] == Strategy::binary(false));
  spec.fill = fill(FillRule::Kind::fraction, 0.25);
  auto q = embed_patch(spec, 81);
  std::size_t outside_c = 0;
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c)
      if (r < 2 || r > 6 || c < 2 || c > 6) outside_c += q[r * 9 + c].cooperates(Level::pairwise);
  CHECK(outside_c == 14);  // floor(56 * 0.25)
  CHECK(embed_patch(spec, 81) == q);
}

TEST_CASE("embedding needs a square population of side at least 5") {
  CHECK(embedding_side(100) == 10);
  CHECK(embedding_side(25) == 5);
  CHECK_THROWS_AS(embedding_side(16), ParameterError);
  CHECK_THROWS_AS(embedding_side(99), ParameterError);
  auto spec = parse_patch("half", kHalfPlane, fill(FillRule::Kind::extend));
  CHECK_THROWS_AS(patch_payoffs(spec, GameParams{}, 50), ParameterError);
}

TEST_CASE("patch parsing diagnostics") {
  auto bad_label = std::vector<std::string>(5, "C C C C C");
  bad_label[2] = "C C X C C";
  try {
    parse_patch("broken", bad_label, fill(FillRule::Kind::all_defect));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 3 column 3") != std::string::npos);
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
  auto short_row = std::vector<std::string>(5, "C C C C C");
  short_row[4] = "C C C C";
  CHECK_THROWS_WITH_AS(parse_patch("s", short_row, fill(FillRule::Kind::all_defect)),
                       doctest::Contains("row 5"), ParseError);
  auto long_row = std::vector<std::string>(5, "C C C C C");
  long_row[0] = "C C C C C C";
  CHECK_THROWS_WITH_AS(parse_patch("l", long_row, fill(FillRule::Kind::all_defect)),
                       doctest::Contains("row 1 column 6"), ParseError);
  CHECK_THROWS_AS(parse_patch("few", std::vector<std::string>(4, "C C C C C"), fill(FillRule::Kind::all_defect)),
                  ParseError);
  auto mixed = std::vector<std::string>(5, "C C C C C");
  mixed[1] = "C CCD C C C";
  CHECK_THROWS_WITH_AS(parse_patch("m", mixed, fill(FillRule::Kind::all_defect)), doctest::Contains("row 2 column 2"),
                       ParseError);
  CHECK_THROWS_AS(parse_patch("g", kHalfPlane, fill(FillRule::Kind::all_defect), 1.5), ParseError);
}

TEST_CASE("imitation tables are invariant to r_g and the global cooperator count") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    PatchSpec spec;
    spec.id = "r" + std::to_string(trial);
    for (auto& row : spec.cells)
      for (auto& c : row) c = Strategy::from_index(StrategySetting::level_based, rng.below(8));
    spec.fill = fill(FillRule::Kind::extend);
    GameParams p;
    p.beta = 10 * rng.uniform();
    auto report = rg_invariance_report(spec, p, {5, 20, 100});
    CHECK(report.rows.size() == 3 * kGlobalFractionSweep.size() * 4);
    CHECK(report.all_pass());
    for (const auto& row : report.rows) CHECK(row.deviation <= 1e-12);
  }
  auto spec = parse_patch("half", kHalfPlane, fill(FillRule::Kind::extend));
  CHECK_THROWS_AS(rg_invariance_report(spec, GameParams{}, {5}), ParameterError);
}

TEST_CASE("selection strength changes the table") {
  auto spec = parse_patch("half", kHalfPlane, fill(FillRule::Kind::extend));
  GameParams weak, strong;
  strong.beta = 10;
  auto a = imitation_table(spec, weak);
  auto b = imitation_table(spec, strong);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(b.entries[k].probability - 0.5) >= std::abs(a.entries[k].probability - 0.5));
  }
  CHECK(a.entries[0].probability != b.entries[0].probability);
}

TEST_CASE("higher profit rates favor cooperators at a boundary") {
  const std::vector<std::vector<std::string>> family{
      kHalfPlane,
      {"D D D C C", "D D D C C", "D D D C C", "C C C C C", "C C C C C"},
      {"D D C C C", "D D C C C", "D D D C C", "D D C C C", "D D C C C"},
      {"C C C C C", "C C C C C", "C C D C C", "C C C C C", "C C C C C"},
      {"D D D C D", "D D D D C", "D D D C D", "D D D D C", "D D D C D"},
  };
  for (const auto& rows : family) {
    auto spec = parse_patch("f", rows, fill(FillRule::Kind::extend));
    GameParams p;
    p.r_pairwise = 1.0;
    p.r_local = 1.0;
    std::array<double, 4> last{};
    last.fill(-1.0);
    for (int step = 0; step < 12; ++step) {
      auto t = imitation_table(spec, p);
      for (std::size_t k = 0; k < 4; ++k) {
        if (!t.entries[k].neighbor_strategy.cooperates(Level::pairwise)) continue;
        CHECK(t.entries[k].probability >= last[k]);
        last[k] = t.entries[k].probability;
      }
      (step % 2 ? p.r_local : p.r_pairwise) += 0.4;
    }
  }
}
