#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mlpgg/population.hpp"
#include "mlpgg/rng.hpp"
#include "mlpgg/strategy.hpp"
#include "oracle.hpp"

namespace support {

inline mlpgg::StrategyProfile random_profile(mlpgg::StrategySetting setting, std::size_t n, mlpgg::Rng& rng) {
  std::vector<mlpgg::Strategy> s(n);
  const auto k = mlpgg::strategy_count(setting);
  for (auto& x : s) x = mlpgg::Strategy::from_index(setting, rng.below(k));
  return {setting, std::move(s)};
}

inline oracle::Choices choices(const mlpgg::StrategyProfile& p) {
  oracle::Choices c(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    c[i] = {p[i].cooperates(mlpgg::Level::pairwise), p[i].cooperates(mlpgg::Level::local),
            p[i].cooperates(mlpgg::Level::global)};
  }
  return c;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mlpgg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_dir() { return MLPGG_SOURCE_DIR; }

}  // namespace support
