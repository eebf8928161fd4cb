#pragma once

// Name-indexed access to the diehard tests at their standard parameters.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "georand/error.hpp"
#include "georand/stats/diehard.hpp"

namespace georand::stats {

inline constexpr std::array<std::string_view, 6> kDiehardTests = {
    "runs", "squeeze", "minimum-distance", "count-the-ones", "birthday-spacings",
    "binary-rank"};

inline bool is_diehard_test(std::string_view name) {
  for (auto t : kDiehardTests) {
    if (t == name) return true;
  }
  return false;
}

/// Words a test reads at its standard parameters (squeeze: the size it
/// requires up front).
inline std::size_t words_required(std::string_view name) {
  if (name == "runs") return 10 * 10000;
  if (name == "squeeze") return 100000 * 24;
  if (name == "minimum-distance") return 2 * 100 * 8000;
  if (name == "count-the-ones") return (256000 + 4 + 3) / 4;
  if (name == "birthday-spacings") return 1024 * 500;
  if (name == "binary-rank") return 32 * 40000;
  throw Error(ErrorCode::invalid_argument, "unknown test '" + std::string(name) + "'");
}

inline TestReport run_diehard(std::string_view name, std::span<const std::uint32_t> words) {
  if (name == "runs") return runs_test(words);
  if (name == "squeeze") return squeeze_test(words);
  if (name == "minimum-distance") return minimum_distance_test(words);
  if (name == "count-the-ones") return count_the_ones_test(words);
  if (name == "birthday-spacings") return birthday_spacings_test(words);
  if (name == "binary-rank") return binary_rank_test(words);
  throw Error(ErrorCode::invalid_argument, "unknown test '" + std::string(name) + "'");
}

}  // namespace georand::stats
