#pragma once

// Seeded point sampling and the mean-area rule that turns a Delaunay
// triangulation or a clipped Voronoi diagram into a bit sequence.

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "georand/error.hpp"
#include "georand/geometry.hpp"

namespace georand {

struct RngState {
  std::uint64_t state = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// One SplitMix64 step.
constexpr std::pair<RngState, std::uint64_t> rng_next(RngState s) noexcept {
  const std::uint64_t next = s.state + 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = next;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {RngState{next}, z ^ (z >> 31)};
}

/// SplitMix64 as a UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_{seed} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    auto [next, value] = rng_next(state_);
    state_ = next;
    return value;
  }

  RngState state() const { return state_; }

 private:
  RngState state_;
};

/// Maps a 64-bit draw to [0, 1) as value / 2^64 (rounded to double).
inline double unit_interval(std::uint64_t value) {
  return static_cast<double>(value) * 0x1p-64;
}

enum class SequenceMode { delaunay, voronoi, dsequence, combined, lfsr, external };

inline std::string_view to_string(SequenceMode mode) {
  switch (mode) {
    case SequenceMode::delaunay: return "delaunay";
    case SequenceMode::voronoi: return "voronoi";
    case SequenceMode::dsequence: return "dsequence";
    case SequenceMode::combined: return "combined";
    case SequenceMode::lfsr: return "lfsr";
    case SequenceMode::external: return "external";
  }
  return "external";
}

inline SequenceMode parse_mode(std::string_view text) {
  for (auto m : {SequenceMode::delaunay, SequenceMode::voronoi,
                 SequenceMode::dsequence, SequenceMode::combined,
                 SequenceMode::lfsr, SequenceMode::external}) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown sequence mode '" + std::string(text) + "'");
}

struct Provenance {
  SequenceMode mode = SequenceMode::external;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_points;
  /// Convex hull size k of the triangulated point set (delaunay mode only).
  std::optional<std::size_t> hull_size;
};

/// Non-empty ordered sequence of 0/1 values with the record of how it was
/// produced.
class BitSequence {
 public:
  BitSequence(std::vector<std::uint8_t> bits, Provenance provenance)
      : bits_(std::move(bits)), provenance_(provenance) {
    if (bits_.empty()) {
      throw Error(ErrorCode::invalid_argument, "bit sequence is empty");
    }
    for (auto b : bits_) {
      if (b > 1) {
        throw Error(ErrorCode::invalid_argument,
                    "bit sequence holds a value other than 0 or 1");
      }
    }
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const Provenance& provenance() const { return provenance_; }

  std::size_t ones() const {
    std::size_t count = 0;
    for (auto b : bits_) count += b;
    return count;
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) s[i] = '1';
    }
    return s;
  }

 private:
  std::vector<std::uint8_t> bits_;
  Provenance provenance_;
};

inline constexpr std::size_t kMaxRedraws = 1000;

inline Rect default_bounds() { return Rect(0.0, 0.0, 20.0, 20.0); }

/// n distinct points strictly inside `bounds`. Each point consumes one draw
/// for x then one for y; a point on the boundary or equal to an earlier point
/// is redrawn.
inline std::vector<Point2> sample_points(std::uint64_t seed, std::size_t n,
                                         const Rect& bounds) {
  if (n == 0) {
    throw Error(ErrorCode::invalid_argument, "sample_points: n must be >= 1");
  }
  struct PointHash {
    std::size_t operator()(const Point2& p) const {
      const auto hx = std::hash<double>{}(p.x);
      const auto hy = std::hash<double>{}(p.y);
      return hx ^ (hy + 0x9E3779B97F4A7C15ULL + (hx << 6) + (hx >> 2));
    }
  };

  SplitMix64 rng(seed);
  std::vector<Point2> points;
  points.reserve(n);
  std::unordered_set<Point2, PointHash> seen;
  seen.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t redraws = 0;
    while (true) {
      const double x = bounds.xmin() + unit_interval(rng()) * bounds.width();
      const double y = bounds.ymin() + unit_interval(rng()) * bounds.height();
      const Point2 p{x, y};
      if (bounds.contains_strictly(p) && seen.insert(p).second) {
        points.push_back(p);
        break;
      }
      if (++redraws > kMaxRedraws) {
        throw Error(ErrorCode::degenerate_input,
                    "sample_points: redraw limit exceeded");
      }
    }
  }
  return points;
}

/// Mean-area thresholding: 1 where the area is strictly above the mean,
/// 0 otherwise (ties included).
inline std::vector<std::uint8_t> bits_from_areas(std::span<const double> areas) {
  if (areas.empty()) {
    throw Error(ErrorCode::invalid_argument, "bits_from_areas: no areas");
  }
  double sum = 0.0;
  for (double a : areas) sum += a;
  const double mean = sum / static_cast<double>(areas.size());
  std::vector<std::uint8_t> bits(areas.size());
  for (std::size_t i = 0; i < areas.size(); ++i) bits[i] = areas[i] > mean ? 1 : 0;
  return bits;
}

enum class GeometryMode { delaunay, voronoi };

inline GeometryMode parse_geometry_mode(std::string_view text) {
  if (text == "delaunay") return GeometryMode::delaunay;
  if (text == "voronoi") return GeometryMode::voronoi;
  throw Error(ErrorCode::invalid_argument,
              "mode must be delaunay or voronoi, got '" + std::string(text) + "'");
}

/// The full pipeline: sample n points, build the structure, threshold its
/// region areas. Delaunay bits follow the canonical triangle order; Voronoi
/// bits follow site order.
inline BitSequence generate_sequence(std::uint64_t seed, std::size_t n,
                                     GeometryMode mode, const Rect& bounds) {
  if (mode == GeometryMode::delaunay && n < 3) {
    throw Error(ErrorCode::invalid_argument,
                "generate_sequence: delaunay mode needs at least 3 points");
  }
  const auto points = sample_points(seed, n, bounds);
  Provenance prov;
  prov.seed = seed;
  prov.n_points = n;
  if (mode == GeometryMode::delaunay) {
    const Triangulation tri = delaunay(points);
    prov.mode = SequenceMode::delaunay;
    prov.hull_size = tri.hull_size();
    return BitSequence(bits_from_areas(tri.areas()), prov);
  }
  const auto cells = voronoi_cells(points, bounds);
  std::vector<double> areas(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) areas[i] = cells[i].area();
  prov.mode = SequenceMode::voronoi;
  return BitSequence(bits_from_areas(areas), prov);
}

struct ConcatenatedBits {
  std::vector<std::uint8_t> bits;
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;
};

/// Concatenates geometric sequences for seeds first_seed, first_seed + 1, ...
/// until at least `min_bits` bits are available. The result is not truncated.
inline ConcatenatedBits concatenate_sequences(std::uint64_t first_seed,
                                              std::size_t n, GeometryMode mode,
                                              const Rect& bounds,
                                              std::size_t min_bits) {
  ConcatenatedBits out;
  out.first_seed = first_seed;
  out.last_seed = first_seed;
  out.bits.reserve(min_bits + 2 * n);
  std::uint64_t seed = first_seed;
  while (out.bits.size() < min_bits || out.bits.empty()) {
    const auto seq = generate_sequence(seed, n, mode, bounds);
    out.bits.insert(out.bits.end(), seq.bits().begin(), seq.bits().end());
    out.last_seed = seed;
    ++seed;
  }
  return out;
}

/// Packs bits 32 per word, little-endian within the word (bit i of the
/// sequence lands in bit i % 32 of word i / 32). A trailing partial word is
/// dropped.
inline std::vector<std::uint32_t> pack_words(std::span<const std::uint8_t> bits) {
  std::vector<std::uint32_t> words(bits.size() / 32);
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint32_t word = 0;
    for (std::size_t i = 0; i < 32; ++i) {
      word |= static_cast<std::uint32_t>(bits[32 * w + i] & 1u) << i;
    }
    words[w] = word;
  }
  return words;
}

/// Upper 32 bits of successive SplitMix64 outputs.
inline std::vector<std::uint32_t> splitmix_words(std::uint64_t seed,
                                                 std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> words(count);
  for (auto& w : words) w = static_cast<std::uint32_t>(rng() >> 32);
  return words;
}

}  // namespace georand
