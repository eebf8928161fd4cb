#pragma once

// 2D bit patterns assembled from sequences, and portable bitmap (P1/P4) I/O.

#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "georand/bitgen.hpp"
#include "georand/error.hpp"

namespace georand {

/// width x height raster of bits stored row-major. 1 renders black.
class Pattern2D {
 public:
  Pattern2D(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
      : width_(width), height_(height), bits_(std::move(bits)) {
    if (width_ == 0 || height_ == 0) {
      throw Error(ErrorCode::invalid_argument, "pattern dimensions must be >= 1");
    }
    if (height_ > std::numeric_limits<std::size_t>::max() / width_ ||
        bits_.size() != width_ * height_) {
      std::ostringstream os;
      os << "pattern " << width_ << "x" << height_ << " needs "
         << width_ * height_ << " bits, got " << bits_.size();
      throw Error(ErrorCode::length_mismatch, os.str());
    }
    for (auto b : bits_) {
      if (b > 1) throw Error(ErrorCode::invalid_argument, "pattern bit not 0/1");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return bits_[row * width_ + col];
  }

  friend bool operator==(const Pattern2D&, const Pattern2D&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> bits_;
};

/// Concatenates the sequences in order and fills the raster left-to-right,
/// top-to-bottom. The total length must equal width * height exactly.
inline Pattern2D assemble_pattern(std::span<const std::vector<std::uint8_t>> sequences,
                                  std::size_t width, std::size_t height) {
  std::size_t total = 0;
  for (const auto& s : sequences) total += s.size();
  const std::size_t expected = width * height;
  if (total != expected) {
    std::ostringstream os;
    os << "assemble_pattern: " << width << "x" << height << " needs " << expected
       << " bits but the sequences hold " << total << " (lengths";
    for (const auto& s : sequences) os << ' ' << s.size();
    os << ')';
    throw Error(ErrorCode::length_mismatch, os.str());
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(total);
  for (const auto& s : sequences) bits.insert(bits.end(), s.begin(), s.end());
  return Pattern2D(width, height, std::move(bits));
}

inline Pattern2D assemble_pattern(std::span<const BitSequence> sequences,
                                  std::size_t width, std::size_t height) {
  std::vector<std::vector<std::uint8_t>> raw;
  raw.reserve(sequences.size());
  for (const auto& s : sequences) raw.push_back(s.bits());
  return assemble_pattern(std::span<const std::vector<std::uint8_t>>(raw), width,
                          height);
}

enum class PbmVariant { ascii, binary };

inline std::string write_pbm(const Pattern2D& pattern, PbmVariant variant) {
  std::string out = variant == PbmVariant::ascii ? "P1\n" : "P4\n";
  out += std::to_string(pattern.width()) + ' ' + std::to_string(pattern.height()) + '\n';
  if (variant == PbmVariant::ascii) {
    for (std::size_t r = 0; r < pattern.height(); ++r) {
      for (std::size_t c = 0; c < pattern.width(); ++c) {
        if (c) out += ' ';
        out += pattern.at(r, c) ? '1' : '0';
      }
      out += '\n';
    }
    return out;
  }
  const std::size_t row_bytes = (pattern.width() + 7) / 8;
  for (std::size_t r = 0; r < pattern.height(); ++r) {
    for (std::size_t byte = 0; byte < row_bytes; ++byte) {
      unsigned value = 0;
      for (std::size_t bit = 0; bit < 8; ++bit) {
        const std::size_t c = 8 * byte + bit;
        if (c < pattern.width() && pattern.at(r, c)) value |= 0x80u >> bit;
      }
      out += static_cast<char>(value);
    }
  }
  return out;
}

namespace detail {

class PbmScanner {
 public:
  explicit PbmScanner(std::string_view data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_dimension(const char* what) {
    skip_space_and_comments();
    if (pos_ >= data_.size() ||
        !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      throw Error(ErrorCode::bad_header, std::string("pbm: missing ") + what);
    }
    std::size_t value = 0;
    constexpr std::size_t kMax = std::size_t{1} << 24;
    while (pos_ < data_.size() &&
           std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(data_[pos_] - '0');
      if (value > kMax) {
        throw Error(ErrorCode::dimension_overflow,
                    std::string("pbm: ") + what + " too large");
      }
      ++pos_;
    }
    if (value == 0) {
      throw Error(ErrorCode::bad_header, std::string("pbm: zero ") + what);
    }
    return value;
  }

  std::size_t& pos() { return pos_; }
  std::string_view data() const { return data_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Reads a P1 or P4 portable bitmap; '#' comments are allowed in the header.
inline Pattern2D read_pbm(std::string_view data) {
  if (data.size() < 2 || data[0] != 'P') {
    throw Error(ErrorCode::bad_header, "pbm: bad magic number");
  }
  const char kind = data[1];
  if (kind != '1' && kind != '4') {
    throw Error(ErrorCode::unsupported_format,
                std::string("pbm: unsupported format P") + kind);
  }
  detail::PbmScanner scan(data.substr(2));
  if (scan.data().empty() ||
      !(std::isspace(static_cast<unsigned char>(scan.data()[0])) ||
        scan.data()[0] == '#')) {
    throw Error(ErrorCode::bad_header, "pbm: bad magic number");
  }
  const std::size_t width = scan.read_dimension("width");
  const std::size_t height = scan.read_dimension("height");
  if (width * height > (std::size_t{1} << 32)) {
    throw Error(ErrorCode::dimension_overflow, "pbm: image too large");
  }
  std::vector<std::uint8_t> bits(width * height);
  const auto payload = scan.data();
  std::size_t& pos = scan.pos();

  if (kind == '1') {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      scan.skip_space_and_comments();
      if (pos >= payload.size()) {
        throw Error(ErrorCode::truncated_payload, "pbm: truncated P1 raster");
      }
      const char c = payload[pos++];
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::bad_header, "pbm: P1 raster holds a non-bit");
      }
      bits[i] = static_cast<std::uint8_t>(c - '0');
    }
    return Pattern2D(width, height, std::move(bits));
  }

  // Exactly one whitespace byte separates the P4 header from the raster.
  if (pos >= payload.size() ||
      !std::isspace(static_cast<unsigned char>(payload[pos]))) {
    throw Error(ErrorCode::truncated_payload, "pbm: missing P4 raster");
  }
  ++pos;
  const std::size_t row_bytes = (width + 7) / 8;
  if (payload.size() - pos < row_bytes * height) {
    std::ostringstream os;
    os << "pbm: truncated P4 raster, need " << row_bytes * height
       << " bytes, have " << payload.size() - pos;
    throw Error(ErrorCode::truncated_payload, os.str());
  }
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto byte = static_cast<unsigned char>(payload[pos + r * row_bytes + c / 8]);
      bits[r * width + c] = (byte >> (7 - c % 8)) & 1u;
    }
  }
  return Pattern2D(width, height, std::move(bits));
}

}  // namespace georand
