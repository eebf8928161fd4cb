#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "georand/error.hpp"

namespace georand::stats {

/// Sequential reader over 32-bit words. Uniforms are word / 2^32; bytes are
/// taken from each word low byte first.
class WordStream {
 public:
  WordStream(std::span<const std::uint32_t> words, std::string_view consumer)
      : words_(words), consumer_(consumer) {}

  /// Throws insufficient_data unless `count` more words are available.
  void require(std::size_t count) const {
    if (remaining() < count) fail(consumed() + count);
  }

  std::uint32_t next_word() {
    if (pos_ >= words_.size()) fail(words_.size() + 1);
    return words_[pos_++];
  }

  double next_uniform() { return static_cast<double>(next_word()) * 0x1p-32; }

  std::uint8_t next_byte() {
    if (byte_index_ == 0) byte_word_ = next_word();
    const auto b = static_cast<std::uint8_t>(byte_word_ >> (8 * byte_index_));
    byte_index_ = (byte_index_ + 1) % 4;
    return b;
  }

  std::size_t remaining() const { return words_.size() - pos_; }
  std::size_t consumed() const { return pos_; }

  [[noreturn]] void fail(std::size_t needed) const {
    std::ostringstream os;
    os << consumer_ << ": insufficient data, needs at least " << needed
       << " 32-bit words (" << needed * 32 << " bits), stream has "
       << words_.size();
    throw Error(ErrorCode::insufficient_data, os.str());
  }

 private:
  std::span<const std::uint32_t> words_;
  std::string consumer_;
  std::size_t pos_ = 0;
  std::uint32_t byte_word_ = 0;
  unsigned byte_index_ = 0;
};

}  // namespace georand::stats
