#pragma once

// Reference generators: binary d-sequences of prime reciprocals, their XOR
// combinations, and Fibonacci LFSR (maximal-length / PN) sequences.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "georand/bitgen.hpp"
#include "georand/error.hpp"

namespace georand {

inline bool is_odd_prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

namespace detail {

inline void require_odd_prime(std::uint64_t p, const char* op) {
  if (!is_odd_prime(p)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(op) + ": " + std::to_string(p) + " is not an odd prime");
  }
  if (p > (std::uint64_t{1} << 62)) {
    throw Error(ErrorCode::invalid_argument, std::string(op) + ": prime too large");
  }
}

inline std::vector<std::uint8_t> d_sequence_bits(std::uint64_t p,
                                                 std::size_t length) {
  std::vector<std::uint8_t> bits(length);
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < length; ++i) {
    r = (2 * r) % p;  // r = 2^(i+1) mod p
    bits[i] = static_cast<std::uint8_t>(r & 1u);
  }
  return bits;
}

}  // namespace detail

/// a(i) = (2^i mod p) mod 2 for i = 1..length.
inline BitSequence d_sequence(std::uint64_t p, std::size_t length) {
  detail::require_odd_prime(p, "d_sequence");
  if (length == 0) {
    throw Error(ErrorCode::invalid_argument, "d_sequence: length must be >= 1");
  }
  Provenance prov;
  prov.mode = SequenceMode::dsequence;
  return BitSequence(detail::d_sequence_bits(p, length), prov);
}

/// Multiplicative order of 2 modulo p, which is the period of d_sequence(p).
inline std::uint64_t d_sequence_period(std::uint64_t p) {
  detail::require_odd_prime(p, "d_sequence_period");
  std::uint64_t r = 2 % p;
  std::uint64_t order = 1;
  while (r != 1) {
    r = (2 * r) % p;
    ++order;
  }
  return order;
}

/// Bitwise XOR of the d-sequences of two or more distinct odd primes.
inline BitSequence combined_d_sequence(std::span<const std::uint64_t> primes,
                                       std::size_t length) {
  if (primes.size() < 2) {
    throw Error(ErrorCode::invalid_argument,
                "combined_d_sequence: need at least two primes");
  }
  if (std::set<std::uint64_t>(primes.begin(), primes.end()).size() !=
      primes.size()) {
    throw Error(ErrorCode::invalid_argument,
                "combined_d_sequence: primes must be distinct");
  }
  if (length == 0) {
    throw Error(ErrorCode::invalid_argument,
                "combined_d_sequence: length must be >= 1");
  }
  std::vector<std::uint8_t> bits(length, 0);
  for (auto p : primes) {
    detail::require_odd_prime(p, "combined_d_sequence");
    const auto part = detail::d_sequence_bits(p, length);
    for (std::size_t i = 0; i < length; ++i) bits[i] ^= part[i];
  }
  Provenance prov;
  prov.mode = SequenceMode::combined;
  return BitSequence(std::move(bits), prov);
}

/// Fibonacci shift register. `taps` lists the exponents below `degree` of the
/// feedback polynomial x^degree + ... + 1, so 0 must be present: the register
/// realises a(t + degree) = XOR of a(t + e) over e in taps.
struct LfsrSpec {
  unsigned degree = 0;
  std::vector<unsigned> taps;
  std::uint64_t init = 1;
};

/// Primitive feedback polynomials for degrees 3..16.
inline LfsrSpec primitive_lfsr(unsigned degree, std::uint64_t init = 1) {
  static const std::vector<std::vector<unsigned>> table = {
      {1, 0},           // x^3 + x + 1
      {1, 0},           // x^4 + x + 1
      {2, 0},           // x^5 + x^2 + 1
      {1, 0},           // x^6 + x + 1
      {1, 0},           // x^7 + x + 1
      {4, 3, 2, 0},     // x^8 + x^4 + x^3 + x^2 + 1
      {4, 0},           // x^9 + x^4 + 1
      {3, 0},           // x^10 + x^3 + 1
      {2, 0},           // x^11 + x^2 + 1
      {6, 4, 1, 0},     // x^12 + x^6 + x^4 + x + 1
      {4, 3, 1, 0},     // x^13 + x^4 + x^3 + x + 1
      {5, 3, 1, 0},     // x^14 + x^5 + x^3 + x + 1
      {1, 0},           // x^15 + x + 1
      {5, 3, 2, 0},     // x^16 + x^5 + x^3 + x^2 + 1
  };
  if (degree < 3 || degree > 16) {
    throw Error(ErrorCode::invalid_argument,
                "primitive_lfsr: built-in table covers degrees 3..16");
  }
  return LfsrSpec{degree, table[degree - 3], init};
}

namespace detail {

inline std::uint64_t validate_lfsr(const LfsrSpec& spec) {
  if (spec.degree < 2 || spec.degree > 63) {
    throw Error(ErrorCode::invalid_argument, "lfsr: degree must be in [2, 63]");
  }
  std::uint64_t mask = 0;
  for (auto t : spec.taps) {
    if (t >= spec.degree) {
      throw Error(ErrorCode::invalid_argument, "lfsr: tap exponent >= degree");
    }
    mask |= std::uint64_t{1} << t;
  }
  if ((mask & 1u) == 0) {
    throw Error(ErrorCode::invalid_argument,
                "lfsr: feedback polynomial needs a constant term (tap 0)");
  }
  const std::uint64_t full = (std::uint64_t{1} << spec.degree) - 1;
  if (spec.init == 0) {
    throw Error(ErrorCode::invalid_argument, "lfsr: initial state is all zero");
  }
  if ((spec.init & ~full) != 0) {
    throw Error(ErrorCode::invalid_argument, "lfsr: initial state wider than degree");
  }
  return mask;
}

inline std::uint64_t lfsr_step(std::uint64_t state, std::uint64_t mask,
                               unsigned degree) {
  const auto feedback =
      static_cast<std::uint64_t>(std::popcount(state & mask) & 1);
  return (state >> 1) | (feedback << (degree - 1));
}

}  // namespace detail

/// Each step emits the low bit of the state, then shifts right and feeds the
/// parity of the tapped bits into the top position.
inline BitSequence lfsr_sequence(const LfsrSpec& spec, std::size_t length) {
  const std::uint64_t mask = detail::validate_lfsr(spec);
  if (length == 0) {
    throw Error(ErrorCode::invalid_argument, "lfsr_sequence: length must be >= 1");
  }
  std::vector<std::uint8_t> bits(length);
  std::uint64_t state = spec.init;
  for (auto& b : bits) {
    b = static_cast<std::uint8_t>(state & 1u);
    state = detail::lfsr_step(state, mask, spec.degree);
  }
  Provenance prov;
  prov.mode = SequenceMode::lfsr;
  return BitSequence(std::move(bits), prov);
}

/// Number of steps until the register state first repeats its initial value.
inline std::uint64_t lfsr_state_period(const LfsrSpec& spec) {
  const std::uint64_t mask = detail::validate_lfsr(spec);
  if (spec.degree > 32) {
    throw Error(ErrorCode::invalid_argument, "lfsr_state_period: degree > 32");
  }
  std::uint64_t state = detail::lfsr_step(spec.init, mask, spec.degree);
  std::uint64_t period = 1;
  const std::uint64_t cap = std::uint64_t{1} << spec.degree;
  while (state != spec.init && period <= cap) {
    state = detail::lfsr_step(state, mask, spec.degree);
    ++period;
  }
  return period;
}

}  // namespace georand
