#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "georand/baselines.hpp"

using namespace georand;

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Smallest p such that s[i] == s[i + p] for all i in the sample.
std::size_t brute_force_period(const std::vector<std::uint8_t>& s) {
  for (std::size_t p = 1; p < s.size(); ++p) {
    bool ok = true;
    for (std::size_t i = 0; i + p < s.size() && ok; ++i) ok = s[i] == s[i + p];
    if (ok) return p;
  }
  return s.size();
}

}  // namespace

TEST(DSequence, Examples) {
  EXPECT_EQ(d_sequence(13, 12).to_string(), "000100111011");
  EXPECT_EQ(d_sequence(7, 6).to_string(), "001001");
  const auto s24 = d_sequence(13, 24).to_string();
  EXPECT_EQ(s24.substr(0, 12), s24.substr(12));
  EXPECT_EQ(d_sequence(13, 5).provenance().mode, SequenceMode::dsequence);
}

TEST(DSequence, MatchesModularExponentiation) {
  for (std::uint64_t p : {3u, 11u, 101u, 199u, 65537u}) {
    const auto s = d_sequence(p, 300);
    for (std::size_t i = 1; i <= 300; ++i) {
      EXPECT_EQ(s[i - 1], pow_mod(2, i, p) % 2) << "p=" << p << " i=" << i;
    }
  }
}

TEST(DSequence, LargePrimeNoOverflow) {
  const std::uint64_t p = 4611686018427387847ULL;  // prime below 2^62
  ASSERT_TRUE(is_odd_prime(p));
  const auto s = d_sequence(p, 100);
  EXPECT_EQ(s.size(), 100u);
}

TEST(DSequence, Errors) {
  EXPECT_THROW(d_sequence(2, 5), Error);
  EXPECT_THROW(d_sequence(15, 5), Error);
  EXPECT_THROW(d_sequence(1, 5), Error);
  EXPECT_THROW(d_sequence(13, 0), Error);
  EXPECT_THROW(d_sequence_period(9), Error);
}

TEST(DSequencePeriod, Examples) {
  EXPECT_EQ(d_sequence_period(13), 12u);
  EXPECT_EQ(d_sequence_period(7), 3u);
  EXPECT_EQ(d_sequence_period(3), 2u);
  for (std::uint64_t p : {13u, 19u, 29u, 37u, 53u, 59u, 61u, 67u}) {
    EXPECT_EQ(d_sequence_period(p), p - 1);
  }
}

TEST(DSequencePeriod, BruteForceAllPrimesBelow200) {
  for (std::uint64_t p = 3; p < 200; p += 2) {
    if (!is_odd_prime(p)) continue;
    const auto bits = d_sequence(p, 4 * p).bits();
    const std::uint64_t order = d_sequence_period(p);
    EXPECT_EQ(brute_force_period(bits), order) << "p=" << p;
    EXPECT_EQ(pow_mod(2, order, p), 1u);
    for (std::uint64_t d = 1; d < order; ++d) EXPECT_NE(pow_mod(2, d, p), 1u);
  }
}

TEST(CombinedDSequence, Examples) {
  const std::vector<std::uint64_t> primes{7, 13};
  EXPECT_EQ(combined_d_sequence(primes, 6).to_string(), "001101");
  const auto long_run = combined_d_sequence(primes, 120).bits();
  EXPECT_EQ(12 % brute_force_period(long_run), 0u);
  EXPECT_EQ(combined_d_sequence(primes, 4).provenance().mode, SequenceMode::combined);
}

TEST(CombinedDSequence, Errors) {
  const std::vector<std::uint64_t> dup{13, 13};
  EXPECT_THROW(combined_d_sequence(dup, 6), Error);
  const std::vector<std::uint64_t> one{13};
  EXPECT_THROW(combined_d_sequence(one, 6), Error);
  const std::vector<std::uint64_t> composite{13, 21};
  EXPECT_THROW(combined_d_sequence(composite, 6), Error);
}

TEST(Lfsr, DegreeThreeEnumeration) {
  const LfsrSpec spec{3, {1, 0}, 0b001};
  EXPECT_EQ(lfsr_state_period(spec), 7u);
  const auto s = lfsr_sequence(spec, 14).to_string();
  EXPECT_EQ(s.substr(0, 7), s.substr(7));
  // a(t+3) = a(t+1) xor a(t), starting 1,0,0.
  EXPECT_EQ(s.substr(0, 7), "1001011");
}

TEST(Lfsr, DegreeFourBalance) {
  const LfsrSpec spec{4, {1, 0}, 1};
  EXPECT_EQ(lfsr_state_period(spec), 15u);
  const auto s = lfsr_sequence(spec, 15);
  EXPECT_EQ(s.ones(), 8u);
}

TEST(Lfsr, BuiltInTableIsMaximal) {
  for (unsigned d = 3; d <= 16; ++d) {
    const auto spec = primitive_lfsr(d);
    const std::uint64_t full = (std::uint64_t{1} << d) - 1;
    // Independent register walk: every nonzero state exactly once.
    std::vector<bool> seen(full + 1, false);
    std::uint64_t mask = 0;
    for (auto t : spec.taps) mask |= std::uint64_t{1} << t;
    std::uint64_t state = spec.init;
    for (std::uint64_t step = 0; step < full; ++step) {
      ASSERT_NE(state, 0u);
      ASSERT_FALSE(seen[state]) << "degree " << d;
      seen[state] = true;
      unsigned parity = 0;
      for (unsigned b = 0; b < d; ++b) parity ^= (state & mask) >> b & 1u;
      state = (state >> 1) | (std::uint64_t{parity} << (d - 1));
    }
    EXPECT_EQ(state, spec.init);
    EXPECT_EQ(lfsr_state_period(spec), full) << "degree " << d;
    const auto seq = lfsr_sequence(spec, 2 * full).bits();
    EXPECT_EQ(brute_force_period(seq), full) << "degree " << d;
    EXPECT_EQ(std::accumulate(seq.begin(), seq.begin() + full, 0u), (full + 1) / 2);
  }
}

TEST(Lfsr, NonPrimitiveIsShort) {
  // x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not primitive.
  EXPECT_LT(lfsr_state_period({4, {2, 0}, 1}), 15u);
}

TEST(Lfsr, Errors) {
  EXPECT_THROW(lfsr_sequence({3, {1, 0}, 0}, 5), Error);
  EXPECT_THROW(lfsr_sequence({3, {1}, 1}, 5), Error);
  EXPECT_THROW(lfsr_sequence({3, {3, 0}, 1}, 5), Error);
  EXPECT_THROW(lfsr_sequence({3, {1, 0}, 0b1000}, 5), Error);
  EXPECT_THROW(lfsr_sequence({3, {1, 0}, 1}, 0), Error);
  EXPECT_THROW(primitive_lfsr(2), Error);
  EXPECT_THROW(primitive_lfsr(17), Error);
}
