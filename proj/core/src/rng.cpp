#include "sosim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sosim {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a_byte(std::uint64_t h, unsigned char b) {
  h ^= b;
  return h * kFnvPrime;
}

std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) h = fnv1a_byte(h, (v >> (8 * i)) & 0xff);
  return h;
}

std::uint64_t avalanche(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view domain,
                          std::uint64_t index) {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_u64(h, master);
  for (char c : domain) h = fnv1a_byte(h, static_cast<unsigned char>(c));
  h = fnv1a_u64(h, index);
  return avalanche(h);
}

double stable_unit_hash(std::string_view id) {
  std::uint64_t h = kFnvOffset;
  for (char c : id) h = fnv1a_byte(h, static_cast<unsigned char>(c));
  h = avalanche(h);
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return avalanche(state_);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int SplitMix64::next_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("next_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit = (UINT64_MAX / range) * range;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + static_cast<int>(x % range);
}

double SplitMix64::next_gaussian(double mean, double stddev) {
  const double u1 = 1.0 - next_unit();  // (0, 1]
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sosim
