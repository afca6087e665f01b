#ifndef HBI_COALITION_HPP
#define HBI_COALITION_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace hbi {

/// A coalition is a subset of players 0..n-1, stored as a bitmask (player i
/// present iff bit i is set). One machine word bounds games at 64 players;
/// the exact enumeration cap keeps practical exact work far below that.
struct Coalition {
  std::uint64_t bits = 0;

  static constexpr int kMaxPlayers = 64;

  static Coalition empty() { return {}; }
  static Coalition all(int n) {
    return {n >= 64 ? ~0ULL : ((1ULL << n) - 1)};
  }
  static Coalition single(int i) { return {1ULL << i}; }
  static Coalition of(std::initializer_list<int> players) {
    Coalition c;
    for (int p : players) c.bits |= 1ULL << p;
    return c;
  }

  bool contains(int i) const { return (bits >> i) & 1ULL; }
  bool none() const { return bits == 0; }
  int size() const { return std::popcount(bits); }

  Coalition with(int i) const { return {bits | (1ULL << i)}; }
  Coalition without(int i) const { return {bits & ~(1ULL << i)}; }
  Coalition unite(Coalition o) const { return {bits | o.bits}; }
  Coalition minus(Coalition o) const { return {bits & ~o.bits}; }
  bool subset_of(Coalition o) const { return (bits & o.bits) == bits; }

  bool operator==(const Coalition&) const = default;
};

/// Member indices in ascending order.
inline std::vector<int> members(Coalition c) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(c.size()));
  for (std::uint64_t b = c.bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

}  // namespace hbi

#endif
