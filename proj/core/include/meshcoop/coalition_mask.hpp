#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace meshcoop {

using ProviderId = int;  // 1-based
using NodeId = int;

// A set of providers encoded as a bitmask; provider m occupies bit m-1.
class Coalition {
 public:
  using Mask = std::uint32_t;
  static constexpr int kMaxProviders = 31;

  constexpr Coalition() = default;
  static constexpr Coalition from_mask(Mask mask) { return Coalition(mask); }
  static Coalition of(std::initializer_list<ProviderId> providers);
  // {1..providers}
  static constexpr Coalition grand(int providers) {
    return Coalition(providers >= 32 ? ~Mask{0} : ((Mask{1} << providers) - 1));
  }
  static constexpr Coalition singleton(ProviderId m) { return Coalition(Mask{1} << (m - 1)); }

  constexpr Mask mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(ProviderId m) const {
    return m >= 1 && m <= 32 && (mask_ >> (m - 1)) & 1U;
  }
  constexpr bool subset_of(Coalition other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool disjoint(Coalition other) const { return (mask_ & other.mask_) == 0; }
  constexpr Coalition with(ProviderId m) const { return Coalition(mask_ | (Mask{1} << (m - 1))); }
  constexpr Coalition without(ProviderId m) const {
    return Coalition(mask_ & ~(Mask{1} << (m - 1)));
  }

  std::vector<ProviderId> members() const;
  // "{1,3}"; "{}" for the empty coalition.
  std::string to_string() const;

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.mask_ | b.mask_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.mask_ & b.mask_); }
  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  constexpr explicit Coalition(Mask mask) : mask_(mask) {}
  Mask mask_ = 0;
};

}  // namespace meshcoop
