#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lipschitz {

// Indicator of an edge set, in edge-id order.
struct EdgeConfig {
  std::vector<std::uint8_t> bits;

  EdgeConfig() = default;
  explicit EdgeConfig(int num_edges, bool value = false) : bits(num_edges, value ? 1 : 0) {}

  int size() const { return static_cast<int>(bits.size()); }
  bool operator[](int e) const { return bits[e] != 0; }
  void set(int e, bool value) { bits[e] = value ? 1 : 0; }
  int count() const;

  // Bitstring in edge-id order, e.g. "0110".
  std::string to_string() const;
  static EdgeConfig parse(std::string_view text);

  friend auto operator<=>(const EdgeConfig&, const EdgeConfig&) = default;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

}  // namespace lipschitz
