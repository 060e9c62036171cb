#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vqpm {

/// Assignment of n binary variables.
///
/// Convention used throughout: variable i is stored in bit i of a state
/// index (least significant bit first), while the textual form writes
/// variable 0 leftmost.  So for n = 3, index 1 reads as "100".
class Bitstring {
 public:
  Bitstring() = default;
  explicit Bitstring(std::size_t n) : bits_(n, 0) {}

  /// Decode the n low bits of a state index.
  static Bitstring from_index(std::uint64_t index, std::size_t n);

  /// Parse a string of '0'/'1' characters, variable 0 leftmost.
  /// Throws std::invalid_argument on any other character or empty input.
  static Bitstring parse(const std::string& text);

  std::size_t size() const { return bits_.size(); }
  int bit(std::size_t i) const { return bits_[i]; }
  void set_bit(std::size_t i, int value) { bits_[i] = value ? 1 : 0; }

  /// State index with variable i in bit i.
  std::uint64_t index() const;

  /// Textual form, variable 0 leftmost.
  std::string str() const;

  friend bool operator==(const Bitstring& a, const Bitstring& b) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Number of positions where a and b differ.
/// Throws std::invalid_argument if sizes differ.
int hamming_distance(const Bitstring& a, const Bitstring& b);

}  // namespace vqpm
