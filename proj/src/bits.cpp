#include "vqpm/bits.hpp"

#include <stdexcept>

namespace vqpm {

Bitstring Bitstring::from_index(std::uint64_t index, std::size_t n) {
  if (n > 64) throw std::invalid_argument("Bitstring::from_index: n > 64");
  Bitstring b(n);
  for (std::size_t i = 0; i < n; ++i) b.bits_[i] = (index >> i) & 1u;
  return b;
}

Bitstring Bitstring::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Bitstring::parse: empty input");
  Bitstring b(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '0') {
      b.bits_[i] = 0;
    } else if (text[i] == '1') {
      b.bits_[i] = 1;
    } else {
      throw std::invalid_argument("Bitstring::parse: expected only '0' or '1', got '" +
                                  std::string(1, text[i]) + "'");
    }
  }
  return b;
}

std::uint64_t Bitstring::index() const {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) x |= std::uint64_t{1} << i;
  return x;
}

std::string Bitstring::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

int hamming_distance(const Bitstring& a, const Bitstring& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_distance: size mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.bit(i) != b.bit(i)) ++d;
  return d;
}

}  // namespace vqpm
