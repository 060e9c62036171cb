#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vqpm {

/// One qubit pinned to a classical value.
struct LockEvent {
  std::size_t qubit = 0;
  int bit = 0;         ///< 0 or 1
  int iteration = 0;   ///< 1-based iteration at which the lock was taken
  double threshold = 0.0;  ///< threshold in force when the lock fired
};

/// Which qubits are pinned, to which value, and since when.  Locks are
/// permanent: re-locking a qubit is an error.
class LockRegister {
 public:
  LockRegister() = default;
  explicit LockRegister(std::size_t n) : bits_(n, -1) {}

  std::size_t n() const { return bits_.size(); }
  bool is_locked(std::size_t q) const { return bits_.at(q) >= 0; }

  /// Pinned value; only meaningful when is_locked(q).
  int locked_bit(std::size_t q) const { return bits_.at(q); }

  void lock(std::size_t q, int bit);

  std::size_t locked_count() const;
  bool all_locked() const { return locked_count() == n(); }

  friend bool operator==(const LockRegister& a, const LockRegister& b) = default;

 private:
  std::vector<int> bits_;  ///< -1 free, otherwise the pinned value
};

}  // namespace vqpm
