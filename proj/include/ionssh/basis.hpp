#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ionssh {

/// Computational basis of L spins-1/2. A basis state is a bitmask with bit
/// j-1 set when site j is up. States are enumerated in ascending bitmask
/// order, either over the full 2^L space or over the sector with a fixed
/// number of up spins.
class Basis {
 public:
  static constexpr int kMaxSites = 30;

  static std::shared_ptr<const Basis> full(int n_sites);
  static std::shared_ptr<const Basis> fixed_magnetization(int n_sites, int n_up);

  int n_sites() const noexcept { return n_sites_; }
  /// -1 for the full space.
  int n_up() const noexcept { return n_up_; }
  bool is_full() const noexcept { return n_up_ < 0; }
  std::size_t dimension() const noexcept { return dim_; }

  std::uint64_t state(std::size_t index) const noexcept {
    return is_full() ? index : states_[index];
  }
  /// Index of `bits`, or dimension() when it lies outside the sector.
  std::size_t index(std::uint64_t bits) const noexcept;

  /// "full" or "fixed_magnetization(n_up)"
  std::string sector_name() const;

 private:
  Basis(int n_sites, int n_up);
  int n_sites_;
  int n_up_;
  std::size_t dim_;
  std::vector<std::uint64_t> states_;  // empty for the full space
};

}  // namespace ionssh
