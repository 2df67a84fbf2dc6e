#include "ionssh/basis.hpp"

#include <algorithm>
#include <bit>

#include "ionssh/error.hpp"

namespace ionssh {

namespace {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Basis::Basis(int n_sites, int n_up) : n_sites_(n_sites), n_up_(n_up), dim_(0) {
  if (n_sites < 1 || n_sites > kMaxSites) throw ConfigError("basis: number of sites out of range");
  if (n_up < 0) {
    dim_ = std::size_t{1} << n_sites;
    return;
  }
  if (n_up > n_sites) throw ConfigError("basis: more up spins than sites");
  dim_ = binomial(n_sites, n_up);
  states_.reserve(dim_);
  if (n_up == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks the fixed-popcount masks in ascending order.
  std::uint64_t v = (std::uint64_t{1} << n_up) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  while (v < limit) {
    states_.push_back(v);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
}

std::shared_ptr<const Basis> Basis::full(int n_sites) {
  return std::shared_ptr<const Basis>(new Basis(n_sites, -1));
}

std::shared_ptr<const Basis> Basis::fixed_magnetization(int n_sites, int n_up) {
  if (n_up < 0) throw ConfigError("basis: n_up must be >= 0");
  return std::shared_ptr<const Basis>(new Basis(n_sites, n_up));
}

std::size_t Basis::index(std::uint64_t bits) const noexcept {
  if (is_full()) return bits < dim_ ? bits : dim_;
  if (std::popcount(bits) != n_up_) return dim_;
  const auto it = std::lower_bound(states_.begin(), states_.end(), bits);
  if (it == states_.end() || *it != bits) return dim_;
  return static_cast<std::size_t>(it - states_.begin());
}

std::string Basis::sector_name() const {
  return is_full() ? "full" : "fixed_magnetization(" + std::to_string(n_up_) + ")";
}

}  // namespace ionssh
