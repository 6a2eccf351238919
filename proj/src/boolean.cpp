#include "hyperbound/boolean.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hyperbound {

std::vector<std::uint64_t> Conjunction::mask(unsigned n) const {
  std::vector<std::uint64_t> m((n + 63) / 64, 0);
  for (unsigned v : vars) {
    if (v >= n) throw std::out_of_range("Conjunction::mask: variable >= n");
    m[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  return m;
}

bool Conjunction::satisfied_by(const Instance& x) const {
  for (unsigned v : vars)
    if (!x.get(v)) return false;
  return true;
}

Conjunction conjunction_from(std::vector<unsigned> vars, unsigned n) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (!vars.empty() && vars.back() >= n)
    throw std::out_of_range("conjunction_from: variable index >= n");
  return Conjunction{std::move(vars)};
}

unsigned falsified_count(const std::vector<std::uint64_t>& mask,
                         const Instance& x) {
  unsigned count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    count += static_cast<unsigned>(std::popcount(mask[i] & ~x.words[i]));
  return count;
}

}  // namespace hyperbound
