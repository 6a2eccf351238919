// Bit-packed instances and monotone conjunctions over {0,1}^n.
#pragma once

#include <cstdint>
#include <vector>

namespace hyperbound {

// A point of {0,1}^n, packed little-endian into 64-bit words; bits at
// positions >= n stay zero.
struct Instance {
  unsigned n = 0;
  std::vector<std::uint64_t> words;

  static Instance zeros(unsigned n) {
    return Instance{n, std::vector<std::uint64_t>((n + 63) / 64, 0)};
  }
  bool get(unsigned i) const { return (words[i / 64] >> (i % 64)) & 1u; }
  void set(unsigned i, bool v) {
    if (v)
      words[i / 64] |= std::uint64_t{1} << (i % 64);
    else
      words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }
  bool operator==(const Instance&) const = default;
};

// Monotone conjunction: AND of the variables in `vars` (strictly increasing,
// no duplicates).  The empty conjunction is the constant-true hypothesis the
// swapping learner starts from; the concept class proper uses size >= 1.
struct Conjunction {
  std::vector<unsigned> vars;

  std::size_t size() const { return vars.size(); }
  bool operator==(const Conjunction&) const = default;

  // Word mask with exactly the member variables' bits set.
  std::vector<std::uint64_t> mask(unsigned n) const;
  // True iff every member variable is 1 in x.
  bool satisfied_by(const Instance& x) const;
};

// Sorts and deduplicates, validating indices against n.
Conjunction conjunction_from(std::vector<unsigned> vars, unsigned n);

// Number of mask variables that are 0 in x (falsified count).
unsigned falsified_count(const std::vector<std::uint64_t>& mask,
                         const Instance& x);

}  // namespace hyperbound
