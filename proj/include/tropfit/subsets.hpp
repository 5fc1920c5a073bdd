#pragma once

// k-subsets of {0, ..., d-1} ranked in colexicographic order through the
// combinatorial number system: rank(c_0 < ... < c_{k-1}) = sum_i C(c_i, i+1).

#include <cstdint>
#include <span>
#include <vector>

namespace tropfit {

// C(n, k) for 0 <= n <= 64; 0 when k < 0 or k > n.
std::uint64_t binomial(int n, int k) noexcept;

std::uint64_t colex_rank(std::span<const int> sorted) noexcept;
std::vector<int> colex_unrank(std::uint64_t rank, int k);

// Calls f(std::span<const int>) for every k-subset of [d] in colex order.
template <class F>
void for_each_subset(int d, int k, F&& f) {
  if (k < 0 || k > d) return;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(std::span<const int>(c));
    int i = 0;
    while (i < k && c[static_cast<std::size_t>(i)] + 1 ==
                        (i + 1 < k ? c[static_cast<std::size_t>(i + 1)] : d)) {
      ++i;
    }
    if (i >= k) return;
    ++c[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) c[static_cast<std::size_t>(j)] = j;
  }
}

std::vector<std::vector<int>> all_subsets(int d, int k);

}  // namespace tropfit
