#include "tropfit/subsets.hpp"

#include <array>

namespace tropfit {
namespace {

constexpr int kMaxN = 64;

struct BinomialTable {
  std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1> c{};
  constexpr BinomialTable() {
    for (int n = 0; n <= kMaxN; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

constexpr BinomialTable kTable;

}  // namespace

std::uint64_t binomial(int n, int k) noexcept {
  if (n < 0 || k < 0 || k > n || n > kMaxN) return 0;
  return kTable.c[n][k];
}

std::uint64_t colex_rank(std::span<const int> sorted) noexcept {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    r += binomial(sorted[i], static_cast<int>(i) + 1);
  }
  return r;
}

std::vector<int> colex_unrank(std::uint64_t rank, int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = k; i >= 1; --i) {
    int c = i - 1;
    while (binomial(c + 1, i) <= rank) ++c;
    out[static_cast<std::size_t>(i - 1)] = c;
    rank -= binomial(c, i);
  }
  return out;
}

std::vector<std::vector<int>> all_subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  for_each_subset(d, k, [&](std::span<const int> s) { out.emplace_back(s.begin(), s.end()); });
  return out;
}

}  // namespace tropfit
