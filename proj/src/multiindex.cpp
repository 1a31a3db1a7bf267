#include "pellel/multiindex.hpp"

#include <algorithm>
#include <sstream>

namespace pellel {

namespace {

void check_range(int j, int dim) {
  if (j < 1 || j > dim) {
    throw DomainError("index " + std::to_string(j) + " outside 1.." +
                      std::to_string(dim));
  }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> indices, int dim)
    : indices_(std::move(indices)), dim_(dim) {
  if (dim < 0) throw DomainError("negative dimension");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    check_range(indices_[k], dim);
    if (k > 0 && indices_[k] <= indices_[k - 1]) {
      throw DomainError("multiindex must be strictly increasing");
    }
  }
}

bool MultiIndex::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

std::size_t MultiIndex::position() const {
  // Number of increasing tuples that precede this one lexicographically.
  const int p = degree();
  std::size_t rank = 0;
  int prev = 0;
  for (int t = 0; t < p; ++t) {
    for (int v = prev + 1; v < indices_[t]; ++v) {
      rank += binomial(dim_ - v, p - t - 1);
    }
    prev = indices_[t];
  }
  return rank;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) os << ',';
    os << indices_[k];
  }
  os << ')';
  return os.str();
}

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

SignedIndex sort_signature(std::span<const int> seq, int dim) {
  for (int j : seq) check_range(j, dim);
  std::vector<int> v(seq.begin(), seq.end());
  int inversions = 0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      if (v[a] == v[b]) return {MultiIndex({}, dim), 0};
      if (v[a] > v[b]) ++inversions;
    }
  }
  std::sort(v.begin(), v.end());
  return {MultiIndex(std::move(v), dim), inversions % 2 == 0 ? 1 : -1};
}

SignedIndex prepend(int j, const MultiIndex& I) {
  check_range(j, I.dim());
  if (I.contains(j)) return {MultiIndex({}, I.dim()), 0};
  const auto& idx = I.indices();
  const auto pos = std::lower_bound(idx.begin(), idx.end(), j) - idx.begin();
  std::vector<int> v(idx);
  v.insert(v.begin() + pos, j);
  return {MultiIndex(std::move(v), I.dim()), pos % 2 == 0 ? 1 : -1};
}

SignedIndex remove(const MultiIndex& M, int j) {
  check_range(j, M.dim());
  const auto& idx = M.indices();
  const auto it = std::lower_bound(idx.begin(), idx.end(), j);
  if (it == idx.end() || *it != j) {
    throw DomainError("index " + std::to_string(j) + " not in " + M.to_string());
  }
  const auto pos = it - idx.begin();
  std::vector<int> v(idx);
  v.erase(v.begin() + pos);
  return {MultiIndex(std::move(v), M.dim()), pos % 2 == 0 ? 1 : -1};
}

std::vector<MultiIndex> enumerate(int dim, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0 || degree > dim) return out;
  out.reserve(binomial(dim, degree));
  std::vector<int> cur(degree);
  for (int k = 0; k < degree; ++k) cur[k] = k + 1;
  while (true) {
    out.emplace_back(cur, dim);
    int k = degree - 1;
    while (k >= 0 && cur[k] == dim - degree + k + 1) --k;
    if (k < 0) break;
    ++cur[k];
    for (int t = k + 1; t < degree; ++t) cur[t] = cur[t - 1] + 1;
  }
  return out;
}

std::vector<WedgeEntry> wedge_table(int dim, int degree) {
  std::vector<WedgeEntry> table;
  if (degree < 0 || degree >= dim) return table;
  const auto sources = enumerate(dim, degree);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (int j = 1; j <= dim; ++j) {
      const auto si = prepend(j, sources[s]);
      if (si.sign == 0) continue;
      table.push_back({s, j, si.index.position(), si.sign});
    }
  }
  return table;
}

}  // namespace pellel
