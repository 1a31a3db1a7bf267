#include <doctest.h>

#include <algorithm>

#include "pellel/multiindex.hpp"

using namespace pellel;

namespace {

SignedIndex sorted(std::initializer_list<int> seq, int dim) {
  const std::vector<int> v(seq);
  return sort_signature(v, dim);
}

MultiIndex mi(std::vector<int> v, int dim) { return MultiIndex(std::move(v), dim); }

/// Signature by counting inversions.
int inversion_sign(const std::vector<int>& v) {
  int inv = 0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      if (v[a] == v[b]) return 0;
      if (v[a] > v[b]) ++inv;
    }
  }
  return inv % 2 ? -1 : 1;
}

}  // namespace

TEST_CASE("sort_signature") {
  auto s = sorted({2, 1}, 3);
  CHECK(s.index == mi({1, 2}, 3));
  CHECK(s.sign == -1);

  s = sorted({1, 1}, 3);
  CHECK(s.sign == 0);
  CHECK(s.index.degree() == 0);

  s = sorted({3, 1, 2}, 3);
  CHECK(s.index == mi({1, 2, 3}, 3));
  CHECK(s.sign == 1);

  CHECK_THROWS_AS(sorted({0, 1}, 3), DomainError);
  CHECK_THROWS_AS(sorted({1, 4}, 3), DomainError);
}

TEST_CASE("sort_signature agrees with inversion count on all permutations of 4") {
  std::vector<int> v{1, 2, 3, 4};
  do {
    const auto s = sort_signature(v, 4);
    CHECK(s.sign == inversion_sign(v));
    CHECK(s.index == mi({1, 2, 3, 4}, 4));
  } while (std::next_permutation(v.begin(), v.end()));
}

TEST_CASE("prepend") {
  auto s = prepend(1, mi({2}, 3));
  CHECK(s.index == mi({1, 2}, 3));
  CHECK(s.sign == 1);
  s = prepend(3, mi({2}, 3));
  CHECK(s.index == mi({2, 3}, 3));
  CHECK(s.sign == -1);
  CHECK(prepend(2, mi({2}, 3)).sign == 0);
  CHECK_THROWS_AS(prepend(4, mi({2}, 3)), DomainError);
}

TEST_CASE("remove") {
  auto s = remove(mi({1, 2}, 2), 1);
  CHECK(s.index == mi({2}, 2));
  CHECK(s.sign == 1);
  s = remove(mi({1, 2}, 2), 2);
  CHECK(s.index == mi({1}, 2));
  CHECK(s.sign == -1);
  s = remove(mi({1, 2, 3}, 3), 3);
  CHECK(s.index == mi({1, 2}, 3));
  CHECK(s.sign == 1);
  CHECK_THROWS_AS(remove(mi({1, 2}, 3), 3), DomainError);
}

TEST_CASE("remove inverts prepend") {
  for (int dim = 1; dim <= 5; ++dim) {
    for (int p = 1; p <= dim; ++p) {
      for (const auto& M : enumerate(dim, p)) {
        for (int j : M.indices()) {
          const auto r = remove(M, j);
          const auto back = prepend(j, r.index);
          CHECK(back.index == M);
          CHECK(back.sign == r.sign);
        }
      }
    }
  }
}

TEST_CASE("MultiIndex invariants") {
  CHECK_THROWS_AS(mi({2, 1}, 3), DomainError);
  CHECK_THROWS_AS(mi({1, 1}, 3), DomainError);
  CHECK_THROWS_AS(mi({0}, 3), DomainError);
  CHECK(mi({}, 3).degree() == 0);
  CHECK(mi({1, 3}, 3).contains(3));
  CHECK_FALSE(mi({1, 3}, 3).contains(2));
}

TEST_CASE("enumerate is lexicographic with positions matching ranks") {
  for (int dim = 0; dim <= 6; ++dim) {
    for (int p = 0; p <= dim; ++p) {
      const auto all = enumerate(dim, p);
      CHECK(all.size() == binomial(dim, p));
      for (std::size_t k = 0; k < all.size(); ++k) {
        CHECK(all[k].position() == k);
        if (k > 0) CHECK(all[k - 1] < all[k]);
      }
    }
  }
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(2, 3) == 0);
}

TEST_CASE("wedge_table matches prepend") {
  for (int dim = 1; dim <= 5; ++dim) {
    for (int p = 0; p < dim; ++p) {
      const auto src = enumerate(dim, p);
      const auto dst = enumerate(dim, p + 1);
      const auto table = wedge_table(dim, p);
      CHECK(table.size() == src.size() * static_cast<std::size_t>(dim - p));
      for (const auto& e : table) {
        const auto s = prepend(e.axis, src[e.source]);
        CHECK(s.sign == e.sign);
        CHECK(dst[e.target] == s.index);
      }
    }
    CHECK(wedge_table(dim, dim).empty());
  }
}
