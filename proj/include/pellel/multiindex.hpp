#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pellel {

/// Raised when an index argument lies outside the admissible range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Strictly increasing tuple (i_1 < ... < i_p) of 1-based coordinate indices
/// drawn from 1..dim. The empty tuple is the degree-0 index.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::vector<int> indices, int dim);

  int dim() const { return dim_; }
  int degree() const { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const { return indices_; }
  int operator[](std::size_t k) const { return indices_[k]; }
  bool contains(int j) const;

  /// Rank in the lexicographic enumeration of all degree-p indices over 1..dim.
  std::size_t position() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> indices_;
  int dim_ = 0;
};

/// A multiindex together with the sign of the permutation that produced it.
/// sign == 0 marks a source sequence with a repeated entry.
struct SignedIndex {
  MultiIndex index;
  int sign = 0;
};

std::size_t binomial(int n, int k);

/// Increasing rearrangement of `seq` and the signature of the sorting
/// permutation; sign 0 (and an empty index) when an entry repeats.
SignedIndex sort_signature(std::span<const int> seq, int dim);

/// jI = (j, i_1, ..., i_p) rearranged; sign 0 when j is already in I.
SignedIndex prepend(int j, const MultiIndex& I);

/// M with j deleted, and the sign relating jM^j to M.
SignedIndex remove(const MultiIndex& M, int j);

/// All degree-p multiindices over 1..dim in lexicographic order.
std::vector<MultiIndex> enumerate(int dim, int degree);

/// Precomputed prepend table for degree-p indices: for every source index I
/// (by position) and every axis j not in I, the position of (jI)' among the
/// degree-(p+1) indices and the sign of the rearrangement.
struct WedgeEntry {
  std::size_t source;  // position of I
  int axis;            // j, 1-based
  std::size_t target;  // position of (jI)'
  int sign;
};

std::vector<WedgeEntry> wedge_table(int dim, int degree);

}  // namespace pellel
