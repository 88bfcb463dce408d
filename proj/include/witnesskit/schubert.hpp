#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "witnesskit/error.hpp"

namespace witnesskit {

/// Schubert variety X_{ij} of the Grassmannian of lines in P^4: lines meeting
/// M_i and contained in M_j, 0 <= i < j <= 4. Its dimension is i + j - 1.
struct SchubertIndex {
  int i = 0;
  int j = 1;

  constexpr bool valid() const { return 0 <= i && i < j && j <= 4; }
  constexpr int rank() const { return i + j - 1; }

  std::string name() const { return std::to_string(i) + std::to_string(j); }

  static SchubertIndex parse(const std::string& s) {
    if (s.size() != 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9')
      throw Error(error_kind::kInvalidArgument, "Schubert index must look like \"13\"");
    const SchubertIndex idx{s[0] - '0', s[1] - '0'};
    if (!idx.valid()) throw Error(error_kind::kInvalidArgument, "Schubert index out of range: " + s);
    return idx;
  }

  friend constexpr auto operator<=>(const SchubertIndex&, const SchubertIndex&) = default;
};

inline constexpr int kGrassmannDim = 6;

/// Bruhat order: X_{ij} is contained in X_{ab} iff i <= a and j <= b.
constexpr bool schubert_leq(SchubertIndex a, SchubertIndex b) { return a.i <= b.i && a.j <= b.j; }

/// Duality: (i, j) -> (4 - j, 4 - i).
inline SchubertIndex schubert_dual(SchubertIndex idx) {
  if (!idx.valid()) throw Error(error_kind::kInvalidArgument, "invalid Schubert index");
  return {4 - idx.j, 4 - idx.i};
}

struct SchubertPoset {
  std::vector<SchubertIndex> elements;  // by rank, then by increasing j
  std::vector<std::pair<SchubertIndex, SchubertIndex>> covers;

  std::vector<SchubertIndex> of_rank(int r) const {
    std::vector<SchubertIndex> out;
    for (const auto& e : elements)
      if (e.rank() == r) out.push_back(e);
    return out;
  }

  std::vector<int> rank_counts() const {
    std::vector<int> counts(kGrassmannDim + 1, 0);
    for (const auto& e : elements) ++counts[static_cast<std::size_t>(e.rank())];
    return counts;
  }
};

inline SchubertPoset schubert_poset() {
  SchubertPoset p;
  for (int r = 0; r <= kGrassmannDim; ++r)
    for (int j = 1; j <= 4; ++j) {
      const SchubertIndex idx{r + 1 - j, j};
      if (idx.valid()) p.elements.push_back(idx);
    }
  for (const auto& a : p.elements)
    for (const auto& b : p.elements) {
      if (a == b || !schubert_leq(a, b)) continue;
      bool between = false;
      for (const auto& c : p.elements)
        if (c != a && c != b && schubert_leq(a, c) && schubert_leq(c, b)) between = true;
      if (!between) p.covers.emplace_back(a, b);
    }
  return p;
}

}  // namespace witnesskit
