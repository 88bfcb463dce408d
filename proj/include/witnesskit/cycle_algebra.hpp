#pragma once

#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "witnesskit/error.hpp"
#include "witnesskit/schubert.hpp"

namespace witnesskit {

using Rational = boost::multiprecision::cpp_rational;

struct BasisLabel {
  std::string name;
  int rank = 0;
};

/// grades[k] lists the basis cycles of dimension k.
struct GradedBasis {
  int ambient_dim = 0;
  std::vector<std::vector<BasisLabel>> grades;

  int size(int k) const { return static_cast<int>(grades.at(static_cast<std::size_t>(k)).size()); }
};

/// Entry (i, j) = deg([L_i^(n-k)] . [L_j^(k)]); rows follow grade n - k, columns grade k.
struct IntersectionMatrix {
  int k = 0;
  std::vector<std::vector<long long>> entries;

  int rows() const { return static_cast<int>(entries.size()); }
  int cols() const { return entries.empty() ? 0 : static_cast<int>(entries.front().size()); }
};

/// [V] = sum_j coeffs[j] [L_j^(grade)], exact.
struct CycleClass {
  int grade = 0;
  std::vector<Rational> coeffs;
};

/// Witness degrees deg(W_i), indexed like the rows of M^(grade). Signed.
struct DegreeVector {
  int grade = 0;
  std::vector<long long> degrees;
};

inline long long pairing_degree(const IntersectionMatrix& m, int i, int j) {
  if (i < 0 || j < 0 || i >= m.rows() || j >= m.cols())
    throw Error(error_kind::kIndexOutOfRange, "pairing index out of range");
  return m.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

/// Permutation matrices are exactly the self-dual pairings.
inline bool is_duality_basis(const IntersectionMatrix& m) {
  if (m.rows() != m.cols()) return false;
  std::vector<int> col_hits(static_cast<std::size_t>(m.cols()), 0);
  for (const auto& row : m.entries) {
    int ones = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 1) {
        ++ones;
        ++col_hits[j];
      } else if (row[j] != 0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  for (int h : col_hits)
    if (h != 1) return false;
  return true;
}

/// Solves M c = d exactly by Gaussian elimination over Q.
inline CycleClass class_from_degrees(const IntersectionMatrix& m, const DegreeVector& d) {
  if (m.k != d.grade) throw Error(error_kind::kDimensionMismatch, "degree vector and matrix grades differ");
  const int n = m.rows();
  if (n != m.cols()) throw Error(error_kind::kSingularMatrix, "intersection matrix is not square");
  if (static_cast<int>(d.degrees.size()) != n)
    throw Error(error_kind::kDimensionMismatch, "degree vector length differs from the matrix size");

  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (long long v : m.entries[static_cast<std::size_t>(i)]) a[static_cast<std::size_t>(i)].emplace_back(v);
    a[static_cast<std::size_t>(i)].emplace_back(d.degrees[static_cast<std::size_t>(i)]);
  }
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    while (pivot < n && a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(c)] == 0) ++pivot;
    if (pivot == n) throw Error(error_kind::kSingularMatrix, "intersection matrix is singular over Q");
    std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(pivot)]);
    const Rational p = a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    for (auto& v : a[static_cast<std::size_t>(c)]) v /= p;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Rational f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int j = c; j <= n; ++j)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  CycleClass out{d.grade, {}};
  for (int i = 0; i < n; ++i) out.coeffs.push_back(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)]);
  return out;
}

enum class SpaceKind { Projective, Product, BlowupP2, G14 };

struct Space {
  SpaceKind kind = SpaceKind::Projective;
  int m = 0;  // P^m, or the first factor
  int n = 0;  // second factor of a product

  static Space projective(int dim) { return {SpaceKind::Projective, dim, 0}; }
  static Space product(int a, int b) { return {SpaceKind::Product, a, b}; }
  static Space blowup_p2() { return {SpaceKind::BlowupP2, 0, 0}; }
  static Space g14() { return {SpaceKind::G14, 0, 0}; }

  int dimension() const {
    switch (kind) {
      case SpaceKind::Projective: return m;
      case SpaceKind::Product: return m + n;
      case SpaceKind::BlowupP2: return 2;
      case SpaceKind::G14: return kGrassmannDim;
    }
    return 0;
  }
};

struct CycleBasis {
  Space space;
  GradedBasis basis;
  std::vector<IntersectionMatrix> pairing;  // pairing[k] = M^(k)

  const IntersectionMatrix& matrix(int k) const {
    if (k < 0 || k >= static_cast<int>(pairing.size())) throw Error(error_kind::kIndexOutOfRange, "grade out of range");
    return pairing[static_cast<std::size_t>(k)];
  }
};

namespace detail {

inline std::vector<std::vector<long long>> zeros(int r, int c) {
  return std::vector<std::vector<long long>>(static_cast<std::size_t>(r), std::vector<long long>(static_cast<std::size_t>(c), 0));
}

}  // namespace detail

inline CycleBasis builtin_basis(const Space& space) {
  CycleBasis out{space, {space.dimension(), {}}, {}};
  const int dim = space.dimension();
  out.basis.grades.resize(static_cast<std::size_t>(dim) + 1);

  switch (space.kind) {
    case SpaceKind::Projective: {
      if (space.m < 1) throw Error(error_kind::kInvalidArgument, "P^n needs n >= 1");
      for (int k = 0; k <= dim; ++k) {
        out.basis.grades[static_cast<std::size_t>(k)] = {{"L" + std::to_string(k), k}};
        out.pairing.push_back({k, {{1}}});
      }
      break;
    }
    case SpaceKind::Product: {
      if (space.m < 1 || space.n < 1) throw Error(error_kind::kInvalidArgument, "P^m x P^n needs m, n >= 1");
      std::vector<std::vector<std::pair<int, int>>> labels(static_cast<std::size_t>(dim) + 1);
      for (int k = 0; k <= dim; ++k)
        for (int a = 0; a <= space.m; ++a) {
          const int b = k - a;
          if (b < 0 || b > space.n) continue;
          labels[static_cast<std::size_t>(k)].emplace_back(a, b);
          out.basis.grades[static_cast<std::size_t>(k)].push_back(
              {"K" + std::to_string(a) + "xL" + std::to_string(b), k});
        }
      // K_a x L_b meets K_{m-a} x L_{n-b} in one point, everything else in none.
      for (int k = 0; k <= dim; ++k) {
        const auto& cols = labels[static_cast<std::size_t>(k)];
        const auto& rows = labels[static_cast<std::size_t>(dim - k)];
        IntersectionMatrix m{k, detail::zeros(static_cast<int>(rows.size()), static_cast<int>(cols.size()))};
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t c = 0; c < cols.size(); ++c)
            if (rows[r].first + cols[c].first == space.m && rows[r].second + cols[c].second == space.n)
              m.entries[r][c] = 1;
        out.pairing.push_back(std::move(m));
      }
      break;
    }
    case SpaceKind::BlowupP2: {
      out.basis.grades = {{{"pt", 0}}, {{"l", 1}, {"E", 1}}, {{"X", 2}}};
      out.pairing = {{0, {{1}}}, {1, {{1, 0}, {0, -1}}}, {2, {{1}}}};
      break;
    }
    case SpaceKind::G14: {
      const SchubertPoset poset = schubert_poset();
      for (int k = 0; k <= dim; ++k)
        for (const auto& e : poset.of_rank(k)) out.basis.grades[static_cast<std::size_t>(k)].push_back({e.name(), k});
      for (int k = 0; k <= dim; ++k) {
        const auto cols = poset.of_rank(k);
        const auto rows = poset.of_rank(dim - k);
        IntersectionMatrix m{k, detail::zeros(static_cast<int>(rows.size()), static_cast<int>(cols.size()))};
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t c = 0; c < cols.size(); ++c)
            if (rows[r] == schubert_dual(cols[c])) m.entries[r][c] = 1;
        out.pairing.push_back(std::move(m));
      }
      break;
    }
  }
  return out;
}

/// Products of two 3-dimensional classes in G(1, P^4), landing on [X_01].
/// Structure constants: [X13]^2 = [X04]^2 = [X01], [X13][X04] = 0.
inline CycleClass intersect_classes(const CycleBasis& basis, const CycleClass& a, const CycleClass& b) {
  if (basis.space.kind != SpaceKind::G14 || a.grade != 3 || b.grade != 3)
    throw Error(error_kind::kUnsupportedProduct, "only products of grade-3 classes in G(1,P^4) are available");
  if (a.coeffs.size() != 2 || b.coeffs.size() != 2)
    throw Error(error_kind::kDimensionMismatch, "grade-3 classes have two coefficients");
  // basis order at grade 3 is (13, 04)
  static constexpr long long kStructure[2][2] = {{1, 0}, {0, 1}};
  Rational point = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) point += a.coeffs[i] * b.coeffs[j] * kStructure[i][j];
  return {0, {point}};
}

inline nlohmann::json rational_to_json(const Rational& r) {
  return nlohmann::json::array({boost::multiprecision::numerator(r).str(), boost::multiprecision::denominator(r).str()});
}

inline nlohmann::json to_json(const CycleClass& c, const GradedBasis& basis) {
  nlohmann::json coeffs = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& r : c.coeffs) coeffs.push_back(rational_to_json(r));
  for (const auto& l : basis.grades.at(static_cast<std::size_t>(c.grade))) labels.push_back(l.name);
  return {{"coeffs", std::move(coeffs)}, {"labels", std::move(labels)}};
}

}  // namespace witnesskit
