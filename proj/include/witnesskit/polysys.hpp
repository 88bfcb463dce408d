#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "witnesskit/error.hpp"
#include "witnesskit/json_io.hpp"
#include "witnesskit/random.hpp"

namespace witnesskit {

using Exponents = std::vector<int>;

struct Monomial {
  Complex coefficient;
  Exponents exponents;

  int degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
};

namespace detail {

/// Graded-lexicographic order, largest first.
inline bool grlex_greater(const Exponents& a, const Exponents& b) {
  int da = 0, db = 0;
  for (int e : a) da += e;
  for (int e : b) db += e;
  if (da != db) return da > db;
  return a > b;
}

/// powers[j][k] = x_j^k for k <= max_degree.
inline std::vector<std::vector<Complex>> power_table(const CVector& x, int max_degree) {
  std::vector<std::vector<Complex>> powers(static_cast<std::size_t>(x.size()));
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    auto& row = powers[static_cast<std::size_t>(j)];
    row.resize(static_cast<std::size_t>(max_degree) + 1);
    row[0] = 1.0;
    for (int k = 1; k <= max_degree; ++k) row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k) - 1] * x(j);
  }
  return powers;
}

}  // namespace detail

/// Sparse polynomial over C. Terms are unique, nonzero and sorted by
/// decreasing graded-lexicographic order; the zero polynomial has no terms.
class Polynomial {
 public:
  explicit Polynomial(int num_vars = 0) : num_vars_(num_vars) {
    if (num_vars < 0) throw Error(error_kind::kInvalidArgument, "negative variable count");
  }

  Polynomial(int num_vars, std::vector<Monomial> terms) : Polynomial(num_vars) {
    std::map<Exponents, Complex, decltype(&detail::grlex_greater)> merged(&detail::grlex_greater);
    for (auto& t : terms) {
      if (static_cast<int>(t.exponents.size()) != num_vars)
        throw Error(error_kind::kDimensionMismatch, "exponent vector length differs from variable count");
      for (int e : t.exponents)
        if (e < 0) throw Error(error_kind::kInvalidArgument, "negative exponent");
      if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
        throw Error(error_kind::kInvalidArgument, "non-finite coefficient");
      merged[t.exponents] += t.coefficient;
    }
    for (auto& [e, c] : merged)
      if (c != Complex(0.0)) terms_.push_back({c, e});
  }

  static Polynomial constant(int num_vars, Complex c) {
    return Polynomial(num_vars, {{c, Exponents(static_cast<std::size_t>(num_vars), 0)}});
  }

  static Polynomial variable(int num_vars, int index) {
    Exponents e(static_cast<std::size_t>(num_vars), 0);
    e.at(static_cast<std::size_t>(index)) = 1;
    return Polynomial(num_vars, {{Complex(1.0), e}});
  }

  /// a_0 + sum_j a_{j+1} x_j
  static Polynomial affine(const CVector& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<Monomial> terms;
    terms.push_back({coeffs(0), Exponents(static_cast<std::size_t>(n), 0)});
    for (int j = 0; j < n; ++j) {
      Exponents e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(j)] = 1;
      terms.push_back({coeffs(j + 1), e});
    }
    return Polynomial(n, std::move(terms));
  }

  int num_vars() const { return num_vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? 0 : terms_.front().degree(); }

  Complex evaluate(const CVector& x) const {
    check_point(x);
    return evaluate_with(detail::power_table(x, degree()));
  }

  Complex evaluate_with(const std::vector<std::vector<Complex>>& powers) const {
    Complex sum = 0.0;
    for (const auto& t : terms_) {
      Complex term = t.coefficient;
      for (std::size_t j = 0; j < t.exponents.size(); ++j) term *= powers[j][static_cast<std::size_t>(t.exponents[j])];
      sum += term;
    }
    return sum;
  }

  Polynomial derivative(int var) const {
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
      const int e = t.exponents.at(static_cast<std::size_t>(var));
      if (e == 0) continue;
      Monomial m{t.coefficient * static_cast<double>(e), t.exponents};
      m.exponents[static_cast<std::size_t>(var)] = e - 1;
      out.push_back(std::move(m));
    }
    return Polynomial(num_vars_, std::move(out));
  }

  /// Adds a leading variable h0 and multiplies every term by h0^(deg - |e|).
  Polynomial homogenized() const {
    const int d = degree();
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
      Exponents e;
      e.reserve(t.exponents.size() + 1);
      e.push_back(d - t.degree());
      e.insert(e.end(), t.exponents.begin(), t.exponents.end());
      out.push_back({t.coefficient, std::move(e)});
    }
    return Polynomial(num_vars_ + 1, std::move(out));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    std::vector<Monomial> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(a.num_vars_, std::move(terms));
  }

  friend Polynomial operator*(Complex s, const Polynomial& p) {
    std::vector<Monomial> terms = p.terms_;
    for (auto& t : terms) t.coefficient *= s;
    return Polynomial(p.num_vars_, std::move(terms));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Complex(-1.0) * b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    std::vector<Monomial> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        Exponents e = s.exponents;
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += t.exponents[j];
        terms.push_back({s.coefficient * t.coefficient, std::move(e)});
      }
    return Polynomial(a.num_vars_, std::move(terms));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coefficient != b.terms_[i].coefficient || a.terms_[i].exponents != b.terms_[i].exponents)
        return false;
    return true;
  }

 private:
  void check_point(const CVector& x) const {
    if (x.size() != num_vars_) throw Error(error_kind::kDimensionMismatch, "point length differs from variable count");
  }
  void check_compatible(const Polynomial& other) const {
    if (other.num_vars_ != num_vars_) throw Error(error_kind::kDimensionMismatch, "polynomials in different rings");
  }

  int num_vars_;
  std::vector<Monomial> terms_;
};

/// F : C^n -> C^N given by a list of polynomials in the same n variables.
class PolySystem {
 public:
  PolySystem() = default;

  PolySystem(std::vector<std::string> var_names, std::vector<Polynomial> polys)
      : var_names_(std::move(var_names)), polys_(std::move(polys)) {
    for (const auto& p : polys_)
      if (p.num_vars() != num_vars())
        throw Error(error_kind::kDimensionMismatch, "polynomial variable count differs from system");
    for (const auto& p : polys_) max_degree_ = std::max(max_degree_, p.degree());
  }

  /// Variables named x0, x1, ...
  PolySystem(int num_vars, std::vector<Polynomial> polys) : PolySystem(default_names(num_vars), std::move(polys)) {}

  static std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
  }

  int num_vars() const { return static_cast<int>(var_names_.size()); }
  int num_eqs() const { return static_cast<int>(polys_.size()); }
  bool is_square() const { return num_vars() == num_eqs(); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::vector<Polynomial>& polys() const { return polys_; }
  const Polynomial& operator[](std::size_t i) const { return polys_.at(i); }
  int max_degree() const { return max_degree_; }

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
  }

  CVector evaluate(const CVector& x) const {
    check_point(x);
    const auto powers = detail::power_table(x, max_degree_);
    CVector out(num_eqs());
    for (int i = 0; i < num_eqs(); ++i) out(i) = polys_[static_cast<std::size_t>(i)].evaluate_with(powers);
    return out;
  }

  /// Entry (i, j) is d f_i / d x_j, differentiated term by term.
  CMatrix jacobian(const CVector& x) const {
    check_point(x);
    const auto powers = detail::power_table(x, max_degree_);
    const int n = num_vars();
    CMatrix jac = CMatrix::Zero(num_eqs(), n);
    for (int i = 0; i < num_eqs(); ++i) {
      for (const auto& t : polys_[static_cast<std::size_t>(i)].terms()) {
        for (int j = 0; j < n; ++j) {
          const int ej = t.exponents[static_cast<std::size_t>(j)];
          if (ej == 0) continue;
          Complex d = t.coefficient * static_cast<double>(ej);
          for (int l = 0; l < n; ++l) {
            const int el = t.exponents[static_cast<std::size_t>(l)] - (l == j ? 1 : 0);
            d *= powers[static_cast<std::size_t>(l)][static_cast<std::size_t>(el)];
          }
          jac(i, j) += d;
        }
      }
    }
    return jac;
  }

  PolySystem homogenized() const {
    std::vector<std::string> names{"h0"};
    names.insert(names.end(), var_names_.begin(), var_names_.end());
    std::vector<Polynomial> polys;
    for (const auto& p : polys_) polys.push_back(p.homogenized());
    return PolySystem(std::move(names), std::move(polys));
  }

  friend bool operator==(const PolySystem& a, const PolySystem& b) {
    return a.var_names_ == b.var_names_ && a.polys_ == b.polys_;
  }

 private:
  void check_point(const CVector& x) const {
    if (x.size() != num_vars()) throw Error(error_kind::kDimensionMismatch, "point length differs from variable count");
  }

  std::vector<std::string> var_names_;
  std::vector<Polynomial> polys_;
  int max_degree_ = 0;
};

inline nlohmann::json to_json(const PolySystem& sys) {
  using nlohmann::json;
  json polys = json::array();
  for (const auto& p : sys.polys()) {
    json terms = json::array();
    for (const auto& t : p.terms()) terms.push_back({{"c", json_io::complex_to_json(t.coefficient)}, {"e", t.exponents}});
    polys.push_back(std::move(terms));
  }
  return {{"vars", sys.var_names()}, {"polys", std::move(polys)}};
}

inline PolySystem system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("polys"))
    throw Error(error_kind::kParse, "system document needs \"vars\" and \"polys\"");
  const auto& vars = j.at("vars");
  if (!vars.is_array()) throw Error(error_kind::kParse, "\"vars\" must be an array of names");
  std::vector<std::string> names;
  for (const auto& v : vars) {
    if (!v.is_string()) throw Error(error_kind::kParse, "variable names must be strings");
    names.push_back(v.get<std::string>());
  }
  const int n = static_cast<int>(names.size());
  if (n == 0) throw Error(error_kind::kParse, "system has no variables");
  const auto& polys = j.at("polys");
  if (!polys.is_array()) throw Error(error_kind::kParse, "\"polys\" must be an array");
  std::vector<Polynomial> out;
  for (const auto& pj : polys) {
    if (!pj.is_array()) throw Error(error_kind::kParse, "each polynomial must be an array of terms");
    std::vector<Monomial> terms;
    for (const auto& tj : pj) {
      if (!tj.is_object() || !tj.contains("c") || !tj.contains("e"))
        throw Error(error_kind::kParse, "each term needs \"c\" and \"e\"");
      const auto& ej = tj.at("e");
      if (!ej.is_array() || static_cast<int>(ej.size()) != n)
        throw Error(error_kind::kParse, "exponent vector length differs from variable count");
      Exponents e;
      for (const auto& x : ej) {
        if (!x.is_number_integer() || x.get<long long>() < 0)
          throw Error(error_kind::kParse, "exponents must be nonnegative integers");
        e.push_back(x.get<int>());
      }
      terms.push_back({json_io::complex_from_json(tj.at("c")), std::move(e)});
    }
    out.emplace_back(n, std::move(terms));
  }
  return PolySystem(std::move(names), std::move(out));
}

}  // namespace witnesskit
