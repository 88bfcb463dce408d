#include <gtest/gtest.h>

#include <cmath>

#include "witnesskit/polysys.hpp"

using namespace witnesskit;

namespace {

Polynomial circle() {
  return Polynomial(2, {{1.0, {2, 0}}, {1.0, {0, 2}}, {-1.0, {0, 0}}});
}

Polynomial random_poly(Rng& rng, int n, int degree, int num_terms) {
  std::vector<Monomial> terms;
  for (int k = 0; k < num_terms; ++k) {
    Exponents e(static_cast<std::size_t>(n), 0);
    int budget = static_cast<int>(rng.uniform() * (degree + 1));
    for (int j = 0; j < n && budget > 0; ++j) {
      const int take = (j == n - 1) ? budget : static_cast<int>(rng.uniform() * (budget + 1));
      e[static_cast<std::size_t>(j)] = take;
      budget -= take;
    }
    terms.push_back({rng.complex_normal(), e});
  }
  return Polynomial(n, std::move(terms));
}

// Independent oracle: each monomial through std::pow on the raw term list.
Complex term_sum_oracle(const std::vector<Monomial>& terms, const CVector& x) {
  Complex sum = 0.0;
  for (const auto& t : terms) {
    Complex v = t.coefficient;
    for (std::size_t j = 0; j < t.exponents.size(); ++j)
      v *= std::pow(x(static_cast<Eigen::Index>(j)), t.exponents[j]);
    sum += v;
  }
  return sum;
}

CVector vec(std::initializer_list<Complex> v) {
  CVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto z : v) x(i++) = z;
  return x;
}

}  // namespace

TEST(Polysys, CircleEvaluation) {
  const PolySystem sys(2, {circle()});
  EXPECT_EQ(sys.evaluate(vec({1.0, 0.0}))(0), Complex(0.0));
  EXPECT_EQ(sys.evaluate(vec({0.0, 0.0}))(0), Complex(-1.0));
}

TEST(Polysys, EvaluationMatchesTermSumOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Monomial> raw;
    for (int k = 0; k < 8; ++k) {
      Exponents e{static_cast<int>(rng.uniform() * 4), static_cast<int>(rng.uniform() * 4), 0};
      while (e[0] + e[1] > 3) --e[0];
      e[2] = static_cast<int>(rng.uniform() * (4 - e[0] - e[1]));
      raw.push_back({rng.complex_normal(), e});
    }
    const Polynomial p(3, raw);
    EXPECT_LE(p.degree(), 3);
    const CVector x = rng.complex_vector(3);
    const Complex expect = term_sum_oracle(raw, x);
    EXPECT_NEAR(std::abs(p.evaluate(x) - expect), 0.0, 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST(Polysys, IntegerInputsEvaluateExactly) {
  const Polynomial p(2, {{3.0, {3, 1}}, {-7.0, {0, 2}}, {5.0, {1, 0}}, {2.0, {0, 0}}});
  CVector x(2);
  x << 4.0, -3.0;
  // 3*64*(-3) - 7*9 + 20 + 2 = -617
  EXPECT_EQ(p.evaluate(x), Complex(-617.0));
}

TEST(Polysys, TermsCombinedAndSortedGrlex) {
  const Polynomial p(2, {{1.0, {0, 1}}, {2.0, {1, 1}}, {3.0, {0, 1}}, {1.0, {2, 0}}, {0.0, {0, 0}}});
  ASSERT_EQ(p.terms().size(), 3u);
  EXPECT_EQ(p.terms()[0].exponents, (Exponents{2, 0}));
  EXPECT_EQ(p.terms()[1].exponents, (Exponents{1, 1}));
  EXPECT_EQ(p.terms()[2].exponents, (Exponents{0, 1}));
  EXPECT_EQ(p.terms()[2].coefficient, Complex(4.0));
  EXPECT_EQ(Polynomial(2).degree(), 0);
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Polysys, DimensionMismatchThrows) {
  const PolySystem sys(2, {circle()});
  try {
    sys.evaluate(CVector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "DimensionMismatch");
  }
  EXPECT_THROW(sys.jacobian(CVector::Zero(1)), Error);
  EXPECT_THROW(PolySystem(3, {circle()}), Error);
}

TEST(Polysys, JacobianSimpleCases) {
  const PolySystem sys(2, {Polynomial(2, {{1.0, {2, 0}}}), Polynomial(2, {{1.0, {0, 3}}})});
  const CMatrix j = sys.jacobian(vec({1.0, 1.0}));
  EXPECT_EQ(j(0, 0), Complex(2.0));
  EXPECT_EQ(j(0, 1), Complex(0.0));
  EXPECT_EQ(j(1, 0), Complex(0.0));
  EXPECT_EQ(j(1, 1), Complex(3.0));

  Rng rng(3);
  const CMatrix a = rng.complex_matrix(3, 3);
  std::vector<Polynomial> rows;
  for (int i = 0; i < 3; ++i) {
    CVector c(4);
    c << rng.complex_normal(), a(i, 0), a(i, 1), a(i, 2);
    rows.push_back(Polynomial::affine(c));
  }
  const PolySystem lin(3, rows);
  for (int k = 0; k < 3; ++k) EXPECT_LT((lin.jacobian(rng.complex_vector(3)) - a).norm(), 1e-14);
}

TEST(Polysys, JacobianMatchesCentralDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Polynomial> polys;
    for (int i = 0; i < 3; ++i) polys.push_back(random_poly(rng, 3, 2, 6));
    const PolySystem sys(3, polys);
    const CVector x = rng.complex_vector(3);
    const CMatrix jac = sys.jacobian(x);
    const double h = 1e-6;
    for (int j = 0; j < 3; ++j) {
      CVector e = CVector::Zero(3);
      e(j) = h;
      const CVector fd = (sys.evaluate(x + e) - sys.evaluate(x - e)) / (2.0 * h);
      for (int i = 0; i < 3; ++i)
        EXPECT_LT(std::abs(fd(i) - jac(i, j)), 1e-6 * std::max(1.0, std::abs(jac(i, j))));
    }
  }
}

TEST(Polysys, JacobianIsLinear) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial f = random_poly(rng, 2, 3, 5);
    const Polynomial g = random_poly(rng, 2, 3, 5);
    const CVector x = rng.complex_vector(2);
    const CMatrix lhs = PolySystem(2, {f + g}).jacobian(x);
    const CMatrix rhs = PolySystem(2, {f}).jacobian(x) + PolySystem(2, {g}).jacobian(x);
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST(Polysys, EulerIdentityForHomogeneous) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4, 7).homogenized();
    const int d = p.degree();
    const PolySystem sys(4, {p});
    const CVector x = rng.complex_vector(4);
    const Complex euler = (sys.jacobian(x) * x)(0);
    const Complex expect = static_cast<double>(d) * sys.evaluate(x)(0);
    EXPECT_LT(std::abs(euler - expect), 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST(Polysys, JsonRoundTrip) {
  const PolySystem circle_sys({"x", "y"}, {circle()});
  EXPECT_EQ(system_from_json(to_json(circle_sys)), circle_sys);

  Rng rng(17);
  std::vector<Polynomial> quadrics;
  for (int i = 0; i < 6; ++i) quadrics.push_back(random_poly(rng, 6, 2, 12));
  const PolySystem big(6, quadrics);
  const PolySystem back = system_from_json(nlohmann::json::parse(to_json(big).dump()));
  EXPECT_EQ(back, big);
  EXPECT_EQ(back.num_vars(), 6);
  EXPECT_EQ(back.num_eqs(), 6);
}

TEST(Polysys, JsonParsesSchemaAndRejectsBadInput) {
  const auto doc = nlohmann::json::parse(
      R"({"vars":["x","y"],"polys":[[{"c":[1,0],"e":[2,0]},{"c":[1,0],"e":[0,2]},{"c":[-1,0],"e":[0,0]}]]})");
  EXPECT_EQ(system_from_json(doc), PolySystem({"x", "y"}, {circle()}));

  auto expect_parse_error = [](const char* text) {
    try {
      system_from_json(nlohmann::json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), "ParseError") << text;
    }
  };
  expect_parse_error(R"({"vars":["x"],"polys":[[{"c":[1,0],"e":[-1]}]]})");
  expect_parse_error(R"({"vars":["x","y"],"polys":[[{"c":[1,0],"e":[1]}]]})");
  expect_parse_error(R"({"vars":["x"],"polys":[[{"c":[1],"e":[1]}]]})");
  expect_parse_error(R"({"vars":["x"]})");
}
