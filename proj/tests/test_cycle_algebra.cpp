#include <gtest/gtest.h>

#include <random>

#include "witnesskit/cycle_algebra.hpp"

using namespace witnesskit;

namespace {

std::vector<Space> all_spaces() {
  return {Space::projective(1), Space::projective(4), Space::product(1, 1), Space::product(2, 3),
          Space::blowup_p2(), Space::g14()};
}

}  // namespace

TEST(ClassFromDegrees, BlowupExceptionalDivisor) {
  const CycleBasis b = builtin_basis(Space::blowup_p2());
  const CycleClass c = class_from_degrees(b.matrix(1), {1, {0, -1}});
  ASSERT_EQ(c.coeffs.size(), 2u);
  EXPECT_EQ(c.coeffs[0], 0);
  EXPECT_EQ(c.coeffs[1], 1);
}

TEST(ClassFromDegrees, ProjectiveIdentity) {
  const CycleBasis b = builtin_basis(Space::projective(3));
  EXPECT_EQ(class_from_degrees(b.matrix(2), {2, {5}}).coeffs[0], 5);
}

TEST(ClassFromDegrees, QuadricLinesInG14) {
  const CycleBasis b = builtin_basis(Space::g14());
  const CycleClass c = class_from_degrees(b.matrix(3), {3, {4, 0}});
  EXPECT_EQ(c.coeffs[0], 4);
  EXPECT_EQ(c.coeffs[1], 0);
  const auto j = to_json(c, b.basis);
  EXPECT_EQ(j.dump(), R"({"coeffs":[["4","1"],["0","1"]],"labels":["13","04"]})");
}

TEST(ClassFromDegrees, ExactRationalSolution) {
  const IntersectionMatrix m{1, {{2, 1}, {1, 3}}};
  const CycleClass c = class_from_degrees(m, {1, {1, 0}});
  EXPECT_EQ(c.coeffs[0], Rational(3, 5));
  EXPECT_EQ(c.coeffs[1], Rational(-1, 5));
}

TEST(ClassFromDegrees, Errors) {
  try {
    class_from_degrees({1, {{1, 2}, {2, 4}}}, {1, {1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "SingularMatrix");
  }
  EXPECT_THROW(class_from_degrees({1, {{1}}}, {2, {1}}), Error);
  EXPECT_THROW(class_from_degrees({1, {{1}}}, {1, {1, 2}}), Error);
}

TEST(ClassFromDegrees, ExactForRandomDegreesOnEveryBuiltinBasis) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<long long> dist(-50, 50);
  for (const auto& space : all_spaces()) {
    const CycleBasis b = builtin_basis(space);
    for (int k = 0; k <= space.dimension(); ++k) {
      const IntersectionMatrix& m = b.matrix(k);
      for (int trial = 0; trial < 5; ++trial) {
        DegreeVector d{k, {}};
        for (int i = 0; i < m.rows(); ++i) d.degrees.push_back(dist(gen));
        const CycleClass c = class_from_degrees(m, d);
        for (int i = 0; i < m.rows(); ++i) {
          Rational s = 0;
          for (int j = 0; j < m.cols(); ++j) s += pairing_degree(m, i, j) * c.coeffs[static_cast<std::size_t>(j)];
          EXPECT_EQ(s, d.degrees[static_cast<std::size_t>(i)]);
        }
        if (is_duality_basis(m)) {
          // c_beta = d_{row paired with beta}
          for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i)
              if (m.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1) {
                EXPECT_EQ(c.coeffs[static_cast<std::size_t>(j)], d.degrees[static_cast<std::size_t>(i)]);
              }
        }
      }
    }
  }
}

TEST(Pairing, Examples) {
  const CycleBasis blowup = builtin_basis(Space::blowup_p2());
  EXPECT_EQ(pairing_degree(blowup.matrix(1), 0, 0), 1);
  EXPECT_EQ(pairing_degree(blowup.matrix(1), 1, 1), -1);
  EXPECT_EQ(pairing_degree(blowup.matrix(1), 0, 1), 0);

  // P^1 x P^1: rows are grade-1 labels (0,1),(1,0); (K0 x L1) . (K1 x L0) = 1
  const CycleBasis p11 = builtin_basis(Space::product(1, 1));
  EXPECT_EQ(p11.basis.grades[1][0].name, "K0xL1");
  EXPECT_EQ(p11.basis.grades[1][1].name, "K1xL0");
  EXPECT_EQ(pairing_degree(p11.matrix(1), 0, 1), 1);
  EXPECT_EQ(pairing_degree(p11.matrix(1), 0, 0), 0);
  EXPECT_EQ(pairing_degree(p11.matrix(1), 1, 0), 1);

  EXPECT_EQ(pairing_degree(builtin_basis(Space::projective(2)).matrix(1), 0, 0), 1);
  try {
    pairing_degree(blowup.matrix(1), 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "IndexOutOfRange");
  }
}

TEST(Duality, Detection) {
  EXPECT_TRUE(is_duality_basis(builtin_basis(Space::g14()).matrix(3)));
  EXPECT_FALSE(is_duality_basis(builtin_basis(Space::blowup_p2()).matrix(1)));
  EXPECT_TRUE(is_duality_basis({0, {{1}}}));
  EXPECT_FALSE(is_duality_basis({0, {{1, 1}, {0, 1}}}));
  EXPECT_FALSE(is_duality_basis({0, {{2}}}));
}

TEST(BuiltinBasis, ShapesAndSymmetry) {
  const CycleBasis p4 = builtin_basis(Space::projective(4));
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(p4.basis.size(k), 1);
  EXPECT_EQ(p4.basis.grades.size(), 5u);

  const CycleBasis g = builtin_basis(Space::g14());
  ASSERT_EQ(g.basis.size(3), 2);
  EXPECT_EQ(g.basis.grades[3][0].name, "13");
  EXPECT_EQ(g.basis.grades[3][1].name, "04");

  const SchubertPoset poset = schubert_poset();
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(g.basis.size(k), poset.rank_counts()[static_cast<std::size_t>(k)]);

  for (const auto& space : all_spaces()) {
    const CycleBasis b = builtin_basis(space);
    const int n = space.dimension();
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(b.basis.size(k), b.basis.size(n - k));
      EXPECT_EQ(b.matrix(k).rows(), b.basis.size(n - k));
      EXPECT_EQ(b.matrix(k).cols(), b.basis.size(k));
    }
  }
  EXPECT_THROW(builtin_basis(Space::projective(0)), Error);
  EXPECT_THROW(builtin_basis(Space::product(0, 2)), Error);
}

TEST(IntersectClasses, SquaresInG14) {
  const CycleBasis g = builtin_basis(Space::g14());
  const CycleClass four{3, {4, 0}};
  const CycleClass sq = intersect_classes(g, four, four);
  EXPECT_EQ(sq.grade, 0);
  ASSERT_EQ(sq.coeffs.size(), 1u);
  EXPECT_EQ(sq.coeffs[0], 16);
  EXPECT_EQ(g.basis.grades[0][0].name, "01");

  EXPECT_EQ(intersect_classes(g, {3, {0, 0}}, {3, {0, 0}}).coeffs[0], 0);
  EXPECT_EQ(intersect_classes(g, {3, {1, 0}}, {3, {0, 1}}).coeffs[0], 0);

  // structure constants agree with the grade-3 pairing
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CycleClass a{3, {0, 0}}, b{3, {0, 0}};
      a.coeffs[static_cast<std::size_t>(i)] = 1;
      b.coeffs[static_cast<std::size_t>(j)] = 1;
      EXPECT_EQ(intersect_classes(g, a, b).coeffs[0], pairing_degree(g.matrix(3), i, j));
    }

  try {
    intersect_classes(g, {2, {1, 0}}, {3, {1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "UnsupportedProduct");
  }
  EXPECT_THROW(intersect_classes(builtin_basis(Space::projective(6)), {3, {1}}, {3, {1}}), Error);
}
