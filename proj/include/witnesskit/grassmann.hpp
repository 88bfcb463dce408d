#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "witnesskit/cycle_algebra.hpp"
#include "witnesskit/error.hpp"
#include "witnesskit/json_io.hpp"
#include "witnesskit/polysys.hpp"
#include "witnesskit/random.hpp"
#include "witnesskit/schubert.hpp"
#include "witnesskit/solver.hpp"
#include "witnesskit/witness.hpp"

namespace witnesskit {

namespace detail {

inline Complex bilinear(const CVector& x, const CVector& y) { return (x.transpose() * y).value(); }

inline Complex bilinear(const CVector& x, const CMatrix& a, const CVector& y) { return (x.transpose() * a * y).value(); }

// Unit vector spanning the (numerical) kernel of m.
inline CVector kernel_vector(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().col(svd.matrixV().cols() - 1);
}

}  // namespace detail

/// Full flag in P^4: M_i is spanned by the first i + 1 columns of the frame.
class Flag {
 public:
  Flag() = default;
  explicit Flag(CMatrix frame) : frame_(std::move(frame)) {
    if (frame_.rows() != 5 || frame_.cols() != 5) throw Error(error_kind::kDimensionMismatch, "flag frame must be 5x5");
    if (!frame_.allFinite() || linalg::condition_number(frame_) > 1e10)
      throw Error(error_kind::kDegenerateFlag, "flag frame is not invertible");
  }

  static Flag random(Rng& rng) { return Flag(rng.complex_matrix(5, 5)); }

  const CMatrix& frame() const { return frame_; }
  CVector point(int i) const { return frame_.col(i); }
  /// Columns spanning M_i.
  CMatrix subspace(int i) const { return frame_.leftCols(i + 1); }

 private:
  CMatrix frame_;
};

/// Index pairs (i, j), i < j, in Pluecker coordinate order 01, 02, 03, 04, 12, ...
inline const std::array<std::pair<int, int>, 10>& pluecker_pairs() {
  static const std::array<std::pair<int, int>, 10> pairs = [] {
    std::array<std::pair<int, int>, 10> out{};
    std::size_t k = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) out[k++] = {i, j};
    return out;
  }();
  return pairs;
}

/// A line in P^4: an orthonormal 2x5 span and its canonical Pluecker vector
/// (unit norm, first non-negligible entry real positive).
class Line {
 public:
  Line() = default;
  explicit Line(const CMatrix& span) {
    if (span.rows() != 2 || span.cols() != 5) throw Error(error_kind::kDimensionMismatch, "line span must be 2x5");
    const Eigen::VectorXd s = linalg::singular_values(span);
    if (!span.allFinite() || !(s(1) > 1e-10 * s(0))) throw Error(error_kind::kInvalidArgument, "line span is not rank 2");
    CMatrix rows = span.transpose();
    Eigen::HouseholderQR<CMatrix> qr(rows);
    span_ = (qr.householderQ() * CMatrix::Identity(5, 2)).transpose();

    pluecker_.resize(10);
    std::size_t k = 0;
    for (const auto& [i, j] : pluecker_pairs()) {
      pluecker_(static_cast<Eigen::Index>(k++)) = span(0, i) * span(1, j) - span(0, j) * span(1, i);
    }
    pluecker_ /= pluecker_.norm();
    for (Eigen::Index i = 0; i < 10; ++i) {
      if (std::abs(pluecker_(i)) > 1e-8) {
        pluecker_ *= std::conj(pluecker_(i)) / std::abs(pluecker_(i));
        pluecker_(i) = std::abs(pluecker_(i));
        break;
      }
    }
  }

  static Line through(const CVector& p, const CVector& q) {
    CMatrix span(2, 5);
    span.row(0) = p.transpose();
    span.row(1) = q.transpose();
    return Line(span);
  }

  const CMatrix& span() const { return span_; }
  const CVector& pluecker() const { return pluecker_; }
  CVector point(int r) const { return span_.row(r).transpose(); }

  /// Largest residual of the five quadratic Pluecker relations.
  double pluecker_relation_residual() const {
    auto p = [&](int i, int j) {
      for (std::size_t k = 0; k < 10; ++k)
        if (pluecker_pairs()[k] == std::pair{i, j}) return pluecker_(static_cast<Eigen::Index>(k));
      return Complex(0.0);
    };
    double worst = 0.0;
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b)
        for (int c = b + 1; c < 5; ++c)
          for (int d = c + 1; d < 5; ++d)
            worst = std::max(worst, std::abs(p(a, b) * p(c, d) - p(a, c) * p(b, d) + p(a, d) * p(b, c)));
    return worst;
  }

 private:
  CMatrix span_;
  CVector pluecker_;
};

/// Chordal distance between the points of P^9 given by two Pluecker vectors.
inline double pluecker_distance(const Line& a, const Line& b) {
  // |b - <a, b> a| = sin of the angle, without cancellation near 0
  return (b.pluecker() - a.pluecker().dot(b.pluecker()) * a.pluecker()).norm();
}

inline bool pluecker_less(const Line& a, const Line& b) { return lex_less(a.pluecker(), b.pluecker()); }

/// Zero set of x^T A x with A symmetric 5x5.
class Quadric {
 public:
  Quadric() = default;
  explicit Quadric(CMatrix a) : matrix_(std::move(a)) {
    if (matrix_.rows() != 5 || matrix_.cols() != 5) throw Error(error_kind::kDimensionMismatch, "quadric must be 5x5");
    if (!matrix_.allFinite()) throw Error(error_kind::kInvalidArgument, "quadric has non-finite entries");
    const double scale = matrix_.norm();
    if (scale == 0.0) throw Error(error_kind::kSingularQuadric, "zero quadric");
    if ((matrix_ - matrix_.transpose()).norm() > 1e-12 * scale)
      throw Error(error_kind::kInvalidArgument, "quadric matrix must be symmetric");
    normalized_ = matrix_ / scale;
  }

  static Quadric random(Rng& rng) {
    const CMatrix b = rng.complex_matrix(5, 5);
    return Quadric(0.5 * (b + b.transpose()));
  }

  const CMatrix& matrix() const { return matrix_; }
  /// A / |A|_F
  const CMatrix& normalized() const { return normalized_; }

  double normalized_determinant() const { return std::abs(normalized_.determinant()); }
  bool smooth() const { return normalized_determinant() > 1e-8; }

  Complex value(const CVector& x) const { return detail::bilinear(x, normalized_, x); }

  /// (p^T A p, p^T A q, q^T A q) on an orthonormal basis of the line, with A normalized.
  std::array<double, 3> line_residuals(const Line& l) const {
    const CVector p = l.point(0), q = l.point(1);
    return {std::abs(detail::bilinear(p, normalized_, p)), std::abs(detail::bilinear(p, normalized_, q)),
            std::abs(detail::bilinear(q, normalized_, q))};
  }

  bool contains(const Line& l, double tol = 1e-8) const {
    const auto r = line_residuals(l);
    return r[0] < tol && r[1] < tol && r[2] < tol;
  }

 private:
  CMatrix matrix_;
  CMatrix normalized_;
};

/// Rank tests with singular values relative to the largest:
/// l meets M_i iff [l; m_0..m_i] has rank <= i + 2, l lies in M_j iff [l; m_0..m_j] has rank <= j + 1.
inline bool line_in_schubert(const Line& l, SchubertIndex idx, const Flag& flag, double tol = 1e-8) {
  if (!idx.valid()) throw Error(error_kind::kInvalidArgument, "invalid Schubert index");
  auto rank_at_most = [&](int last, int bound) {
    if (bound >= 5) return true;
    CMatrix stack(2 + last + 1, 5);
    stack.topRows(2) = l.span();
    for (int k = 0; k <= last; ++k) stack.row(2 + k) = flag.point(k).transpose() / flag.point(k).norm();
    const Eigen::VectorXd s = linalg::singular_values(stack);
    return s(bound) < tol * s(0);
  };
  return rank_at_most(idx.i, idx.i + 2) && rank_at_most(idx.j, idx.j + 1);
}

// ---------------------------------------------------------------------------
// Lines on a quadric meeting a Schubert condition X_13

/// Affine chart on X_13(M): p = m0 + s m1 on M_1, q = r2 + u r0 + v r1 where
/// (r0, .., r3) = (m0, .., m3) U for a unitary 4x4 U.
struct QuadricChart {
  CMatrix frame;    // 5x5
  CMatrix rotated;  // 5x4

  QuadricChart(const CMatrix& f, const CMatrix& u) : frame(f), rotated(f.leftCols(4) * u) {}

  CVector p(const CVector& x) const { return frame.col(0) + x(0) * frame.col(1); }
  CVector q(const CVector& x) const { return rotated.col(2) + x(1) * rotated.col(0) + x(2) * rotated.col(1); }
  Line line(const CVector& x) const { return Line::through(p(x), q(x)); }

  /// Chart coordinates (s, u, v) of a line in X_13 of this frame.
  CVector coordinates(const Line& l) const {
    CMatrix a(5, 4);
    a << l.point(0), l.point(1), -frame.col(0), -frame.col(1);
    const CVector kp = detail::kernel_vector(a);
    CMatrix b(5, 5);
    b << l.point(0), l.point(1), -rotated.col(0), -rotated.col(1), -rotated.col(2);
    const CVector kq = detail::kernel_vector(b);
    CVector x(3);
    x << kp(3) / kp(2), kq(2) / kq(4), kq(3) / kq(4);
    return x;
  }

  /// (p^T A p, p^T A q, q^T A q) as polynomials in (s, u, v).
  PolySystem system(const CMatrix& a) const {
    std::vector<Polynomial> pv, qv;
    for (int k = 0; k < 5; ++k) {
      CVector cp(4), cq(4);
      cp << frame(k, 0), frame(k, 1), 0.0, 0.0;
      cq << rotated(k, 2), 0.0, rotated(k, 0), rotated(k, 1);
      pv.push_back(Polynomial::affine(cp));
      qv.push_back(Polynomial::affine(cq));
    }
    auto form = [&](const std::vector<Polynomial>& x, const std::vector<Polynomial>& y) {
      Polynomial out(3);
      for (int i = 0; i < 5; ++i) {
        Polynomial row(3);
        for (int j = 0; j < 5; ++j) row = row + a(i, j) * y[static_cast<std::size_t>(j)];
        out = out + x[static_cast<std::size_t>(i)] * row;
      }
      return out;
    };
    return PolySystem({"s", "u", "v"}, {form(pv, pv), form(pv, qv), form(qv, qv)});
  }
};

/// The X_13 chart system along the flag path G(t) = t G_start + (1 - t) gamma G_target.
class FlagPathHomotopy {
 public:
  FlagPathHomotopy(CMatrix quadric, const CMatrix& start, const CMatrix& target, Complex gamma, CMatrix rotation)
      : a_(std::move(quadric)), start_(start), end_(gamma * target), rotation_(std::move(rotation)) {}

  int num_vars() const { return 3; }

  CMatrix frame_at(double t) const { return t * start_ + (1.0 - t) * end_; }

  HomotopyValue evaluate(const CVector& x, double t) const {
    const CMatrix g = frame_at(t);
    const CMatrix d = start_ - end_;
    const CMatrix r = g.leftCols(4) * rotation_;
    const CMatrix rd = d.leftCols(4) * rotation_;
    const CVector p = g.col(0) + x(0) * g.col(1);
    const CVector q = r.col(2) + x(1) * r.col(0) + x(2) * r.col(1);
    const CVector pd = d.col(0) + x(0) * d.col(1);
    const CVector qd = rd.col(2) + x(1) * rd.col(0) + x(2) * rd.col(1);
    const CVector ap = a_ * p, aq = a_ * q;
    using detail::bilinear;

    HomotopyValue v;
    v.value.resize(3);
    v.value << bilinear(p, ap), bilinear(p, aq), bilinear(q, aq);
    v.dx = CMatrix::Zero(3, 3);
    v.dx(0, 0) = 2.0 * bilinear(g.col(1), ap);
    v.dx(1, 0) = bilinear(g.col(1), aq);
    v.dx(1, 1) = bilinear(r.col(0), ap);
    v.dx(1, 2) = bilinear(r.col(1), ap);
    v.dx(2, 1) = 2.0 * bilinear(r.col(0), aq);
    v.dx(2, 2) = 2.0 * bilinear(r.col(1), aq);
    v.dt.resize(3);
    v.dt << 2.0 * bilinear(pd, ap), bilinear(pd, aq) + bilinear(p, a_ * qd), 2.0 * bilinear(qd, aq);
    return v;
  }

 private:
  CMatrix a_;
  CMatrix start_;
  CMatrix end_;
  CMatrix rotation_;
};

/// (V_Q, (W_13, W_04), (X_13 M, X_04 M)) for the variety V_Q of lines on Q.
struct SchubertWitnessSet {
  Quadric quadric;
  Flag flag;
  std::vector<Line> w13;
  std::vector<Line> w04;
  std::vector<Certificate> certificates;  // per W_13 line, in the chart system
  std::vector<bool> singular;             // per W_13 line: endpoint flagged singular
  PathSummary summary;
};

struct GrassmannOptions {
  SolveOptions solve;
  double dedup_tol = 1e-6;
  double match_tol = 1e-6;
  double residual_tol = 1e-8;
  int chart_retries = 3;
};

/// Roots s of (m0 + s m1)^T A (m0 + s m1) = 0: the points of M_1 on Q.
inline std::vector<Complex> quadric_points_on_m1(const Quadric& quadric, const Flag& flag) {
  const CMatrix& a = quadric.normalized();
  const CVector m0 = flag.point(0) / flag.point(0).norm();
  const CVector m1 = flag.point(1) / flag.point(1).norm();
  const Complex c2 = detail::bilinear(m1, a, m1), c1 = 2.0 * detail::bilinear(m0, a, m1), c0 = detail::bilinear(m0, a, m0);
  if (std::abs(c2) < 1e-8) return {};  // one root escaped to p = m1
  const Complex disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  if (std::abs(disc) < 1e-8) return {};
  const double scale = flag.point(0).norm() / flag.point(1).norm();
  return {scale * (-c1 + disc) / (2.0 * c2), scale * (-c1 - disc) / (2.0 * c2)};
}

namespace detail {

inline void check_smooth(const Quadric& q) {
  if (!q.smooth()) throw Error(error_kind::kSingularQuadric, "quadric is singular");
}

inline void check_generic_flag(const Quadric& q, const Flag& flag) {
  const CVector m0 = flag.point(0) / flag.point(0).norm();
  if (std::abs(q.value(m0)) < 1e-8) throw Error(error_kind::kDegenerateFlag, "M_0 lies on the quadric");
  if (quadric_points_on_m1(q, flag).size() != 2)
    throw Error(error_kind::kDegenerateFlag, "M_1 does not meet the quadric in two chart points");
}

inline std::vector<std::size_t> dedup_lines(const std::vector<Line>& lines, const std::vector<double>& residuals,
                                            double tol) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto it = std::find_if(keep.begin(), keep.end(),
                           [&](std::size_t k) { return pluecker_distance(lines[k], lines[i]) < tol; });
    if (it == keep.end())
      keep.push_back(i);
    else if (residuals[i] < residuals[*it])
      *it = i;
  }
  return keep;
}

inline void sort_schubert(SchubertWitnessSet& ws) {
  std::vector<std::size_t> order(ws.w13.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pluecker_less(ws.w13[a], ws.w13[b]); });
  SchubertWitnessSet sorted = ws;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.w13[i] = ws.w13[order[i]];
    sorted.certificates[i] = ws.certificates[order[i]];
    sorted.singular[i] = ws.singular[order[i]];
  }
  ws = std::move(sorted);
}

inline double max_residual(const Quadric& q, const Line& l) {
  const auto r = q.line_residuals(l);
  return std::max({r[0], r[1], r[2]});
}

}  // namespace detail

/// W_13 = V_Q cap X_13(M) by solving the 3-variable chart system (8 paths);
/// W_04 is empty because M_0 is off Q.
inline SchubertWitnessSet lines_on_quadric_witness(const Quadric& quadric, const Flag& flag, std::uint64_t seed,
                                                   const GrassmannOptions& opts = {}) {
  detail::check_smooth(quadric);
  detail::check_generic_flag(quadric, flag);
  const Rng rng(seed);

  SchubertWitnessSet best{quadric, flag, {}, {}, {}, {}, {}};
  for (int attempt = 0; attempt <= opts.chart_retries; ++attempt) {
    Rng chart_rng = rng.split("chart", static_cast<std::uint64_t>(attempt));
    const QuadricChart chart(flag.frame(), chart_rng.unitary(4));
    const PolySystem sys = chart.system(quadric.normalized());
    const SolveResult solved = solve_total_degree(sys, rng.split("solve", static_cast<std::uint64_t>(attempt)).seed(), opts.solve);

    std::vector<Line> lines;
    std::vector<double> residuals;
    std::vector<Certificate> certs;
    for (const auto& s : solved.solutions) {
      Line l;
      try {
        l = chart.line(s.point);
      } catch (const Error&) {
        continue;
      }
      if (!quadric.contains(l, opts.residual_tol) || !line_in_schubert(l, {1, 3}, flag)) continue;
      lines.push_back(l);
      residuals.push_back(detail::max_residual(quadric, l));
      certs.push_back(s.certificate);
    }
    SchubertWitnessSet ws{quadric, flag, {}, {}, {}, {}, solved.summary};
    for (std::size_t k : detail::dedup_lines(lines, residuals, opts.dedup_tol)) {
      ws.w13.push_back(lines[k]);
      ws.certificates.push_back(certs[k]);
      ws.singular.push_back(false);
    }
    detail::sort_schubert(ws);
    const bool complete = ws.w13.size() == 4;
    if (complete || ws.w13.size() > best.w13.size() || attempt == 0) best = std::move(ws);
    if (complete) break;
  }
  return best;
}

namespace detail {

// Newton at fixed t on a homotopy.
template <HomotopyMap H>
CVector refine_at(const H& h, CVector x, double t, int iters = 4) {
  for (int i = 0; i < iters; ++i) {
    const HomotopyValue v = h.evaluate(x, t);
    CVector dx;
    try {
      dx = linalg::solve(v.dx, -v.value);
    } catch (const Error&) {
      break;
    }
    x += dx;
    if (dx.norm() <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm())) break;
  }
  return x;
}

}  // namespace detail

/// Moves W_13 to the flag `target` along the straight-line flag path with a random gamma.
inline SchubertWitnessSet schubert_witness_move(const SchubertWitnessSet& ws, const Flag& target, std::uint64_t seed,
                                                const GrassmannOptions& opts = {}) {
  detail::check_generic_flag(ws.quadric, target);
  const Rng rng(seed);
  Rng chart_rng = rng.split("chart");
  Rng gamma_rng = rng.split("gamma");
  const CMatrix rotation = chart_rng.unitary(4);
  const FlagPathHomotopy h(ws.quadric.normalized(), ws.flag.frame(), target.frame(), gamma_rng.unit_gamma(), rotation);
  const QuadricChart start_chart(ws.flag.frame(), rotation);
  const QuadricChart end_chart(h.frame_at(0.0), rotation);
  const PolySystem end_system = QuadricChart(target.frame(), rotation).system(ws.quadric.normalized());

  SchubertWitnessSet out{ws.quadric, target, {}, {}, {}, {}, {}};
  std::vector<Line> lines;
  std::vector<double> residuals;
  std::vector<bool> singular;
  for (const auto& l : ws.w13) {
    const CVector x0 = detail::refine_at(h, start_chart.coordinates(l), 1.0);
    const PathResult r = track_path(h, x0, opts.solve.tracker);
    out.summary.record(r.status);
    if (r.status == PathStatus::StepLimit)
      throw Error(error_kind::kTrackingFailure, "a Schubert witness path exceeded the step limit");
    if (r.status == PathStatus::Diverged) continue;
    Line moved;
    try {
      moved = end_chart.line(r.endpoint);
    } catch (const Error&) {
      continue;
    }
    lines.push_back(moved);
    residuals.push_back(detail::max_residual(ws.quadric, moved));
    singular.push_back(r.status == PathStatus::SingularEndpoint);
  }
  for (std::size_t k : detail::dedup_lines(lines, residuals, opts.dedup_tol)) {
    Certificate c{std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
    try {
      // gamma G and G give the same chart coordinates
      c = alpha_number(end_system, QuadricChart(target.frame(), rotation).coordinates(lines[k]));
    } catch (const Error&) {
    }
    out.w13.push_back(lines[k]);
    out.certificates.push_back(c);
    out.singular.push_back(singular[k]);
  }
  detail::sort_schubert(out);
  return out;
}

/// A line on Q: the first line, in canonical Pluecker order, after a move to a random flag.
inline Line schubert_sample(const SchubertWitnessSet& ws, std::uint64_t seed, const GrassmannOptions& opts = {}) {
  if (ws.w13.empty()) throw Error(error_kind::kInvalidArgument, "cannot sample from an empty witness set");
  const Rng rng(seed);
  Rng flag_rng = rng.split("sample-flag");
  const SchubertWitnessSet moved = schubert_witness_move(ws, Flag::random(flag_rng), rng.split("move").seed(), opts);
  if (moved.w13.empty()) throw Error(error_kind::kTrackingFailure, "every witness path was lost while sampling");
  return moved.w13.front();
}

/// A random flag M with the line in X_13(M): M_3 contains it and M_1 passes through one of its points.
inline Flag adapted_flag(const Line& l, Rng& rng) {
  const CVector a = rng.complex_normal() * l.point(0) + rng.complex_normal() * l.point(1);
  const CVector b = rng.complex_normal() * l.point(0) + rng.complex_normal() * l.point(1);
  CMatrix m3(5, 4);
  m3 << a, b, rng.complex_vector(5), rng.complex_vector(5);
  auto in_m3 = [&] { return CVector(m3 * rng.complex_vector(4)); };
  const CVector r = in_m3();
  CMatrix frame(5, 5);
  frame.col(0) = a + rng.complex_normal() * r;
  frame.col(1) = a + rng.complex_normal() * r;
  frame.col(2) = in_m3();
  frame.col(3) = in_m3();
  frame.col(4) = rng.complex_vector(5);
  return Flag(frame);
}

/// Verdict on whether a line lies on Q, by moving W_13 to a flag adapted to the line.
inline MembershipResult schubert_membership(const SchubertWitnessSet& ws, const Line& candidate, std::uint64_t seed,
                                            const GrassmannOptions& opts = {}) {
  const Rng rng(seed);
  Rng flag_rng = rng.split("adapted-flag");
  const Flag flag = adapted_flag(candidate, flag_rng);
  if (!line_in_schubert(candidate, {1, 3}, flag))
    throw Error(error_kind::kDegenerateFlag, "adapted flag does not place the line in X_13");
  const SchubertWitnessSet moved = schubert_witness_move(ws, flag, rng.split("move").seed(), opts);

  MembershipResult r;
  bool nearest_singular = false;
  for (std::size_t i = 0; i < moved.w13.size(); ++i) {
    const double d = pluecker_distance(moved.w13[i], candidate);
    if (d < r.distance) {
      r.distance = d;
      nearest_singular = moved.singular[i];
    }
  }
  if (r.distance < opts.match_tol)
    r.verdict = nearest_singular ? Membership::Inconclusive : Membership::Member;
  else if (r.distance < 10.0 * opts.match_tol)
    r.verdict = Membership::Inconclusive;
  else
    r.verdict = Membership::NonMember;
  return r;
}

/// [V] = deg(W_13)[X_13] + deg(W_04)[X_04].
inline CycleClass class_of_variety(const SchubertWitnessSet& ws) {
  const CycleBasis basis = builtin_basis(Space::g14());
  return class_from_degrees(basis.matrix(3), {3, {static_cast<long long>(ws.w13.size()), static_cast<long long>(ws.w04.size())}});
}

// ---------------------------------------------------------------------------
// Lines in the affine chart rowspan [[1,0,a,b,c],[0,1,d,e,f]] T of G(1, P^4)

/// Rows of the chart line as vectors of linear polynomials in (a, b, c, d, e, f).
struct LineChart {
  CMatrix transform;  // unitary 5x5

  std::array<std::vector<Polynomial>, 2> rows() const {
    std::array<std::vector<Polynomial>, 2> out;
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 5; ++k) {
        CVector c = CVector::Zero(7);
        c(0) = transform(r, k);
        for (int m = 0; m < 3; ++m) c(1 + 3 * r + m) = transform(2 + m, k);
        out[static_cast<std::size_t>(r)].push_back(Polynomial::affine(c));
      }
    return out;
  }

  Line line(const CVector& x) const {
    CMatrix c = CMatrix::Zero(2, 5);
    c(0, 0) = 1.0;
    c(1, 1) = 1.0;
    c(0, 2) = x(0), c(0, 3) = x(1), c(0, 4) = x(2);
    c(1, 2) = x(3), c(1, 3) = x(4), c(1, 4) = x(5);
    return Line(c * transform);
  }

  static std::vector<std::string> names() { return {"a", "b", "c", "d", "e", "f"}; }
};

namespace detail {

inline Polynomial quadratic_form(const std::vector<Polynomial>& x, const CMatrix& a, const std::vector<Polynomial>& y) {
  Polynomial out(x.front().num_vars());
  for (int i = 0; i < 5; ++i) {
    Polynomial row(out.num_vars());
    for (int j = 0; j < 5; ++j) row = row + a(i, j) * y[static_cast<std::size_t>(j)];
    out = out + x[static_cast<std::size_t>(i)] * row;
  }
  return out;
}

inline Polynomial linear_form(const CVector& w, const std::vector<Polynomial>& x) {
  Polynomial out(x.front().num_vars());
  for (int i = 0; i < 5; ++i) out = out + w(i) * x[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace detail

struct QuarticLinesResult {
  std::vector<Line> lines;
  PathSummary summary;
  bool genericity_warning = false;
  std::string diagnostics;
};

/// The lines on the quartic surface Q1 cap Q2: 6 quadrics in the chart, 64 paths.
inline QuarticLinesResult lines_on_two_quadrics(const Quadric& q1, const Quadric& q2, std::uint64_t seed,
                                                const GrassmannOptions& opts = {}) {
  detail::check_smooth(q1);
  detail::check_smooth(q2);
  const Rng rng(seed);
  QuarticLinesResult best;
  for (int attempt = 0; attempt <= opts.chart_retries; ++attempt) {
    Rng chart_rng = rng.split("chart", static_cast<std::uint64_t>(attempt));
    const LineChart chart{chart_rng.unitary(5)};
    const auto rows = chart.rows();
    std::vector<Polynomial> eqs;
    for (const Quadric* q : {&q1, &q2}) {
      eqs.push_back(detail::quadratic_form(rows[0], q->normalized(), rows[0]));
      eqs.push_back(detail::quadratic_form(rows[0], q->normalized(), rows[1]));
      eqs.push_back(detail::quadratic_form(rows[1], q->normalized(), rows[1]));
    }
    const PolySystem sys(LineChart::names(), std::move(eqs));
    const SolveResult solved = solve_total_degree(sys, rng.split("solve", static_cast<std::uint64_t>(attempt)).seed(), opts.solve);

    std::vector<Line> lines;
    std::vector<double> residuals;
    for (const auto& s : solved.solutions) {
      Line l;
      try {
        l = chart.line(s.point);
      } catch (const Error&) {
        continue;
      }
      if (!q1.contains(l, opts.residual_tol) || !q2.contains(l, opts.residual_tol)) continue;
      lines.push_back(l);
      residuals.push_back(std::max(detail::max_residual(q1, l), detail::max_residual(q2, l)));
    }
    QuarticLinesResult r;
    r.summary = solved.summary;
    for (std::size_t k : detail::dedup_lines(lines, residuals, opts.dedup_tol)) r.lines.push_back(lines[k]);
    std::sort(r.lines.begin(), r.lines.end(), pluecker_less);
    r.genericity_warning = r.lines.size() != 16;
    if (r.genericity_warning)
      r.diagnostics = "found " + std::to_string(r.lines.size()) + " lines from " + std::to_string(solved.summary.paths) +
                      " paths (" + std::to_string(solved.summary.success) + " success, " +
                      std::to_string(solved.summary.diverged) + " diverged, " + std::to_string(solved.summary.singular) +
                      " singular, " + std::to_string(solved.summary.step_limit) + " step-limit)";
    const bool better = attempt == 0 || (!r.genericity_warning) ||
                        std::abs(static_cast<int>(r.lines.size()) - 16) < std::abs(static_cast<int>(best.lines.size()) - 16);
    if (better) best = std::move(r);
    if (!best.genericity_warning) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Intersections of two 3-dimensional Schubert varieties

/// Equations in the line chart for l in X_idx(flag); only the 3-dimensional classes 13 and 04.
inline std::vector<Polynomial> schubert_conditions(SchubertIndex idx, const Flag& flag, const LineChart& chart) {
  const auto rows = chart.rows();
  std::vector<Polynomial> out;
  if (idx == SchubertIndex{1, 3}) {
    // l in M_3: both rows annihilated by the normal of M_3
    const CVector normal = detail::kernel_vector(flag.subspace(3).transpose());
    out.push_back(detail::linear_form(normal, rows[0]));
    out.push_back(detail::linear_form(normal, rows[1]));
    // l meets M_1 inside M_3: det[row0; row1; m0; m1; m4] = 0, expanded along the first two rows
    CMatrix rest(3, 5);
    rest << flag.point(0).transpose(), flag.point(1).transpose(), flag.point(4).transpose();
    Polynomial det(6);
    for (const auto& [i, j] : pluecker_pairs()) {
      std::vector<int> cols;
      for (int k = 0; k < 5; ++k)
        if (k != i && k != j) cols.push_back(k);
      CMatrix minor(3, 3);
      for (int c = 0; c < 3; ++c) minor.col(c) = rest.col(cols[static_cast<std::size_t>(c)]);
      const double sign = ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
      const Polynomial pij = rows[0][static_cast<std::size_t>(i)] * rows[1][static_cast<std::size_t>(j)] -
                             rows[0][static_cast<std::size_t>(j)] * rows[1][static_cast<std::size_t>(i)];
      det = det + (sign * minor.determinant()) * pij;
    }
    out.push_back(det);
  } else if (idx == SchubertIndex{0, 4}) {
    // m0 = w0 row0 + w1 row1 with w = coordinates of m0 in the chart frame
    const CVector w = chart.transform.transpose().fullPivLu().solve(flag.point(0));
    for (int k = 2; k < 5; ++k) {
      CVector c = CVector::Zero(7);
      c(0) = w(k);
      c(1 + (k - 2)) = -w(0);
      c(4 + (k - 2)) = -w(1);
      out.push_back(Polynomial::affine(c));
    }
  } else {
    throw Error(error_kind::kUnsupportedProduct, "only the 3-dimensional Schubert classes 13 and 04 are supported");
  }
  return out;
}

/// The lines in X_alpha(g) cap X_beta(h), solved numerically in a random chart.
inline std::vector<Line> schubert_intersection(SchubertIndex alpha, const Flag& g, SchubertIndex beta, const Flag& h,
                                               std::uint64_t seed, const GrassmannOptions& opts = {}) {
  const Rng rng(seed);
  Rng chart_rng = rng.split("chart");
  const LineChart chart{chart_rng.unitary(5)};
  std::vector<Polynomial> eqs = schubert_conditions(alpha, g, chart);
  for (auto& p : schubert_conditions(beta, h, chart)) eqs.push_back(std::move(p));
  const SolveResult solved = solve_total_degree(PolySystem(LineChart::names(), std::move(eqs)), rng.split("solve").seed(), opts.solve);
  std::vector<Line> lines;
  std::vector<double> residuals;
  for (const auto& s : solved.solutions) {
    Line l;
    try {
      l = chart.line(s.point);
    } catch (const Error&) {
      continue;
    }
    if (!line_in_schubert(l, alpha, g, 1e-6) || !line_in_schubert(l, beta, h, 1e-6)) continue;
    lines.push_back(l);
    residuals.push_back(0.0);
  }
  std::vector<Line> out;
  for (std::size_t k : detail::dedup_lines(lines, residuals, opts.dedup_tol)) out.push_back(lines[k]);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const Line& l) {
  return {{"span", json_io::matrix_to_json(l.span())}, {"pluecker", json_io::vector_to_json(l.pluecker())}};
}

inline Line line_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("span")) throw Error(error_kind::kParse, "line needs a \"span\" matrix");
  return Line(json_io::matrix_from_json(j.at("span")));
}

inline nlohmann::json to_json(const Quadric& q) { return {{"matrix", json_io::matrix_to_json(q.matrix())}}; }

inline Quadric quadric_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("matrix")) throw Error(error_kind::kParse, "quadric needs a \"matrix\"");
  return Quadric(json_io::matrix_from_json(j.at("matrix")));
}

inline nlohmann::json to_json(const Flag& f) { return {{"frame", json_io::matrix_to_json(f.frame())}}; }

inline Flag flag_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("frame")) throw Error(error_kind::kParse, "flag needs a \"frame\"");
  return Flag(json_io::matrix_from_json(j.at("frame")));
}

inline nlohmann::json to_json(const SchubertWitnessSet& ws) {
  using nlohmann::json;
  json w13 = json::array(), w04 = json::array(), certs = json::array();
  for (std::size_t i = 0; i < ws.w13.size(); ++i) {
    w13.push_back(to_json(ws.w13[i]));
    certs.push_back({{"alpha", ws.certificates[i].alpha},
                     {"certified", ws.certificates[i].certified},
                     {"singular", static_cast<bool>(ws.singular[i])}});
  }
  for (const auto& l : ws.w04) w04.push_back(to_json(l));
  const CycleBasis basis = builtin_basis(Space::g14());
  return {{"quadric", to_json(ws.quadric)},
          {"flag", to_json(ws.flag)},
          {"W13", std::move(w13)},
          {"W04", std::move(w04)},
          {"certificates", std::move(certs)},
          {"class", to_json(class_of_variety(ws), basis.basis)},
          {"summary",
           {{"paths", ws.summary.paths},
            {"success", ws.summary.success},
            {"diverged", ws.summary.diverged},
            {"singular", ws.summary.singular},
            {"step_limit", ws.summary.step_limit}}}};
}

inline SchubertWitnessSet schubert_witness_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("quadric") || !j.contains("flag") || !j.contains("W13"))
    throw Error(error_kind::kParse, "Schubert witness set needs \"quadric\", \"flag\" and \"W13\"");
  SchubertWitnessSet ws{quadric_from_json(j.at("quadric")), flag_from_json(j.at("flag")), {}, {}, {}, {}, {}};
  for (const auto& l : j.at("W13")) {
    ws.w13.push_back(line_from_json(l));
    ws.certificates.push_back({});
    ws.singular.push_back(false);
  }
  if (j.contains("W04"))
    for (const auto& l : j.at("W04")) ws.w04.push_back(line_from_json(l));
  return ws;
}

}  // namespace witnesskit
