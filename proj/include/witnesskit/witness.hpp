#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "witnesskit/error.hpp"
#include "witnesskit/polysys.hpp"
#include "witnesskit/random.hpp"
#include "witnesskit/solver.hpp"

namespace witnesskit {

/// k affine forms on C^n; row i is a_{i,0} + sum_j a_{i,j} x_j.
class LinearSlice {
 public:
  LinearSlice() = default;
  explicit LinearSlice(CMatrix forms) : forms_(std::move(forms)) {
    if (forms_.cols() < 1) throw Error(error_kind::kInvalidArgument, "slice needs a constant column");
    if (dim() > 0) {
      const Eigen::VectorXd s = linalg::singular_values(linear_part());
      if (static_cast<int>(s.size()) < dim() || !(s(dim() - 1) > 1e-10 * s(0)))
        throw Error(error_kind::kInvalidArgument, "slice linear part is rank deficient");
    }
  }

  static LinearSlice random(Rng& rng, int k, int n) { return LinearSlice(rng.complex_matrix(k, n + 1)); }

  /// Random forms vanishing at p.
  static LinearSlice random_through(Rng& rng, const CVector& p, int k) {
    CMatrix forms = rng.complex_matrix(k, p.size() + 1);
    forms.col(0) = -forms.rightCols(p.size()) * p;
    return LinearSlice(std::move(forms));
  }

  int dim() const { return static_cast<int>(forms_.rows()); }
  int num_vars() const { return static_cast<int>(forms_.cols()) - 1; }
  const CMatrix& forms() const { return forms_; }
  CMatrix linear_part() const { return forms_.rightCols(num_vars()); }

  CVector evaluate(const CVector& x) const { return forms_.col(0) + linear_part() * x; }

  std::vector<Polynomial> polynomials() const {
    std::vector<Polynomial> out;
    for (int i = 0; i < dim(); ++i) out.push_back(Polynomial::affine(forms_.row(i).transpose()));
    return out;
  }

 private:
  CMatrix forms_;
};

/// (F, slice, W): W = V cap slice^{-1}(0) for a k-dimensional union V of
/// components of F^{-1}(0).
struct WitnessSet {
  PolySystem system;
  int dim = 0;
  LinearSlice slice;
  std::vector<CVector> points;
  std::vector<Certificate> certificates;
  std::vector<int> multiplicities;
  PathSummary summary;

  std::size_t degree() const { return points.size(); }
};

struct WitnessOptions {
  SolveOptions solve;
  double filter_tol = 1e-6;
  double match_tol = 1e-6;
};

/// [R F; slice] with R a (n - k) x N mixing matrix.
inline PolySystem square_up(const PolySystem& f, const CMatrix& mix, const LinearSlice& slice) {
  std::vector<Polynomial> polys;
  for (Eigen::Index i = 0; i < mix.rows(); ++i) {
    Polynomial row(f.num_vars());
    for (int j = 0; j < f.num_eqs(); ++j) row = row + mix(i, j) * f[static_cast<std::size_t>(j)];
    polys.push_back(std::move(row));
  }
  for (auto& p : slice.polynomials()) polys.push_back(std::move(p));
  return PolySystem(f.var_names(), std::move(polys));
}

namespace detail {

inline void check_witness_dims(const PolySystem& f, int k) {
  const int n = f.num_vars();
  if (k < 0 || k >= n) throw Error(error_kind::kInvalidArgument, "dimension must satisfy 0 <= k < n");
  if (f.num_eqs() < n - k)
    throw Error(error_kind::kDimensionMismatch, "fewer equations than the codimension of a k-dimensional component");
}

inline void sort_witness(WitnessSet& ws) {
  std::vector<std::size_t> order(ws.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(ws.points[a], ws.points[b]); });
  WitnessSet sorted = ws;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.points[i] = ws.points[order[i]];
    sorted.certificates[i] = ws.certificates[order[i]];
    sorted.multiplicities[i] = ws.multiplicities[order[i]];
  }
  ws = std::move(sorted);
}

// Witness points on a given slice; empty when V misses the slice.
inline WitnessSet witness_on_slice(const PolySystem& f, int k, LinearSlice slice, Rng rng, const WitnessOptions& opts) {
  const CMatrix mix = rng.split("squaring").complex_matrix(f.num_vars() - k, f.num_eqs());
  const PolySystem square = square_up(f, mix, slice);
  const SolveResult solved = solve_total_degree(square, rng.split("solve").seed(), opts.solve);

  WitnessSet ws{f, k, std::move(slice), {}, {}, {}, solved.summary};
  for (const auto& s : solved.solutions) {
    if (!(f.evaluate(s.point).norm() < opts.filter_tol)) continue;  // extraneous root of the squared-up system
    ws.points.push_back(s.point);
    ws.certificates.push_back(s.certificate);
    ws.multiplicities.push_back(s.multiplicity);
  }
  return ws;
}

}  // namespace detail

/// Random slice of codimension k, squared-up system solved by total degree.
inline WitnessSet witness_compute(const PolySystem& f, int k, std::uint64_t seed, const WitnessOptions& opts = {}) {
  detail::check_witness_dims(f, k);
  const Rng rng(seed);
  Rng slice_rng = rng.split("slice");
  LinearSlice slice = LinearSlice::random(slice_rng, k, f.num_vars());
  WitnessSet ws = detail::witness_on_slice(f, k, std::move(slice), rng, opts);
  if (ws.points.empty())
    throw Error(error_kind::kDimensionMismatch,
                "no point of F^{-1}(0) met the slice; the zero set has no component of dimension " + std::to_string(k));
  return ws;
}

/// [R F(x); (1 - t) target(x) + t gamma start(x)]
class SliceHomotopy {
 public:
  SliceHomotopy(PolySystem f, CMatrix mix, LinearSlice start, LinearSlice target, Complex gamma)
      : f_(std::move(f)), mix_(std::move(mix)), start_(std::move(start)), target_(std::move(target)), gamma_(gamma) {}

  int num_vars() const { return f_.num_vars(); }

  HomotopyValue evaluate(const CVector& x, double t) const {
    const auto r = mix_.rows();
    const auto k = start_.dim();
    HomotopyValue v;
    v.value.resize(r + k);
    v.dx.resize(r + k, num_vars());
    v.dt = CVector::Zero(r + k);
    v.value.head(r) = mix_ * f_.evaluate(x);
    v.dx.topRows(r) = mix_ * f_.jacobian(x);
    if (k > 0) {
      const CVector s = gamma_ * start_.evaluate(x);
      const CVector g = target_.evaluate(x);
      v.value.tail(k) = (1.0 - t) * g + t * s;
      v.dx.bottomRows(k) = (1.0 - t) * target_.linear_part() + (t * gamma_) * start_.linear_part();
      v.dt.tail(k) = s - g;
    }
    return v;
  }

 private:
  PolySystem f_;
  CMatrix mix_;
  LinearSlice start_;
  LinearSlice target_;
  Complex gamma_;
};

/// Continues the witness points to `target` along the convex combination of slices.
inline WitnessSet witness_move(const WitnessSet& ws, const LinearSlice& target, std::uint64_t seed,
                               const WitnessOptions& opts = {}) {
  if (target.dim() != ws.dim || target.num_vars() != ws.system.num_vars())
    throw Error(error_kind::kDimensionMismatch, "target slice has the wrong shape");
  const Rng rng(seed);
  Rng mix_rng = rng.split("squaring");
  Rng gamma_rng = rng.split("gamma");
  const CMatrix mix = mix_rng.complex_matrix(ws.system.num_vars() - ws.dim, ws.system.num_eqs());
  const SliceHomotopy h(ws.system, mix, ws.slice, target, gamma_rng.unit_gamma());
  const PolySystem square = square_up(ws.system, mix, target);

  WitnessSet out{ws.system, ws.dim, target, {}, {}, {}, {}};
  std::vector<Solution> ends;
  for (const auto& p : ws.points) {
    const PathResult r = track_path(h, p, opts.solve.tracker);
    out.summary.record(r.status);
    if (r.status == PathStatus::StepLimit)
      throw Error(error_kind::kTrackingFailure, "a witness path exceeded the step limit");
    if (r.status == PathStatus::Diverged) continue;
    Solution s{r.endpoint, {}, 1, r.residual};
    if (r.status == PathStatus::Success) {
      try {
        s.point = newton_refine(square, r.endpoint, opts.solve.refine_tol, opts.solve.refine_iters).point;
      } catch (const Error&) {
        s.point = r.endpoint;
      }
      s.residual = square.evaluate(s.point).norm();
    }
    ends.push_back(std::move(s));
  }
  for (auto& s : deduplicate(std::move(ends), opts.solve.dedup_tol)) {
    Certificate c{std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
    try {
      c = alpha_number(square, s.point);
    } catch (const Error&) {
    }
    out.points.push_back(s.point);
    out.certificates.push_back(c);
    out.multiplicities.push_back(s.multiplicity);
  }
  detail::sort_witness(out);
  return out;
}

/// A point of V: the first witness point after a move to a random slice.
inline CVector witness_sample(const WitnessSet& ws, std::uint64_t seed, const WitnessOptions& opts = {}) {
  if (ws.points.empty()) throw Error(error_kind::kInvalidArgument, "cannot sample from an empty witness set");
  const Rng rng(seed);
  Rng slice_rng = rng.split("sample-slice");
  const LinearSlice target = LinearSlice::random(slice_rng, ws.dim, ws.system.num_vars());
  const WitnessSet moved = witness_move(ws, target, rng.split("move").seed(), opts);
  if (moved.points.empty()) throw Error(error_kind::kTrackingFailure, "every witness path diverged while sampling");
  return moved.points.front();
}

enum class Membership { Member, NonMember, Inconclusive };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "member";
    case Membership::NonMember: return "non-member";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct MembershipResult {
  Membership verdict = Membership::NonMember;
  double distance = std::numeric_limits<double>::infinity();
};

/// p lies on V iff it appears among the witness points on a general slice through p.
inline MembershipResult witness_membership(const WitnessSet& ws, const CVector& p, std::uint64_t seed,
                                           const WitnessOptions& opts = {}) {
  if (p.size() != ws.system.num_vars()) throw Error(error_kind::kDimensionMismatch, "point has the wrong length");
  const Rng rng(seed);
  Rng slice_rng = rng.split("member-slice");
  const LinearSlice through = LinearSlice::random_through(slice_rng, p, ws.dim);
  const WitnessSet moved = witness_move(ws, through, rng.split("move").seed(), opts);

  MembershipResult r;
  for (const auto& q : moved.points) r.distance = std::min(r.distance, normalized_distance(q, p));
  if (r.distance < opts.match_tol)
    r.verdict = Membership::Member;
  else if (r.distance < 10.0 * opts.match_tol)
    r.verdict = Membership::Inconclusive;
  else
    r.verdict = Membership::NonMember;
  return r;
}

/// Witness sets on product slices of C^m x C^n: for each a + b = k, a forms in
/// the first block of variables and b in the second. Counts are bidegrees.
inline std::map<std::pair<int, int>, WitnessSet> product_witness(const PolySystem& f, int m, int n, int k,
                                                                 std::uint64_t seed, const WitnessOptions& opts = {}) {
  if (m < 1 || n < 1 || f.num_vars() != m + n)
    throw Error(error_kind::kDimensionMismatch, "variables must split as m + n");
  detail::check_witness_dims(f, k);
  const Rng rng(seed);
  std::map<std::pair<int, int>, WitnessSet> out;
  for (int a = std::max(0, k - n); a <= std::min(m, k); ++a) {
    const int b = k - a;
    Rng slice_rng = rng.split("product-slice", static_cast<std::uint64_t>(a));
    CMatrix forms = CMatrix::Zero(k, m + n + 1);
    for (int i = 0; i < k; ++i) {
      forms(i, 0) = slice_rng.complex_normal();
      const int first = i < a ? 1 : 1 + m;
      const int count = i < a ? m : n;
      for (int j = 0; j < count; ++j) forms(i, first + j) = slice_rng.complex_normal();
    }
    out.emplace(std::pair{a, b}, detail::witness_on_slice(f, k, LinearSlice(std::move(forms)),
                                                          rng.split("product-solve", static_cast<std::uint64_t>(a)), opts));
  }
  return out;
}

inline nlohmann::json to_json(const WitnessSet& ws) {
  using nlohmann::json;
  json points = json::array();
  for (const auto& p : ws.points) points.push_back(json_io::vector_to_json(p));
  json cert = json::array();
  for (std::size_t i = 0; i < ws.points.size(); ++i)
    cert.push_back({{"alpha", ws.certificates[i].alpha},
                    {"certified", ws.certificates[i].certified},
                    {"multiplicity", ws.multiplicities[i]}});
  return {{"system", to_json(ws.system)},
          {"dim", ws.dim},
          {"slice", json_io::matrix_to_json(ws.slice.forms())},
          {"points", std::move(points)},
          {"certificates", std::move(cert)},
          {"summary",
           {{"paths", ws.summary.paths},
            {"success", ws.summary.success},
            {"diverged", ws.summary.diverged},
            {"singular", ws.summary.singular},
            {"step_limit", ws.summary.step_limit}}}};
}

inline WitnessSet witness_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("system") || !j.contains("dim") || !j.contains("slice") || !j.contains("points"))
    throw Error(error_kind::kParse, "witness set needs \"system\", \"dim\", \"slice\" and \"points\"");
  WitnessSet ws;
  ws.system = system_from_json(j.at("system"));
  if (!j.at("dim").is_number_integer()) throw Error(error_kind::kParse, "\"dim\" must be an integer");
  ws.dim = j.at("dim").get<int>();
  detail::check_witness_dims(ws.system, ws.dim);
  if (ws.dim == 0)
    ws.slice = LinearSlice(CMatrix::Zero(0, ws.system.num_vars() + 1));
  else
    ws.slice = LinearSlice(json_io::matrix_from_json(j.at("slice")));
  if (ws.slice.dim() != ws.dim || ws.slice.num_vars() != ws.system.num_vars())
    throw Error(error_kind::kParse, "slice shape does not match the system and dimension");
  for (const auto& pj : j.at("points")) {
    CVector p = json_io::vector_from_json(pj);
    if (p.size() != ws.system.num_vars()) throw Error(error_kind::kParse, "witness point has the wrong length");
    ws.points.push_back(std::move(p));
    ws.certificates.push_back({});
    ws.multiplicities.push_back(1);
  }
  return ws;
}

}  // namespace witnesskit
