#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "witnesskit/error.hpp"
#include "witnesskit/polysys.hpp"
#include "witnesskit/random.hpp"

namespace witnesskit {

/// Points with alpha below this value converge quadratically under Newton's method.
inline const double kAlphaThreshold = (13.0 - 3.0 * std::sqrt(17.0)) / 4.0;

namespace linalg {

inline Eigen::VectorXd singular_values(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

/// sigma_max / sigma_min; infinity for rank-deficient input.
inline double condition_number(const CMatrix& a) {
  if (a.size() == 0) return 1.0;
  const Eigen::VectorXd s = singular_values(a);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

inline CVector solve(const CMatrix& a, const CVector& b) {
  Eigen::FullPivLU<CMatrix> lu(a);
  if (!lu.isInvertible()) throw Error(error_kind::kSingularJacobian, "linear system is numerically singular");
  CVector x = lu.solve(b);
  if (!x.allFinite()) throw Error(error_kind::kSingularJacobian, "linear solve produced non-finite values");
  return x;
}

}  // namespace linalg

// ---------------------------------------------------------------------------
// Newton's method and alpha-theory

inline void require_square(const PolySystem& sys) {
  if (!sys.is_square()) throw Error(error_kind::kDimensionMismatch, "system must be square");
}

/// x - DF(x)^{-1} F(x), computed with a linear solve.
inline CVector newton_step(const PolySystem& sys, const CVector& x) {
  require_square(sys);
  return x - linalg::solve(sys.jacobian(x), sys.evaluate(x));
}

struct NewtonResult {
  CVector point;
  bool converged = false;
  int iterations = 0;
  std::vector<double> update_norms;
};

inline NewtonResult newton_refine(const PolySystem& sys, const CVector& x0, double tol, int max_iters) {
  require_square(sys);
  NewtonResult r{x0, false, 0, {}};
  for (int it = 0; it < max_iters; ++it) {
    const CVector dx = linalg::solve(sys.jacobian(r.point), sys.evaluate(r.point));
    r.point -= dx;
    r.iterations = it + 1;
    const double u = dx.norm();
    r.update_norms.push_back(u);
    if (u < tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

/// True when `steps` further Newton iterations produce non-increasing update
/// norms. Updates below the rounding floor of x count as contracting.
inline bool newton_contracts(const PolySystem& sys, const CVector& x0, int steps = 3) {
  CVector x = x0;
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    CVector dx;
    try {
      dx = linalg::solve(sys.jacobian(x), sys.evaluate(x));
    } catch (const Error&) {
      return false;
    }
    x -= dx;
    const double u = dx.norm();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm());
    if (u > previous && u > floor) return false;
    previous = u;
  }
  return true;
}

struct Certificate {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_bound = 0.0;
  bool certified = false;
};

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Sum over multi-indices a <= e with |a| = k of (k!/a!) * prod_j e_j!/(e_j-a_j)! * |x_j|^(e_j-a_j).
inline double derivative_bound(const Exponents& e, const Eigen::VectorXd& absx, int k, std::size_t var,
                               double acc) {
  if (var == e.size()) return k == 0 ? acc : 0.0;
  double total = 0.0;
  const int ej = e[var];
  for (int a = 0; a <= std::min(k, ej); ++a) {
    double factor = 1.0 / factorial(a);
    for (int r = 0; r < a; ++r) factor *= (ej - r);
    factor *= std::pow(absx(static_cast<Eigen::Index>(var)), ej - a);
    total += derivative_bound(e, absx, k - a, var + 1, acc * factor);
  }
  return total;
}

}  // namespace detail

/// Upper bound on the operator norm of the k-th derivative tensor of F at x:
/// the l1 norm of all k-th order partials with coefficients and x replaced by
/// their absolute values.
inline double derivative_tensor_bound(const PolySystem& sys, const CVector& x, int k) {
  const Eigen::VectorXd absx = x.cwiseAbs();
  double bound = 0.0;
  for (const auto& p : sys.polys())
    for (const auto& t : p.terms())
      bound += std::abs(t.coefficient) * detail::factorial(k) * detail::derivative_bound(t.exponents, absx, k, 0, 1.0);
  return bound;
}

/// alpha = beta * gamma with gamma replaced by a conservative upper bound, so
/// `certified` is sound; an uncertified point may still be a good approximation.
inline Certificate alpha_number(const PolySystem& sys, const CVector& x) {
  require_square(sys);
  const CMatrix jac = sys.jacobian(x);
  const CVector step = linalg::solve(jac, sys.evaluate(x));
  const Eigen::VectorXd s = linalg::singular_values(jac);
  const double inv_norm = 1.0 / s(s.size() - 1);

  Certificate c;
  c.beta = step.norm();
  for (int k = 2; k <= sys.max_degree(); ++k) {
    const double bk = derivative_tensor_bound(sys, x, k);
    if (bk == 0.0) continue;
    c.gamma_bound = std::max(c.gamma_bound, std::pow(inv_norm * bk / detail::factorial(k), 1.0 / (k - 1)));
  }
  c.alpha = c.beta * c.gamma_bound;
  c.certified = c.alpha < kAlphaThreshold;
  return c;
}

// ---------------------------------------------------------------------------
// Homotopies

struct StartSystem {
  PolySystem system;
  std::vector<CVector> points;
};

/// Start system x_i^{d_i} - 1 and its roots-of-unity grid, last coordinate fastest.
inline StartSystem bezout_start(const std::vector<int>& degrees) {
  if (degrees.empty()) throw Error(error_kind::kInvalidArgument, "degree list is empty");
  const int n = static_cast<int>(degrees.size());
  std::vector<Polynomial> polys;
  for (int i = 0; i < n; ++i) {
    const int d = degrees[static_cast<std::size_t>(i)];
    if (d < 1) throw Error(error_kind::kInvalidArgument, "degrees must be positive");
    Exponents e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = d;
    polys.emplace_back(n, std::vector<Monomial>{{Complex(1.0), e}, {Complex(-1.0), Exponents(static_cast<std::size_t>(n), 0)}});
  }
  StartSystem out{PolySystem(n, std::move(polys)), {}};

  std::vector<int> index(static_cast<std::size_t>(n), 0);
  for (;;) {
    CVector x(n);
    for (int i = 0; i < n; ++i) {
      const int d = degrees[static_cast<std::size_t>(i)];
      x(i) = std::polar(1.0, 2.0 * std::numbers::pi * index[static_cast<std::size_t>(i)] / d);
    }
    out.points.push_back(std::move(x));
    int pos = n - 1;
    while (pos >= 0 && ++index[static_cast<std::size_t>(pos)] == degrees[static_cast<std::size_t>(pos)]) {
      index[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

/// H(x; t), its Jacobian in x and its derivative in t.
struct HomotopyValue {
  CVector value;
  CMatrix dx;
  CVector dt;
};

template <class H>
concept HomotopyMap = requires(const H& h, const CVector& x, double t) {
  { h.num_vars() } -> std::convertible_to<int>;
  { h.evaluate(x, t) } -> std::same_as<HomotopyValue>;
};

/// H(x; t) = (1 - t) target(x) + t gamma start(x).
class Homotopy {
 public:
  Homotopy(PolySystem target, PolySystem start, Complex gamma)
      : target_(std::move(target)), start_(std::move(start)), gamma_(gamma) {
    require_square(target_);
    require_square(start_);
    if (target_.num_vars() != start_.num_vars())
      throw Error(error_kind::kDimensionMismatch, "target and start systems have different sizes");
  }

  int num_vars() const { return target_.num_vars(); }
  const PolySystem& target() const { return target_; }
  const PolySystem& start() const { return start_; }
  Complex gamma() const { return gamma_; }

  HomotopyValue evaluate(const CVector& x, double t) const {
    const CVector f = target_.evaluate(x);
    const CVector g = gamma_ * start_.evaluate(x);
    HomotopyValue v;
    v.value = (1.0 - t) * f + t * g;
    v.dx = (1.0 - t) * target_.jacobian(x) + (t * gamma_) * start_.jacobian(x);
    v.dt = g - f;
    return v;
  }

 private:
  PolySystem target_;
  PolySystem start_;
  Complex gamma_;
};

/// The same blend tracked on the homogenized systems in a random affine patch
/// patch . X = 1 of P^n, so that paths heading to infinity stay bounded.
class ProjectiveHomotopy {
 public:
  ProjectiveHomotopy(const Homotopy& affine, CVector patch)
      : target_(affine.target().homogenized()),
        start_(affine.start().homogenized()),
        gamma_(affine.gamma()),
        patch_(std::move(patch)) {
    if (patch_.size() != target_.num_vars())
      throw Error(error_kind::kDimensionMismatch, "patch length must be n + 1");
  }

  int num_vars() const { return target_.num_vars(); }

  HomotopyValue evaluate(const CVector& x, double t) const {
    const int n = target_.num_eqs();
    const CVector f = target_.evaluate(x);
    const CVector g = gamma_ * start_.evaluate(x);
    HomotopyValue v;
    v.value.resize(n + 1);
    v.value.head(n) = (1.0 - t) * f + t * g;
    v.value(n) = patch_.cwiseProduct(x).sum() - 1.0;
    v.dx.resize(n + 1, n + 1);
    v.dx.topRows(n) = (1.0 - t) * target_.jacobian(x) + (t * gamma_) * start_.jacobian(x);
    v.dx.row(n) = patch_.transpose();
    v.dt.resize(n + 1);
    v.dt.head(n) = g - f;
    v.dt(n) = 0.0;
    return v;
  }

  /// Affine norm of the represented point; infinite on the hyperplane at infinity.
  double coordinate_norm(const CVector& x) const {
    const double h = std::abs(x(0));
    const double tail = x.tail(x.size() - 1).norm();
    return h == 0.0 ? std::numeric_limits<double>::infinity() : tail / h;
  }

  CVector lift(const CVector& affine) const {
    CVector x(affine.size() + 1);
    x(0) = 1.0;
    x.tail(affine.size()) = affine;
    return x / patch_.cwiseProduct(x).sum();
  }

  static CVector to_affine(const CVector& x) { return x.tail(x.size() - 1) / x(0); }

 private:
  PolySystem target_;
  PolySystem start_;
  Complex gamma_;
  CVector patch_;
};

static_assert(HomotopyMap<Homotopy>);
static_assert(HomotopyMap<ProjectiveHomotopy>);

// ---------------------------------------------------------------------------
// Path tracking

struct TrackerSettings {
  double initial_step = 0.05;
  double min_step = 1e-14;
  double corrector_tol = 1e-9;  // endpoint residual bound
  double tracking_tol = 1e-8;   // relative Newton update accepted along the path
  int newton_max_iters = 3;
  int max_steps = 20000;
  double t_end = 0.0;
  double divergence_radius = 1e8;
  double singular_condition = 1e10;

  void validate() const {
    if (!(min_step > 0.0 && min_step <= initial_step && initial_step < 1.0))
      throw Error(error_kind::kInvalidArgument, "step sizes must satisfy 0 < min_step <= initial_step < 1");
    if (!(corrector_tol > 0.0) || !(tracking_tol > 0.0))
      throw Error(error_kind::kInvalidArgument, "tolerances must be positive");
    if (newton_max_iters < 1 || max_steps < 1)
      throw Error(error_kind::kInvalidArgument, "iteration limits must be positive");
    if (!(t_end >= 0.0 && t_end < 1.0)) throw Error(error_kind::kInvalidArgument, "t_end must lie in [0, 1)");
  }
};

enum class PathStatus { Success, Diverged, StepLimit, SingularEndpoint };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "success";
    case PathStatus::Diverged: return "diverged";
    case PathStatus::StepLimit: return "step_limit";
    case PathStatus::SingularEndpoint: return "singular";
  }
  return "unknown";
}

struct PathResult {
  PathStatus status = PathStatus::StepLimit;
  CVector endpoint;
  double t_reached = 1.0;
  int steps_taken = 0;
  double endpoint_condition = 0.0;
  double residual = 0.0;
};

namespace detail {

template <HomotopyMap H>
double coordinate_norm(const H& h, const CVector& x) {
  if constexpr (requires { h.coordinate_norm(x); })
    return h.coordinate_norm(x);
  else
    return x.norm();
}

// Newton at fixed t; succeeds when the update falls below tol relative to |x|
// and every update contracts the previous one.
template <HomotopyMap H>
bool correct(const H& h, CVector& x, double t, const TrackerSettings& s) {
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.newton_max_iters; ++i) {
    const HomotopyValue v = h.evaluate(x, t);
    CVector dx;
    try {
      dx = linalg::solve(v.dx, -v.value);
    } catch (const Error&) {
      return false;
    }
    x += dx;
    const double u = dx.norm();
    if (!std::isfinite(u)) return false;
    if (u <= s.tracking_tol * (1.0 + x.norm())) return true;
    if (u > 0.5 * previous) return false;
    previous = u;
  }
  return false;
}

}  // namespace detail

/// Euler predictor / Newton corrector from t = 1 down to t_end. Failures are
/// reported through the status field.
template <HomotopyMap H>
PathResult track_path(const H& h, const CVector& start, const TrackerSettings& s = {}) {
  s.validate();
  if (start.size() != h.num_vars()) throw Error(error_kind::kDimensionMismatch, "start point has wrong length");
  if (h.evaluate(start, 1.0).value.norm() >= s.corrector_tol * (1.0 + start.norm()))
    throw Error(error_kind::kPrecondition, "start point is not a zero of H(x; 1)");

  PathResult r;
  CVector x = start;
  double t = 1.0;
  double dt = s.initial_step;
  int streak = 0;
  bool stalled = false;

  while (t > s.t_end) {
    if (r.steps_taken >= s.max_steps) {
      r.status = PathStatus::StepLimit;
      r.endpoint = x;
      r.t_reached = t;
      return r;
    }
    ++r.steps_taken;
    const double step = std::min(dt, t - s.t_end);
    const double t_next = (step == t - s.t_end) ? s.t_end : t - step;

    bool ok = true;
    CVector y;
    try {
      const HomotopyValue v = h.evaluate(x, t);
      const CVector tangent = linalg::solve(v.dx, -v.dt);
      y = x - step * tangent;
    } catch (const Error&) {
      ok = false;
    }
    ok = ok && y.allFinite() && detail::correct(h, y, t_next, s);

    if (ok) {
      x = y;
      t = t_next;
      if (detail::coordinate_norm(h, x) > s.divergence_radius) {
        r.status = PathStatus::Diverged;
        r.endpoint = x;
        r.t_reached = t;
        return r;
      }
      if (++streak >= 4) {
        dt = std::min(2.0 * dt, s.initial_step);
        streak = 0;
      }
    } else {
      dt *= 0.5;
      streak = 0;
      if (dt < s.min_step) {
        stalled = true;
        break;
      }
    }
  }

  // Polish at the final t and classify.
  for (int i = 0; i < 8; ++i) {
    const HomotopyValue v = h.evaluate(x, t);
    CVector dx;
    try {
      dx = linalg::solve(v.dx, -v.value);
    } catch (const Error&) {
      break;
    }
    if (!dx.allFinite()) break;
    x += dx;
    if (dx.norm() <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm())) break;
  }
  const HomotopyValue v = h.evaluate(x, t);
  r.endpoint = x;
  r.t_reached = t;
  r.residual = v.value.norm();
  r.endpoint_condition = linalg::condition_number(v.dx);

  if (detail::coordinate_norm(h, x) > s.divergence_radius)
    r.status = PathStatus::Diverged;
  else if (stalled)
    r.status = (t - s.t_end < 1e-3 || r.endpoint_condition > s.singular_condition) ? PathStatus::SingularEndpoint
                                                                                    : PathStatus::StepLimit;
  else if (r.endpoint_condition > s.singular_condition || !(r.residual < s.corrector_tol))
    r.status = PathStatus::SingularEndpoint;
  else
    r.status = PathStatus::Success;
  return r;
}

// ---------------------------------------------------------------------------
// Total-degree solving

struct PathSummary {
  int paths = 0;
  int success = 0;
  int diverged = 0;
  int singular = 0;
  int step_limit = 0;

  void record(PathStatus s) {
    ++paths;
    switch (s) {
      case PathStatus::Success: ++success; break;
      case PathStatus::Diverged: ++diverged; break;
      case PathStatus::SingularEndpoint: ++singular; break;
      case PathStatus::StepLimit: ++step_limit; break;
    }
  }
};

struct Solution {
  CVector point;
  Certificate certificate;
  int multiplicity = 1;
  double residual = 0.0;
};

struct SolveResult {
  std::vector<Solution> solutions;
  PathSummary summary;
  std::vector<PathResult> paths;
  std::uint64_t seed = 0;
};

inline double normalized_distance(const CVector& a, const CVector& b) {
  return (a - b).norm() / (1.0 + std::max(a.norm(), b.norm()));
}

/// Lexicographic on (re, im) of successive coordinates.
inline bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return a.size() < b.size();
}

struct SolveOptions {
  TrackerSettings tracker;
  double dedup_tol = 1e-6;
  double refine_tol = 1e-13;
  int refine_iters = 8;
};

/// Merges endpoints closer than `tol`, keeping the smaller residual; the merge
/// count becomes the multiplicity estimate.
inline std::vector<Solution> deduplicate(std::vector<Solution> in, double tol) {
  std::vector<Solution> out;
  for (auto& s : in) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Solution& o) { return normalized_distance(o.point, s.point) < tol; });
    if (it == out.end()) {
      out.push_back(std::move(s));
    } else {
      const int m = it->multiplicity + s.multiplicity;
      if (s.residual < it->residual) *it = std::move(s);
      it->multiplicity = m;
    }
  }
  return out;
}

/// Tracks all prod(d_i) paths of the gamma-trick Bezout homotopy and returns
/// the distinct finite nonsingular endpoints, refined and certified.
inline SolveResult solve_total_degree(const PolySystem& target, std::uint64_t seed, const SolveOptions& opts = {}) {
  require_square(target);
  const Rng rng(seed);
  Rng gamma_rng = rng.split("gamma");
  Rng patch_rng = rng.split("patch");
  const StartSystem start = bezout_start(target.degrees());
  const Homotopy affine(target, start.system, gamma_rng.unit_gamma());
  const ProjectiveHomotopy h(affine, patch_rng.complex_vector(target.num_vars() + 1));

  SolveResult out;
  out.seed = seed;
  std::vector<Solution> found;
  for (const auto& p : start.points) {
    PathResult r = track_path(h, h.lift(p), opts.tracker);
    if (r.status == PathStatus::Success) {
      Solution sol;
      try {
        NewtonResult nr = newton_refine(target, ProjectiveHomotopy::to_affine(r.endpoint),
                                        opts.refine_tol, opts.refine_iters);
        sol.point = nr.point;
        sol.residual = target.evaluate(sol.point).norm();
        if (!sol.point.allFinite() || !(sol.residual < opts.tracker.corrector_tol)) r.status = PathStatus::SingularEndpoint;
      } catch (const Error&) {
        r.status = PathStatus::SingularEndpoint;
      }
      if (r.status == PathStatus::Success) found.push_back(std::move(sol));
    }
    out.summary.record(r.status);
    out.paths.push_back(std::move(r));
  }

  out.solutions = deduplicate(std::move(found), opts.dedup_tol);
  for (auto& s : out.solutions) {
    try {
      s.certificate = alpha_number(target, s.point);
    } catch (const Error&) {
      s.certificate = Certificate{std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const Solution& a, const Solution& b) { return lex_less(a.point, b.point); });
  return out;
}

inline nlohmann::json to_json(const SolveResult& r) {
  using nlohmann::json;
  json sols = json::array();
  for (const auto& s : r.solutions)
    sols.push_back({{"point", json_io::vector_to_json(s.point)},
                    {"alpha", s.certificate.alpha},
                    {"certified", s.certificate.certified},
                    {"multiplicity", s.multiplicity}});
  return {{"solutions", std::move(sols)},
          {"summary",
           {{"paths", r.summary.paths},
            {"success", r.summary.success},
            {"diverged", r.summary.diverged},
            {"singular", r.summary.singular},
            {"step_limit", r.summary.step_limit},
            {"seed", r.seed}}}};
}

}  // namespace witnesskit
