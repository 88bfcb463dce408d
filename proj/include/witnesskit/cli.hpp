#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "witnesskit/cycle_algebra.hpp"
#include "witnesskit/error.hpp"
#include "witnesskit/grassmann.hpp"
#include "witnesskit/json_io.hpp"
#include "witnesskit/schubert.hpp"
#include "witnesskit/solver.hpp"
#include "witnesskit/witness.hpp"

namespace witnesskit::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline json error_json(const std::string& kind, const std::string& detail) {
  return {{"error", {{"kind", kind}, {"detail", detail}}}};
}

/// Everything a single invocation needs; filled by the argument parser.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::string output;

  // tolerances
  double dedup_tol = 1e-6;
  double match_tol = 1e-6;
  double filter_tol = 1e-6;
  double residual_tol = 1e-8;
  double tracking_tol = 1e-8;
  double corrector_tol = 1e-9;
  double min_step = 1e-14;
  int max_steps = 20000;

  // inputs
  std::string system, witness, slice, point, quadric, flag, line, q1, q2;
  int dim = 0;
  int m = 0, n = 0;

  std::string space = "g14";
  int space_n = 0, space_m = 0;
  int grade = 0;
  std::string degrees;
  bool square = false;
  int row = 0, col = 0;
  std::string index;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("WITNESSKIT_SEED")) {
      try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw Error(error_kind::kInvalidArgument, "WITNESSKIT_SEED is not an unsigned integer");
    }
    return 0;
  }

  SolveOptions solve_options() const {
    SolveOptions o;
    o.dedup_tol = dedup_tol;
    o.tracker.tracking_tol = tracking_tol;
    o.tracker.corrector_tol = corrector_tol;
    o.tracker.min_step = min_step;
    o.tracker.max_steps = max_steps;
    o.tracker.validate();
    return o;
  }

  WitnessOptions witness_options() const {
    WitnessOptions o;
    o.solve = solve_options();
    o.filter_tol = filter_tol;
    o.match_tol = match_tol;
    return o;
  }

  GrassmannOptions grassmann_options() const {
    GrassmannOptions o;
    o.solve = solve_options();
    o.dedup_tol = dedup_tol;
    o.match_tol = match_tol;
    o.residual_tol = residual_tol;
    return o;
  }
};

namespace detail {

inline json summary_json(const PathSummary& s) {
  return {{"paths", s.paths}, {"success", s.success}, {"diverged", s.diverged}, {"singular", s.singular}, {"step_limit", s.step_limit}};
}

inline json load_json(const std::string& path, const char* what) {
  if (path.empty()) throw Error(error_kind::kInvalidArgument, std::string("missing input: ") + what);
  return json_io::read_file(path);
}

// Accepts either {"key": value} or the bare value.
inline const json& unwrap(const json& j, const char* key) { return j.is_object() && j.contains(key) ? j.at(key) : j; }

inline std::vector<long long> parse_integers(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(error_kind::kParse, "not an integer list: " + text);
    }
  }
  if (out.empty()) throw Error(error_kind::kParse, "empty integer list");
  return out;
}

inline Space parse_space(const RunConfig& c) {
  if (c.space == "g14") return Space::g14();
  if (c.space == "blowup-p2") return Space::blowup_p2();
  if (c.space == "pn") return Space::projective(c.space_n);
  if (c.space == "product") return Space::product(c.space_m, c.space_n);
  throw Error(error_kind::kInvalidArgument, "unknown space: " + c.space);
}

inline json intersection_matrix_json(const IntersectionMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.entries) rows.push_back(r);
  return rows;
}

inline CVector parse_point(const std::string& text) {
  // either inline JSON or a file holding it
  const json j = (!text.empty() && (text.front() == '[' || text.front() == '{')) ? json_io::parse_text(text) : json_io::read_file(text);
  return json_io::vector_from_json(unwrap(j, "point"));
}

inline Quadric quadric_or_random(const std::string& path, Rng rng) {
  if (path.empty()) return Quadric::random(rng);
  const json j = json_io::read_file(path);
  return j.is_object() ? quadric_from_json(j) : Quadric(json_io::matrix_from_json(j));
}

inline Flag flag_or_random(const std::string& path, Rng rng) {
  if (path.empty()) return Flag::random(rng);
  const json j = json_io::read_file(path);
  return j.is_object() ? flag_from_json(j) : Flag(json_io::matrix_from_json(j));
}

}  // namespace detail

/// Executes a parsed command and returns its JSON payload.
class Runner {
 public:
  explicit Runner(const RunConfig& c) : c_(c), seed_(c.resolved_seed()), rng_(seed_) {}

  json solve() const {
    const PolySystem sys = system_from_json(detail::load_json(c_.system, "--system"));
    return to_json(solve_total_degree(sys, seed_, c_.solve_options()));
  }

  json witness_compute() const {
    const PolySystem sys = system_from_json(detail::load_json(c_.system, "--system"));
    return with_seed(to_json(witnesskit::witness_compute(sys, c_.dim, rng_.split("witness").seed(), c_.witness_options())));
  }

  json witness_move() const {
    const WitnessSet ws = load_witness();
    LinearSlice target;
    if (c_.slice.empty()) {
      Rng slice_rng = rng_.split("target-slice");
      target = LinearSlice::random(slice_rng, ws.dim, ws.system.num_vars());
    } else {
      target = LinearSlice(json_io::matrix_from_json(detail::unwrap(json_io::read_file(c_.slice), "slice")));
    }
    return with_seed(to_json(witnesskit::witness_move(ws, target, rng_.split("move").seed(), c_.witness_options())));
  }

  json witness_sample() const {
    const CVector p = witnesskit::witness_sample(load_witness(), rng_.split("sample").seed(), c_.witness_options());
    return {{"point", json_io::vector_to_json(p)}, {"seed", seed_}};
  }

  json witness_member() const {
    if (c_.point.empty()) throw Error(error_kind::kInvalidArgument, "missing input: --point");
    const MembershipResult r =
        witness_membership(load_witness(), detail::parse_point(c_.point), rng_.split("member").seed(), c_.witness_options());
    return {{"verdict", to_string(r.verdict)}, {"distance", r.distance}, {"seed", seed_}};
  }

  json product() const {
    const PolySystem sys = system_from_json(detail::load_json(c_.system, "--system"));
    const auto sets = product_witness(sys, c_.m, c_.n, c_.dim, rng_.split("product").seed(), c_.witness_options());
    json bideg = json::array(), sets_json = json::array();
    for (const auto& [ab, ws] : sets) {
      bideg.push_back({{"a", ab.first}, {"b", ab.second}, {"degree", ws.degree()}});
      sets_json.push_back(to_json(ws));
    }
    return {{"bidegrees", std::move(bideg)}, {"witness_sets", std::move(sets_json)}, {"seed", seed_}};
  }

  json class_recover() const {
    const CycleBasis basis = builtin_basis(detail::parse_space(c_));
    const std::vector<long long> d = detail::parse_integers(c_.degrees);
    const CycleClass cls = class_from_degrees(basis.matrix(c_.grade), {c_.grade, d});
    json out = to_json(cls, basis.basis);
    if (c_.square) out["square"] = to_json(intersect_classes(basis, cls, cls), basis.basis);
    return out;
  }

  json class_pair() const {
    const CycleBasis basis = builtin_basis(detail::parse_space(c_));
    const IntersectionMatrix& m = basis.matrix(c_.grade);
    const int n = basis.space.dimension();
    const long long d = pairing_degree(m, c_.row, c_.col);
    return {{"degree", d},
            {"row", basis.basis.grades[static_cast<std::size_t>(n - c_.grade)][static_cast<std::size_t>(c_.row)].name},
            {"col", basis.basis.grades[static_cast<std::size_t>(c_.grade)][static_cast<std::size_t>(c_.col)].name}};
  }

  json class_duality() const {
    const CycleBasis basis = builtin_basis(detail::parse_space(c_));
    const IntersectionMatrix& m = basis.matrix(c_.grade);
    return {{"duality", is_duality_basis(m)}, {"matrix", detail::intersection_matrix_json(m)}};
  }

  json grassmann_poset() const {
    const SchubertPoset p = schubert_poset();
    json elements = json::array(), covers = json::array();
    for (const auto& e : p.elements) elements.push_back({{"name", e.name()}, {"rank", e.rank()}, {"dual", schubert_dual(e).name()}});
    for (const auto& [a, b] : p.covers) covers.push_back({a.name(), b.name()});
    return {{"elements", std::move(elements)}, {"covers", std::move(covers)}, {"rank_counts", p.rank_counts()}};
  }

  json grassmann_dual() const {
    const SchubertIndex idx = SchubertIndex::parse(c_.index);
    const SchubertIndex d = schubert_dual(idx);
    return {{"index", idx.name()}, {"rank", idx.rank()}, {"dual", d.name()}, {"dual_rank", d.rank()}};
  }

  json grassmann_witness() const {
    const Quadric q = detail::quadric_or_random(c_.quadric, rng_.split("quadric"));
    const Flag f = detail::flag_or_random(c_.flag, rng_.split("flag"));
    return with_seed(to_json(lines_on_quadric_witness(q, f, rng_.split("witness").seed(), c_.grassmann_options())));
  }

  json grassmann_move() const {
    const SchubertWitnessSet ws = load_schubert();
    const Flag f = detail::flag_or_random(c_.flag, rng_.split("target-flag"));
    return with_seed(to_json(schubert_witness_move(ws, f, rng_.split("move").seed(), c_.grassmann_options())));
  }

  json grassmann_sample() const {
    const Line l = schubert_sample(load_schubert(), rng_.split("sample").seed(), c_.grassmann_options());
    return {{"line", to_json(l)}, {"seed", seed_}};
  }

  json grassmann_member() const {
    const Line l = line_from_json(detail::unwrap(detail::load_json(c_.line, "--line"), "line"));
    const MembershipResult r = schubert_membership(load_schubert(), l, rng_.split("member").seed(), c_.grassmann_options());
    return {{"verdict", to_string(r.verdict)}, {"distance", r.distance}, {"seed", seed_}};
  }

  json quartic_lines(std::ostream& err) const {
    const Quadric a = detail::quadric_or_random(c_.q1, rng_.split("q1"));
    const Quadric b = detail::quadric_or_random(c_.q2, rng_.split("q2"));
    const QuarticLinesResult r = lines_on_two_quadrics(a, b, rng_.split("quartic").seed(), c_.grassmann_options());
    if (r.genericity_warning) err << "GenericityWarning: " << r.diagnostics << "\n";
    json lines = json::array();
    for (const auto& l : r.lines) lines.push_back(to_json(l));
    return {{"count", r.lines.size()},
            {"lines", std::move(lines)},
            {"q1", to_json(a)},
            {"q2", to_json(b)},
            {"genericity_warning", r.genericity_warning},
            {"diagnostics", r.diagnostics},
            {"summary", detail::summary_json(r.summary)},
            {"seed", seed_}};
  }

 private:
  json with_seed(json j) const {
    j["seed"] = seed_;
    return j;
  }

  WitnessSet load_witness() const { return witness_from_json(detail::load_json(c_.witness, "--witness")); }
  SchubertWitnessSet load_schubert() const { return schubert_witness_from_json(detail::load_json(c_.witness, "--witness")); }

  const RunConfig& c_;
  std::uint64_t seed_;
  Rng rng_;
};

/// Parses argv-style arguments (without the program name), runs the command and
/// writes its JSON to `out` or to --output. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Numerical algebraic geometry: homotopy solving, witness sets, cycle classes, lines in P^4",
               "witnesskit"};
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--seed", c.seed, "Random seed (falls back to WITNESSKIT_SEED, then 0)");
  app.add_option("-o,--output", c.output, "Write JSON here instead of stdout");
  app.add_option("--dedup-tol", c.dedup_tol, "Distance below which endpoints merge")->capture_default_str();
  app.add_option("--match-tol", c.match_tol, "Membership match distance")->capture_default_str();
  app.add_option("--filter-tol", c.filter_tol, "Residual for keeping a witness point")->capture_default_str();
  app.add_option("--residual-tol", c.residual_tol, "Line-on-quadric residual bound")->capture_default_str();
  app.add_option("--tracking-tol", c.tracking_tol, "Corrector acceptance along paths")->capture_default_str();
  app.add_option("--corrector-tol", c.corrector_tol, "Newton tolerance at path endpoints")->capture_default_str();
  app.add_option("--min-step", c.min_step, "Smallest step before a path stalls")->capture_default_str();
  app.add_option("--max-steps", c.max_steps, "Step budget per path")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve a square system by total-degree homotopy");
  solve->add_option("--system", c.system, "System JSON")->required();

  auto* witness = app.add_subcommand("witness", "Witness sets of affine varieties");
  witness->require_subcommand(1);
  auto* w_compute = witness->add_subcommand("compute", "Witness set of the dimension-k part");
  w_compute->add_option("--system", c.system, "System JSON")->required();
  w_compute->add_option("--dim", c.dim, "Dimension k")->required();
  auto* w_move = witness->add_subcommand("move", "Move a witness set to another slice");
  w_move->add_option("--witness", c.witness, "Witness set JSON")->required();
  w_move->add_option("--slice", c.slice, "Target slice JSON (random when omitted)");
  auto* w_sample = witness->add_subcommand("sample", "Sample a point of the variety");
  w_sample->add_option("--witness", c.witness, "Witness set JSON")->required();
  auto* w_member = witness->add_subcommand("member", "Test whether a point lies on the variety");
  w_member->add_option("--witness", c.witness, "Witness set JSON")->required();
  w_member->add_option("--point", c.point, "Point as JSON [[re,im],...] or a file holding it")->required();

  auto* product = app.add_subcommand("product-witness", "Bidegrees of a variety in C^m x C^n");
  product->add_option("--system", c.system, "System JSON")->required();
  product->add_option("--m", c.m, "Dimension of the first factor")->required();
  product->add_option("--n", c.n, "Dimension of the second factor")->required();
  product->add_option("--dim", c.dim, "Dimension k")->required();

  auto* cls = app.add_subcommand("class", "Exact cycle classes from witness degrees");
  cls->require_subcommand(1);
  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--space", c.space, "g14 | blowup-p2 | pn | product")->capture_default_str();
    sub->add_option("--space-n", c.space_n, "n for P^n, or the second factor of a product");
    sub->add_option("--space-m", c.space_m, "First factor of a product");
    sub->add_option("--grade", c.grade, "Cycle dimension k")->required();
  };
  auto* c_recover = cls->add_subcommand("recover", "Solve M c = d exactly");
  add_space(c_recover);
  c_recover->add_option("--degrees", c.degrees, "Comma-separated witness degrees, e.g. 4,0")->required();
  c_recover->add_flag("--square", c.square, "Also print the self-intersection (G(1,P^4), grade 3)");
  auto* c_pair = cls->add_subcommand("pair", "Entry of the intersection matrix");
  add_space(c_pair);
  c_pair->add_option("--row", c.row, "Row index (grade n-k)")->required();
  c_pair->add_option("--col", c.col, "Column index (grade k)")->required();
  auto* c_duality = cls->add_subcommand("duality", "Whether the basis is self-dual at this grade");
  add_space(c_duality);

  auto* gr = app.add_subcommand("grassmann", "Lines in P^4 and Schubert witness sets");
  gr->require_subcommand(1);
  auto* g_poset = gr->add_subcommand("poset", "Schubert poset of G(1,P^4)");
  auto* g_dual = gr->add_subcommand("dual", "Dual Schubert index");
  g_dual->add_option("--index", c.index, "Index such as 13")->required();
  auto* g_witness = gr->add_subcommand("witness", "Lines on a quadric in X_13 of a flag");
  g_witness->add_option("--quadric", c.quadric, "Quadric JSON (random when omitted)");
  g_witness->add_option("--flag", c.flag, "Flag JSON (random when omitted)");
  auto* g_move = gr->add_subcommand("move", "Move a Schubert witness set to another flag");
  g_move->add_option("--witness", c.witness, "Schubert witness JSON")->required();
  g_move->add_option("--flag", c.flag, "Target flag JSON (random when omitted)");
  auto* g_sample = gr->add_subcommand("sample", "Sample a line on the quadric");
  g_sample->add_option("--witness", c.witness, "Schubert witness JSON")->required();
  auto* g_member = gr->add_subcommand("member", "Test whether a line lies on the quadric");
  g_member->add_option("--witness", c.witness, "Schubert witness JSON")->required();
  g_member->add_option("--line", c.line, "Line JSON")->required();
  auto* g_quartic = gr->add_subcommand("quartic-lines", "Lines on the intersection of two quadrics");
  g_quartic->add_option("--q1", c.q1, "First quadric JSON (random when omitted)");
  g_quartic->add_option("--q2", c.q2, "Second quadric JSON (random when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "Run with --help for usage.\n";
    out << error_json("UsageError", e.what()).dump() << "\n";
    return kExitUsage;
  }

  json result;
  try {
    const Runner r(c);
    if (*solve) result = r.solve();
    else if (*w_compute) result = r.witness_compute();
    else if (*w_move) result = r.witness_move();
    else if (*w_sample) result = r.witness_sample();
    else if (*w_member) result = r.witness_member();
    else if (*product) result = r.product();
    else if (*c_recover) result = r.class_recover();
    else if (*c_pair) result = r.class_pair();
    else if (*c_duality) result = r.class_duality();
    else if (*g_poset) result = r.grassmann_poset();
    else if (*g_dual) result = r.grassmann_dual();
    else if (*g_witness) result = r.grassmann_witness();
    else if (*g_move) result = r.grassmann_move();
    else if (*g_sample) result = r.grassmann_sample();
    else if (*g_member) result = r.grassmann_member();
    else if (*g_quartic) result = r.quartic_lines(err);
  } catch (const Error& e) {
    out << error_json(e.kind(), e.what()).dump() << "\n";
    return kExitDomain;
  } catch (const json::exception& e) {
    out << error_json(error_kind::kParse, e.what()).dump() << "\n";
    return kExitDomain;
  }

  const std::string text = result.dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream file(c.output);
    if (!file || !(file << text)) {
      out << error_json(error_kind::kIo, "cannot write " + c.output).dump() << "\n";
      return kExitDomain;
    }
  }
  return kExitOk;
}

}  // namespace witnesskit::cli
