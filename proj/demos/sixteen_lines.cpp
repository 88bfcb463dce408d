// Lines on a quartic surface Q1 cap Q2 in P^4, counted two ways: from the witness
// sets of the quadric line varieties and by solving for the lines directly.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "witnesskit/grassmann.hpp"

using namespace witnesskit;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  Rng rng(seed);
  const Quadric q1 = Quadric::random(rng), q2 = Quadric::random(rng);
  const CycleBasis g14 = builtin_basis(Space::g14());

  const SchubertWitnessSet w1 = lines_on_quadric_witness(q1, Flag::random(rng), rng.split("w1").seed());
  const SchubertWitnessSet w2 = lines_on_quadric_witness(q2, Flag::random(rng), rng.split("w2").seed());
  const CycleClass c1 = class_of_variety(w1), c2 = class_of_variety(w2);
  std::cout << "[V_Q1] = " << to_json(c1, g14.basis).dump() << "\n";
  std::cout << "[V_Q2] = " << to_json(c2, g14.basis).dump() << "\n";
  std::cout << "[V_Q1] . [V_Q2] = " << intersect_classes(g14, c1, c2).coeffs[0] << " [X01]\n";

  const QuarticLinesResult r = lines_on_two_quadrics(q1, q2, rng.split("lines").seed());
  std::cout << "numerical lines: " << r.lines.size() << " from " << r.summary.paths << " paths\n";
  if (r.genericity_warning) std::cout << "warning: " << r.diagnostics << "\n";
  for (const auto& l : r.lines) {
    const auto a = q1.line_residuals(l), b = q2.line_residuals(l);
    std::cout << "  p01 = " << l.pluecker()(0) << "  residual "
              << std::max({a[0], a[1], a[2], b[0], b[1], b[2]}) << "\n";
  }
  return r.genericity_warning ? 1 : 0;
}
