#include "walkopt/selfcheck.hpp"

#include <cmath>

#include "walkopt/presets.hpp"
#include "walkopt/scoring.hpp"

namespace walkopt {

Instance depth_choice_reference_instance() {
  InstanceBuilder b;
  b.name("depth-choice-reference").curve(walkscore_curve()).d_infinity(kDefaultCutoffM);
  b.add_resident(0);
  auto specs = toronto3_specs(0);
  specs[1].budget = 7;  // restaurants only
  for (auto& spec : specs) b.add_type(spec);

  for (NodeId j = 1; j <= 7; ++j) {
    b.add_candidate(j, 1);
    b.candidate_distance(0, j, j == 7 ? 1.0 : 1800.0);
  }
  b.add_existing(0, 101);
  b.existing_distance(0, 0, 101, 2000.0);
  for (NodeId node = 102; node <= 107; ++node) {
    b.add_existing(1, node);
    b.existing_distance(0, 1, node, 2000.0);
  }
  b.add_existing(2, 108);
  b.existing_distance(0, 2, 108, 2000.0);
  return b.build();
}

SelfCheckResult run_depth_choice_selfcheck() {
  const Instance inst = depth_choice_reference_instance();
  ScoringOptions opts;
  opts.weight_override = toronto3_rounded_weights();
  Evaluator ev(inst, opts);

  // Restaurants are type id 1; candidate indices are 0-based (node j -> j-1).
  Allocation four, six;
  for (int j = 0; j < 4; ++j) four.add(1, j);
  for (int j = 0; j < 6; ++j) six.add(1, j);
  Allocation four_plus = four, six_plus = six;
  four_plus.add(1, 6);
  six_plus.add(1, 6);

  EvalState s4 = ev.make_state(four);
  EvalState s6 = ev.make_state(six);
  EvalState s4p = ev.make_state(four_plus);
  EvalState s6p = ev.make_state(six_plus);

  SelfCheckResult out;
  auto check = [&out](const std::string& label, double actual, double expected, double tol) {
    out.lines.push_back({label, actual, expected, tol, std::abs(actual - expected) <= tol});
  };

  check("weighted distance, 4 sites", s4.weighted[0], 1950.0, 0.01);
  check("weighted distance, 6 sites", s6.weighted[0], 1938.0, 0.01);
  check("weighted distance, 4 sites + near site", s4p.weighted[0], 1746.11, 0.01);
  check("weighted distance, 6 sites + near site", s6p.weighted[0], 1734.11, 0.01);
  check("score, 4 sites", s4.objective, 7.5, 0.01);
  check("score, 6 sites", s6.objective, 7.7, 0.01);
  check("score, 4 sites + near site", s4p.objective, 13.27, 0.01);
  check("score, 6 sites + near site", s6p.objective, 14.00, 0.01);

  out.gain_after_four = ev.gain(s4, 1, 6);
  out.gain_after_six = ev.gain(s6, 1, 6);
  check("gain of near site after 4", out.gain_after_four, 5.77, 0.01);
  check("gain of near site after 6", out.gain_after_six, 6.30, 0.01);

  out.diminishing_returns_violated = out.gain_after_four < out.gain_after_six;
  out.pass = out.diminishing_returns_violated;
  for (const auto& line : out.lines) out.pass = out.pass && line.pass;
  return out;
}

}  // namespace walkopt
