// Copyright 2026 The rbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBELL_SCENARIO_HPP
#define RBELL_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rbell/nc_algebra.hpp"

namespace rbell {

struct ProbabilityTables;  // honest_model.hpp

enum class ConstraintMode { FullTable, CoarseGrained };

std::string to_string(ConstraintMode mode);
ConstraintMode constraint_mode_from_string(const std::string& s);

/// Outcome alphabet of one measurement: `regular` conclusive outcomes
/// 0..regular-1, plus optionally the no-detection symbol.
struct OutcomeAlphabet {
  int regular = 2;
  bool has_bot = false;
  int size() const { return regular + (has_bot ? 1 : 0); }
  friend bool operator==(const OutcomeAlphabet&, const OutcomeAlphabet&) = default;
};

/// The routed Bell scenario: which inputs exist on each side, which
/// outcome alphabets they carry, the fixed generation-round input pair,
/// and how the observed statistics enter the optimization (full table of
/// test events vs. the two coarse-grained functionals).
struct Scenario {
  std::vector<int> alice_inputs;
  std::vector<int> bob_inputs;  // test inputs only; the generation input is separate
  std::vector<int> ben_inputs;
  std::map<int, OutcomeAlphabet> alice_outcomes;
  std::map<int, OutcomeAlphabet> bob_outcomes;  // includes the generation input
  std::map<int, OutcomeAlphabet> ben_outcomes;
  std::pair<int, int> generation_inputs{0, 3};
  ConstraintMode constraint_mode = ConstraintMode::FullTable;
  double tolerance_delta = 0.0;  // symmetric band around equality targets

  /// Checks the structural invariants: alphabets nonempty, the generation
  /// input absent from the test set, the no-detection symbol confined to
  /// Bob's generation input. Throws std::invalid_argument on violation.
  void validate() const;

  std::string serialize() const;                      // structured text (JSON)
  static Scenario deserialize(const std::string& s);  // inverse of serialize
  static Scenario load_file(const std::string& path);
  void save_file(const std::string& path) const;

  /// Stable content hash used for output provenance headers.
  std::uint64_t hash() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The paper's routed-CHSH scenario: x in {0,1}, test y in {0,1,2},
/// yhat in {0,1}, generation pair (0,3), binary outcomes everywhere
/// except Bob's generation input which keeps the no-detection symbol.
Scenario build_routed_chsh_scenario(ConstraintMode mode);

enum class Branch { Bob, Ben };

/// One conditional outcome event P(a, b | x, y) on a branch; `y` is
/// Bob's or Ben's input depending on the branch.
struct Event {
  Branch branch = Branch::Bob;
  int x = 0;
  int y = 0;
  int a = 0;
  int b = 0;
  friend auto operator<=>(const Event&, const Event&) = default;
};

std::string to_string(const Event& e);

/// A linear functional over branch events with its target value.
struct ConstraintFunctional {
  std::string name;
  std::vector<std::pair<Event, double>> terms;
  double target = 0.0;
};

/// Turns observed statistics into constraint functionals per the
/// scenario's mode. FullTable: one equality per test event (generation
/// input excluded). CoarseGrained: the qPER functional
/// sum_{a != b} P(a,b | x=1, y=2) and the CHSH game functional
/// (1/4) sum_{a xor b = x*y} P(a,b | x,y) on the Ben branch.
/// Missing table entries are rejected with the absent event named.
std::vector<ConstraintFunctional> constraint_functionals(const Scenario& scenario,
                                                         const ProbabilityTables& stats);

/// Coarse-grained functionals with explicitly given targets (no tables).
std::vector<ConstraintFunctional> coarse_functionals(const Scenario& scenario, double phi_ph,
                                                     double phi_chsh);

/// Evaluates a functional against explicit tables (used for consistency
/// checks between the two constraint modes).
double evaluate_functional(const ConstraintFunctional& f, const ProbabilityTables& stats);

/// Generator inventory for the scenario's relaxation algebra: one
/// independent-outcome projector per binary input, plus 2*z_nodes Z pairs.
GeneratorSet generator_set(const Scenario& scenario, int z_nodes);

/// Convenience wrapper building the monomial basis for this scenario.
std::vector<Monomial> monomial_basis(const Scenario& scenario, const LevelSpec& spec);

}  // namespace rbell

#endif  // RBELL_SCENARIO_HPP
