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

#include "rbell/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rbell/detail/util.hpp"
#include "rbell/honest_model.hpp"

namespace rbell {

using nlohmann::json;

std::string to_string(ConstraintMode mode) {
  return mode == ConstraintMode::FullTable ? "full_table" : "coarse_grained";
}

ConstraintMode constraint_mode_from_string(const std::string& s) {
  if (s == "full_table") return ConstraintMode::FullTable;
  if (s == "coarse_grained") return ConstraintMode::CoarseGrained;
  throw std::invalid_argument("unknown constraint mode: " + s);
}

void Scenario::validate() const {
  if (alice_inputs.empty() || bob_inputs.empty() || ben_inputs.empty())
    throw std::invalid_argument("scenario: input sets must be nonempty");
  if (std::count(bob_inputs.begin(), bob_inputs.end(), generation_inputs.second) > 0)
    throw std::invalid_argument("scenario: generation input must not appear in the test set");
  if (std::count(alice_inputs.begin(), alice_inputs.end(), generation_inputs.first) == 0)
    throw std::invalid_argument("scenario: Alice's generation input missing from her input set");
  auto check_alphabets = [](const std::map<int, OutcomeAlphabet>& m, const std::vector<int>& inputs,
                            const char* who) {
    for (int x : inputs) {
      auto it = m.find(x);
      if (it == m.end() || it->second.size() <= 0)
        throw std::invalid_argument(std::string("scenario: empty outcome alphabet for ") + who +
                                    " input " + std::to_string(x));
    }
  };
  check_alphabets(alice_outcomes, alice_inputs, "Alice");
  check_alphabets(bob_outcomes, bob_inputs, "Bob");
  check_alphabets(ben_outcomes, ben_inputs, "Ben");
  for (const auto& [x, alph] : alice_outcomes)
    if (alph.has_bot) throw std::invalid_argument("scenario: no-detection symbol on Alice input");
  for (const auto& [y, alph] : ben_outcomes)
    if (alph.has_bot) throw std::invalid_argument("scenario: no-detection symbol on Ben input");
  for (const auto& [y, alph] : bob_outcomes) {
    if (alph.has_bot && y != generation_inputs.second)
      throw std::invalid_argument(
          "scenario: no-detection symbol only allowed on Bob's generation input");
  }
  if (tolerance_delta < 0.0)
    throw std::invalid_argument("scenario: tolerance band must be nonnegative");
}

namespace {

json alphabet_to_json(const OutcomeAlphabet& a) {
  json arr = json::array();
  for (int i = 0; i < a.regular; ++i) arr.push_back(std::to_string(i));
  if (a.has_bot) arr.push_back("bot");
  return arr;
}

OutcomeAlphabet alphabet_from_json(const json& arr) {
  OutcomeAlphabet a;
  a.regular = 0;
  a.has_bot = false;
  for (const auto& v : arr) {
    if (v.get<std::string>() == "bot")
      a.has_bot = true;
    else
      ++a.regular;
  }
  return a;
}

json outcomes_to_json(const std::map<int, OutcomeAlphabet>& m) {
  json obj = json::object();
  for (const auto& [k, v] : m) obj[std::to_string(k)] = alphabet_to_json(v);
  return obj;
}

std::map<int, OutcomeAlphabet> outcomes_from_json(const json& obj) {
  std::map<int, OutcomeAlphabet> m;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    m[std::stoi(it.key())] = alphabet_from_json(it.value());
  return m;
}

}  // namespace

std::string Scenario::serialize() const {
  json j;
  j["alice_inputs"] = alice_inputs;
  j["bob_inputs"] = bob_inputs;
  j["ben_inputs"] = ben_inputs;
  j["outcomes"] = {{"alice", outcomes_to_json(alice_outcomes)},
                   {"bob", outcomes_to_json(bob_outcomes)},
                   {"ben", outcomes_to_json(ben_outcomes)}};
  j["generation_inputs"] = {generation_inputs.first, generation_inputs.second};
  j["constraint_mode"] = to_string(constraint_mode);
  j["tolerance_delta"] = tolerance_delta;
  return j.dump(2);
}

Scenario Scenario::deserialize(const std::string& s) {
  json j = json::parse(s);
  Scenario sc;
  sc.alice_inputs = j.at("alice_inputs").get<std::vector<int>>();
  sc.bob_inputs = j.at("bob_inputs").get<std::vector<int>>();
  sc.ben_inputs = j.at("ben_inputs").get<std::vector<int>>();
  sc.alice_outcomes = outcomes_from_json(j.at("outcomes").at("alice"));
  sc.bob_outcomes = outcomes_from_json(j.at("outcomes").at("bob"));
  sc.ben_outcomes = outcomes_from_json(j.at("outcomes").at("ben"));
  sc.generation_inputs = {j.at("generation_inputs").at(0).get<int>(),
                          j.at("generation_inputs").at(1).get<int>()};
  sc.constraint_mode = constraint_mode_from_string(j.at("constraint_mode").get<std::string>());
  sc.tolerance_delta = j.value("tolerance_delta", 0.0);
  sc.validate();
  return sc;
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void Scenario::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << serialize() << "\n";
}

std::uint64_t Scenario::hash() const { return detail::fnv1a64(serialize()); }

Scenario build_routed_chsh_scenario(ConstraintMode mode) {
  Scenario sc;
  sc.alice_inputs = {0, 1};
  sc.bob_inputs = {0, 1, 2};
  sc.ben_inputs = {0, 1};
  for (int x : sc.alice_inputs) sc.alice_outcomes[x] = OutcomeAlphabet{2, false};
  for (int y : sc.bob_inputs) sc.bob_outcomes[y] = OutcomeAlphabet{2, false};
  sc.bob_outcomes[3] = OutcomeAlphabet{2, true};
  for (int y : sc.ben_inputs) sc.ben_outcomes[y] = OutcomeAlphabet{2, false};
  sc.generation_inputs = {0, 3};
  sc.constraint_mode = mode;
  sc.validate();
  return sc;
}

std::string to_string(const Event& e) {
  std::string out = e.branch == Branch::Bob ? "P(" : "Phat(";
  out += std::to_string(e.a) + "," + std::to_string(e.b) + "|" + std::to_string(e.x) + "," +
         std::to_string(e.y) + ")";
  return out;
}

namespace {

double lookup(const ProbabilityTables& stats, const Event& e) {
  const bool bob = e.branch == Branch::Bob;
  const auto& branch = bob ? stats.bob_branch : stats.ben_branch;
  auto it = branch.find({e.x, e.y});
  if (it == branch.end() || e.a >= it->second.rows() || e.b >= it->second.cols())
    throw std::invalid_argument("statistics table missing event " + to_string(e));
  return it->second(e.a, e.b);
}

ConstraintFunctional qper_functional(double target) {
  ConstraintFunctional f;
  f.name = "phi_ph";
  f.terms = {{Event{Branch::Bob, 1, 2, 0, 1}, 1.0}, {Event{Branch::Bob, 1, 2, 1, 0}, 1.0}};
  f.target = target;
  return f;
}

ConstraintFunctional chsh_functional(double target) {
  ConstraintFunctional f;
  f.name = "phi_chsh";
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) f.terms.push_back({Event{Branch::Ben, x, y, a, b}, 0.25});
  f.target = target;
  return f;
}

}  // namespace

std::vector<ConstraintFunctional> coarse_functionals(const Scenario& scenario, double phi_ph,
                                                     double phi_chsh) {
  (void)scenario;
  return {qper_functional(phi_ph), chsh_functional(phi_chsh)};
}

std::vector<ConstraintFunctional> constraint_functionals(const Scenario& scenario,
                                                         const ProbabilityTables& stats) {
  scenario.validate();
  std::vector<ConstraintFunctional> out;
  if (scenario.constraint_mode == ConstraintMode::CoarseGrained) {
    ConstraintFunctional ph = qper_functional(0.0);
    ph.target = evaluate_functional(ph, stats);
    ConstraintFunctional chsh = chsh_functional(0.0);
    chsh.target = evaluate_functional(chsh, stats);
    out.push_back(std::move(ph));
    out.push_back(std::move(chsh));
    return out;
  }
  for (int x : scenario.alice_inputs) {
    for (int y : scenario.bob_inputs) {
      const int na = scenario.alice_outcomes.at(x).regular;
      const int nb = scenario.bob_outcomes.at(y).regular;
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
          Event e{Branch::Bob, x, y, a, b};
          ConstraintFunctional f;
          f.name = to_string(e);
          f.terms = {{e, 1.0}};
          f.target = lookup(stats, e);
          out.push_back(std::move(f));
        }
      }
    }
  }
  for (int x : scenario.alice_inputs) {
    for (int y : scenario.ben_inputs) {
      const int na = scenario.alice_outcomes.at(x).regular;
      const int nb = scenario.ben_outcomes.at(y).regular;
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
          Event e{Branch::Ben, x, y, a, b};
          ConstraintFunctional f;
          f.name = to_string(e);
          f.terms = {{e, 1.0}};
          f.target = lookup(stats, e);
          out.push_back(std::move(f));
        }
      }
    }
  }
  return out;
}

double evaluate_functional(const ConstraintFunctional& f, const ProbabilityTables& stats) {
  double v = 0.0;
  for (const auto& [event, coeff] : f.terms) v += coeff * lookup(stats, event);
  return v;
}

GeneratorSet generator_set(const Scenario& scenario, int z_nodes) {
  GeneratorSet gens;
  for (int x : scenario.alice_inputs) gens.alice.push_back(alice_op(x));
  for (int y : scenario.bob_inputs) gens.bob.push_back(bob_op(y));
  for (int y : scenario.ben_inputs) gens.ben.push_back(ben_op(y));
  gens.z_nodes = z_nodes;
  gens.key_input = scenario.generation_inputs.first;
  return gens;
}

std::vector<Monomial> monomial_basis(const Scenario& scenario, const LevelSpec& spec) {
  return monomial_basis(generator_set(scenario, spec.z_nodes), spec);
}

}  // namespace rbell
