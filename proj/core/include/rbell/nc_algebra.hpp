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

#ifndef RBELL_NC_ALGEBRA_HPP
#define RBELL_NC_ALGEBRA_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rbell {

/// Operator families of the routed-Bell relaxation.
///
/// A acts on Alice's subsystem, M on the register Bob receives, N on the
/// joint register-plus-eavesdropper space (Ben's reformulated operators),
/// and Z/Zdag are the non-Hermitian auxiliary operators of the entropy
/// objective, acting on the eavesdropper's side.
enum class Family : std::uint8_t { A = 0, M = 1, N = 2, Z = 3, Zdag = 4 };

bool is_projector_family(Family f);
bool is_z_family(Family f);

/// One generator of the free *-algebra.
///
/// For A/M/N: `input` is the measurement setting and `outcome` the
/// (independent) outcome index. For Z/Zdag: `input` is the 1-based
/// quadrature node and `outcome` the key outcome it is attached to.
struct Generator {
  Family family = Family::A;
  int input = 0;
  int outcome = 0;

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

Generator alice_op(int input, int outcome = 0);
Generator bob_op(int input, int outcome = 0);
Generator ben_op(int input, int outcome = 0);
Generator z_op(int key_outcome, int node);
Generator zdag_op(int key_outcome, int node);

/// Whether two generators commute under the routed-Bell tensor structure:
/// A commutes with everything else, M commutes with A and Z/Zdag, while
/// M-N, N-Z and Z-Z pairs do not commute. Same-family generators commute
/// only when they share the input (projectors of one measurement).
bool commutes(const Generator& a, const Generator& b);

/// A word over the generators in canonical form. The empty word is the
/// identity; a distinguished zero word absorbs orthogonality collisions
/// (same family and input, different outcomes).
class Monomial {
 public:
  Monomial() = default;  // identity

  static Monomial identity();
  static Monomial zero();
  static Monomial single(const Generator& g);

  /// Canonical form of an arbitrary word: sorts commuting neighbours by
  /// the fixed generator order, collapses projector idempotents and maps
  /// orthogonal projector collisions to the zero word. Deterministic and
  /// idempotent.
  static Monomial canonicalize(std::span<const Generator> word);

  bool is_zero() const { return zero_; }
  bool is_identity() const { return !zero_ && word_.empty(); }
  int degree() const { return static_cast<int>(word_.size()); }
  const std::vector<Generator>& word() const { return word_; }

  /// Word reversal with Z <-> Zdag, recanonicalized. Involutive.
  Monomial adjoint() const;

  /// Whether the canonical word equals its own adjoint.
  bool is_hermitian_word() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial& a, const Monomial& b) = default;

  /// Stable debug rendering, e.g. "A[0|0].Z[0,1]"; "1" for the identity
  /// and "0" for the zero word.
  std::string render() const;

  std::size_t hash() const;

 private:
  std::vector<Generator> word_;
  bool zero_ = false;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Inventory of generators for basis construction.
struct GeneratorSet {
  std::vector<Generator> alice;  // one per Alice input
  std::vector<Generator> bob;    // one per Bob test input
  std::vector<Generator> ben;    // one per Ben input
  int z_nodes = 0;               // quadrature nodes; Z_{k,i}, Zdag_{k,i} for k in {0,1}
  int key_input = 0;             // Alice input used in generation rounds

  std::vector<Generator> measurement_generators() const;
  std::vector<Generator> z_generators() const;  // Z then Zdag, by (node, key)
};

/// Relaxation-level selector: NPA level for measurement words plus the
/// optional Z-word families.
struct LevelSpec {
  int level = 2;
  int z_nodes = 0;            // 0 disables the Z family entirely
  bool mix_meas_z = true;     // all length-2 measurement x Z words
  bool zz_same_node = true;   // all length-2 Z words sharing a node
  bool mix_meas_zz = false;   // length-3 measurement x (same-node Z words)

  /// Text form "L[+mz][+zz][+mzz]" or "L+az" for the reduced mixing set
  /// (key-measurement x Z only). Examples: "2+mz+zz" (default), "1+az".
  static LevelSpec parse(const std::string& text);
  std::string render() const;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Deduplicated canonical monomial basis: identity, measurement words up
/// to the NPA level, and the selected Z-word families. Words needed by
/// the entropy objective (key-measurement x Z products) are always
/// included when the Z family is active. Ordering is stable: by degree,
/// then lexicographically in the generator order.
std::vector<Monomial> monomial_basis(const GeneratorSet& gens, const LevelSpec& spec);

}  // namespace rbell

#endif  // RBELL_NC_ALGEBRA_HPP
