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

#include "rbell/nc_algebra.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rbell {

bool is_projector_family(Family f) {
  return f == Family::A || f == Family::M || f == Family::N;
}

bool is_z_family(Family f) { return f == Family::Z || f == Family::Zdag; }

Generator alice_op(int input, int outcome) { return {Family::A, input, outcome}; }
Generator bob_op(int input, int outcome) { return {Family::M, input, outcome}; }
Generator ben_op(int input, int outcome) { return {Family::N, input, outcome}; }
Generator z_op(int key_outcome, int node) { return {Family::Z, node, key_outcome}; }
Generator zdag_op(int key_outcome, int node) { return {Family::Zdag, node, key_outcome}; }

bool commutes(const Generator& a, const Generator& b) {
  if (a == b) return true;
  Family f = a.family, g = b.family;
  if (f == g) {
    // Projectors of one measurement commute; different inputs of the same
    // party do not. Distinct Z-type generators never commute.
    if (is_projector_family(f)) return a.input == b.input;
    return false;
  }
  if (f > g) std::swap(f, g);
  switch (f) {
    case Family::A:
      return true;  // Alice's subsystem is separate from everything else
    case Family::M:
      return g == Family::Z || g == Family::Zdag;  // M-N share Bob's register
    case Family::N:
      return false;  // N overlaps both Bob's register and Eve's side
    case Family::Z:
      return false;  // Z-Zdag act on Eve's side
    default:
      return false;
  }
}

Monomial Monomial::identity() { return Monomial{}; }

Monomial Monomial::zero() {
  Monomial m;
  m.zero_ = true;
  return m;
}

Monomial Monomial::single(const Generator& g) {
  Monomial m;
  m.word_ = {g};
  return m;
}

Monomial Monomial::canonicalize(std::span<const Generator> word) {
  std::vector<Generator> w(word.begin(), word.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const Generator& a = w[i];
      const Generator& b = w[i + 1];
      if (is_projector_family(a.family) && a.family == b.family && a.input == b.input) {
        if (a.outcome == b.outcome) {
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i) + 1);  // P*P = P
          changed = true;
          break;
        }
        return Monomial::zero();  // orthogonal outcomes of one measurement
      }
      if (commutes(a, b) && b < a) {
        std::swap(w[i], w[i + 1]);
        changed = true;
      }
    }
  }
  Monomial m;
  m.word_ = std::move(w);
  return m;
}

Monomial Monomial::adjoint() const {
  if (zero_) return zero();
  std::vector<Generator> rev(word_.rbegin(), word_.rend());
  for (Generator& g : rev) {
    if (g.family == Family::Z) {
      g.family = Family::Zdag;
    } else if (g.family == Family::Zdag) {
      g.family = Family::Z;
    }
  }
  return canonicalize(rev);
}

bool Monomial::is_hermitian_word() const { return *this == adjoint(); }

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.is_zero() || b.is_zero()) return Monomial::zero();
  std::vector<Generator> w = a.word_;
  w.insert(w.end(), b.word_.begin(), b.word_.end());
  return Monomial::canonicalize(w);
}

std::string Monomial::render() const {
  if (zero_) return "0";
  if (word_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < word_.size(); ++i) {
    const Generator& g = word_[i];
    if (i) out += '.';
    switch (g.family) {
      case Family::A:
        out += "A[" + std::to_string(g.outcome) + "|" + std::to_string(g.input) + "]";
        break;
      case Family::M:
        out += "M[" + std::to_string(g.outcome) + "|" + std::to_string(g.input) + "]";
        break;
      case Family::N:
        out += "N[" + std::to_string(g.outcome) + "|" + std::to_string(g.input) + "]";
        break;
      case Family::Z:
        out += "Z[" + std::to_string(g.outcome) + "," + std::to_string(g.input) + "]";
        break;
      case Family::Zdag:
        out += "Zd[" + std::to_string(g.outcome) + "," + std::to_string(g.input) + "]";
        break;
    }
  }
  return out;
}

std::size_t Monomial::hash() const {
  // FNV-1a over the generator stream.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(zero_ ? 7u : 1u);
  for (const Generator& g : word_) {
    mix(static_cast<std::uint64_t>(g.family));
    mix(static_cast<std::uint64_t>(g.input) + 0x9e37u);
    mix(static_cast<std::uint64_t>(g.outcome) + 0x79b9u);
  }
  return static_cast<std::size_t>(h);
}

std::vector<Generator> GeneratorSet::measurement_generators() const {
  std::vector<Generator> out = alice;
  out.insert(out.end(), bob.begin(), bob.end());
  out.insert(out.end(), ben.begin(), ben.end());
  return out;
}

std::vector<Generator> GeneratorSet::z_generators() const {
  std::vector<Generator> out;
  for (int node = 1; node <= z_nodes; ++node) {
    for (int key = 0; key < 2; ++key) out.push_back(z_op(key, node));
  }
  for (int node = 1; node <= z_nodes; ++node) {
    for (int key = 0; key < 2; ++key) out.push_back(zdag_op(key, node));
  }
  return out;
}

LevelSpec LevelSpec::parse(const std::string& text) {
  LevelSpec spec;
  spec.mix_meas_z = false;
  spec.zz_same_node = false;
  spec.mix_meas_zz = false;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == '+') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument("empty level spec");
  spec.level = std::stoi(parts[0]);
  if (spec.level < 1) throw std::invalid_argument("NPA level must be >= 1");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p == "mz") {
      spec.mix_meas_z = true;
    } else if (p == "az") {
      spec.mix_meas_z = false;  // objective-support words only
    } else if (p == "zz") {
      spec.zz_same_node = true;
    } else if (p == "mzz") {
      spec.mix_meas_zz = true;
    } else if (!p.empty()) {
      throw std::invalid_argument("unknown level-spec token: " + p);
    }
  }
  return spec;
}

std::string LevelSpec::render() const {
  std::string out = std::to_string(level);
  if (mix_meas_z)
    out += "+mz";
  else
    out += "+az";
  if (zz_same_node) out += "+zz";
  if (mix_meas_zz) out += "+mzz";
  return out;
}

namespace {

struct BasisOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a < b;
  }
};

}  // namespace

std::vector<Monomial> monomial_basis(const GeneratorSet& gens, const LevelSpec& spec) {
  std::set<Monomial, BasisOrder> basis;
  basis.insert(Monomial::identity());

  const std::vector<Generator> meas = gens.measurement_generators();

  // Measurement words up to the NPA level.
  std::vector<Monomial> frontier = {Monomial::identity()};
  for (int len = 1; len <= spec.level; ++len) {
    std::vector<Monomial> next;
    for (const Monomial& w : frontier) {
      for (const Generator& g : meas) {
        Monomial prod = w * Monomial::single(g);
        if (prod.is_zero() || prod.degree() != len) continue;
        if (basis.insert(prod).second) next.push_back(prod);
      }
    }
    frontier = std::move(next);
  }

  const int m = spec.z_nodes;
  if (m > 0) {
    std::vector<Generator> zgens;
    for (int node = 1; node <= m; ++node) {
      for (int key = 0; key < 2; ++key) {
        zgens.push_back(z_op(key, node));
        zgens.push_back(zdag_op(key, node));
      }
    }
    for (const Generator& z : zgens) basis.insert(Monomial::single(z));

    // The entropy objective needs key-measurement x Z products regardless
    // of the mixing flag.
    std::vector<Generator> mix_left;
    if (spec.mix_meas_z) {
      mix_left = meas;
    } else {
      for (const Generator& g : gens.alice) {
        if (g.input == gens.key_input) mix_left.push_back(g);
      }
    }
    for (const Generator& g : mix_left) {
      for (const Generator& z : zgens) {
        basis.insert(Monomial::single(g) * Monomial::single(z));
        basis.insert(Monomial::single(z) * Monomial::single(g));
      }
    }

    if (spec.zz_same_node) {
      for (int node = 1; node <= m; ++node) {
        std::vector<Generator> per_node;
        for (int key = 0; key < 2; ++key) {
          per_node.push_back(z_op(key, node));
          per_node.push_back(zdag_op(key, node));
        }
        for (const Generator& z1 : per_node) {
          for (const Generator& z2 : per_node) {
            basis.insert(Monomial::single(z1) * Monomial::single(z2));
          }
        }
      }
    }

    if (spec.mix_meas_zz) {
      for (const Generator& g : meas) {
        for (int node = 1; node <= m; ++node) {
          std::vector<Generator> per_node;
          for (int key = 0; key < 2; ++key) {
            per_node.push_back(z_op(key, node));
            per_node.push_back(zdag_op(key, node));
          }
          for (const Generator& z1 : per_node) {
            for (const Generator& z2 : per_node) {
              Monomial zz = Monomial::single(z1) * Monomial::single(z2);
              basis.insert(Monomial::single(g) * zz);
              basis.insert(zz * Monomial::single(g));
            }
          }
        }
      }
    }
  }

  return {basis.begin(), basis.end()};
}

}  // namespace rbell
