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

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "rbell/conic.hpp"
#include "rbell/detail/util.hpp"

namespace rbell {

namespace {

struct SdpaEntry {
  int k, blk, i, j;  // 1-based matrix indices, k = 0 is the objective
  double value;
  friend bool operator<(const SdpaEntry& a, const SdpaEntry& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.blk != b.blk) return a.blk < b.blk;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  }
};

// Collapses duplicate coordinates (SparseSymMatrix may hold repeated
// entries for one position) and drops exact zeros.
std::vector<SdpaEntry> collect(const ConicProblem& p) {
  std::vector<SdpaEntry> raw;
  auto push_psd = [&raw](int k, const SparseSymMatrix& m, double sign) {
    for (const auto& e : m.entries)
      raw.push_back({k, 1, e.row + 1, e.col + 1, sign * e.value});
  };
  auto push_lin = [&raw, &p](int k, const std::vector<std::pair<int, double>>& lin, double sign) {
    const int blk = p.psd_dim > 0 ? 2 : 1;
    for (const auto& [idx, v] : lin) raw.push_back({k, blk, idx + 1, idx + 1, sign * v});
  };

  // Objective slot: SDPA maximizes tr(F0 Y), our problem minimizes, so
  // F0 = -C.
  push_psd(0, p.objective_psd, -1.0);
  {
    std::vector<std::pair<int, double>> obj_lin;
    for (int k = 0; k < p.lin_dim; ++k)
      if (p.objective_lin[k] != 0.0) obj_lin.emplace_back(k, p.objective_lin[k]);
    push_lin(0, obj_lin, -1.0);
  }
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    push_psd(static_cast<int>(i) + 1, p.rows[i].psd, 1.0);
    push_lin(static_cast<int>(i) + 1, p.rows[i].lin, 1.0);
  }

  std::sort(raw.begin(), raw.end());
  std::vector<SdpaEntry> out;
  for (const auto& e : raw) {
    if (!out.empty() && out.back().k == e.k && out.back().blk == e.blk && out.back().i == e.i &&
        out.back().j == e.j) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const SdpaEntry& e) { return e.value == 0.0; });
  return out;
}

}  // namespace

void export_sdpa(const ConicProblem& problem, std::ostream& out) {
  problem.validate();
  const int nblocks = (problem.psd_dim > 0 ? 1 : 0) + (problem.lin_dim > 0 ? 1 : 0);
  out << problem.rows.size() << "\n";
  out << nblocks << "\n";
  bool first = true;
  if (problem.psd_dim > 0) {
    out << problem.psd_dim;
    first = false;
  }
  if (problem.lin_dim > 0) {
    if (!first) out << " ";
    out << -problem.lin_dim;
  }
  out << "\n";
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    if (i) out << " ";
    out << detail::format_g17(problem.rows[i].rhs);
  }
  out << "\n";
  for (const auto& e : collect(problem)) {
    out << e.k << " " << e.blk << " " << e.i << " " << e.j << " " << detail::format_g17(e.value)
        << "\n";
  }
}

void export_sdpa(const ConicProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_sdpa: cannot write " + path);
  export_sdpa(problem, out);
}

}  // namespace rbell
