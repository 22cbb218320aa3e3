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

#ifndef RBELL_QUADRATURE_HPP
#define RBELL_QUADRATURE_HPP

#include <vector>

namespace rbell {

/// Gauss-Radau rule on (0,1] with the right endpoint fixed at 1.
struct Quadrature {
  std::vector<double> nodes;    // ascending, last node exactly 1
  std::vector<double> weights;  // positive, sum to 1
  int size() const { return static_cast<int>(nodes.size()); }
};

/// m-point Gauss-Radau nodes and weights for the unit weight on [0,1],
/// exact for polynomials of degree <= 2m-2, with t_m = 1. m = 0 is
/// rejected.
Quadrature gauss_radau(int m);

}  // namespace rbell

#endif  // RBELL_QUADRATURE_HPP
