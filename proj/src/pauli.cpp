// Copyright 2026 The noisetn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisetn/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace noisetn {

namespace {

const double kInvSqrt2 = 0.70710678118654752440084436210485;
const double kInvSqrt3 = 0.57735026918962576450914878050196;

Tensor make_pauli(int p) {
  Tensor t({2, 2});
  switch (p) {
    case 0:
      t.at({0, 0}) = 1.0;
      t.at({1, 1}) = 1.0;
      break;
    case 1:
      t.at({0, 1}) = 1.0;
      t.at({1, 0}) = 1.0;
      break;
    case 2:
      t.at({0, 1}) = cx(0.0, -1.0);
      t.at({1, 0}) = cx(0.0, 1.0);
      break;
    case 3:
      t.at({0, 0}) = 1.0;
      t.at({1, 1}) = -1.0;
      break;
    default:
      throw std::invalid_argument("pauli index out of range");
  }
  return t;
}

}  // namespace

int pauli_index(char c) {
  switch (c) {
    case 'I': case 'i': return 0;
    case 'X': case 'x': return 1;
    case 'Y': case 'y': return 2;
    case 'Z': case 'z': return 3;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
  }
}

char pauli_char(int p) {
  if (p < 0 || p > 3) throw std::invalid_argument("pauli index out of range");
  return kPauliChars[p];
}

std::vector<uint8_t> parse_pauli_string(const std::string& s) {
  std::vector<uint8_t> out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<uint8_t>(pauli_index(c)));
  return out;
}

const Tensor& pauli_matrix(int p) {
  static const Tensor table[4] = {make_pauli(0), make_pauli(1), make_pauli(2),
                                  make_pauli(3)};
  if (p < 0 || p > 3) throw std::invalid_argument("pauli index out of range");
  return table[p];
}

Tensor effect_matrix(int basis, int zeta) {
  if (basis < 0 || basis > 2) throw std::invalid_argument("basis must be X=0, Y=1 or Z=2");
  if (zeta != 1 && zeta != -1) throw std::invalid_argument("zeta must be +1 or -1");
  const Tensor& sigma = pauli_matrix(basis + 1);
  Tensor t({2, 2});
  for (int i = 0; i < 4; ++i)
    t[i] = 0.5 * (identity_matrix(2)[i] + static_cast<double>(zeta) * sigma[i]);
  return t;
}

Tensor sic_state(int alpha) {
  static const double bloch[4][3] = {{+1, +1, +1}, {+1, -1, -1}, {-1, +1, -1}, {-1, -1, +1}};
  if (alpha < 0 || alpha > 3) throw std::invalid_argument("SIC index must be 0..3");
  Tensor t({2, 2});
  t.at({0, 0}) = 1.0;
  t.at({1, 1}) = 1.0;
  for (int k = 0; k < 3; ++k) {
    const Tensor& sigma = pauli_matrix(k + 1);
    for (int i = 0; i < 4; ++i) t[i] += kInvSqrt3 * bloch[alpha][k] * sigma[i];
  }
  for (int i = 0; i < 4; ++i) t[i] *= 0.5;
  return t;
}

Tensor cnot_matrix() {
  Tensor t({4, 4});
  t.at({0, 0}) = 1.0;
  t.at({1, 1}) = 1.0;
  t.at({2, 3}) = 1.0;
  t.at({3, 2}) = 1.0;
  return t;
}

const Tensor& pauli_basis_change() {
  static const Tensor w = [] {
    Tensor t({4, 4});
    for (int p = 0; p < 4; ++p) {
      const Tensor& sigma = pauli_matrix(p);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          t.at({p, 2 * i + j}) = kInvSqrt2 * sigma.at({j, i});
    }
    return t;
  }();
  return w;
}

Tensor superop_of_unitary_1q(const Tensor& u) {
  if (u.rank() != 2 || u.dim(0) != 2 || u.dim(1) != 2)
    throw std::invalid_argument("superop_of_unitary_1q: 2x2 unitary required");
  Tensor s({4, 4});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          s.at({2 * i + j, 2 * a + b}) = u.at({i, a}) * std::conj(u.at({j, b}));
  return s;
}

Tensor vec_of_operator_1q(const Tensor& op, bool pauli_basis) {
  if (op.rank() != 2 || op.dim(0) != 2 || op.dim(1) != 2)
    throw std::invalid_argument("vec_of_operator_1q: 2x2 operator required");
  Tensor v({4});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v[2 * i + j] = op.at({i, j});
  if (!pauli_basis) return v;
  return tensordot(pauli_basis_change(), v, {1}, {0});
}

}  // namespace noisetn
