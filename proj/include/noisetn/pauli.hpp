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

#ifndef NOISETN_PAULI_HPP
#define NOISETN_PAULI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "noisetn/tensor.hpp"

namespace noisetn {

// Pauli letters are indexed I=0, X=1, Y=2, Z=3 throughout.
// Measurement bases are indexed X=0, Y=1, Z=2.

inline constexpr char kPauliChars[5] = "IXYZ";

int pauli_index(char c);           // 'I'/'X'/'Y'/'Z' -> 0..3, else throws
char pauli_char(int p);
std::vector<uint8_t> parse_pauli_string(const std::string& s);

// True when two single-qubit Paulis anticommute (both non-identity, distinct).
inline bool pauli_anticommute(int p, int q) { return p != 0 && q != 0 && p != q; }

// 2x2 building blocks.
const Tensor& pauli_matrix(int p);                  // sigma_p
Tensor effect_matrix(int basis, int zeta);          // (I + zeta*sigma)/2, basis in {X,Y,Z}
Tensor sic_state(int alpha);                        // Eq.-of-the-tetrahedron SIC states
Tensor cnot_matrix();                               // 4x4, control = first (left) qubit

// Vectorization convention: a 2x2 operator rho maps to the length-4 vector
// v[2*i + j] = rho_{ij} (row-major). A Kraus action K rho K^dag is then the
// matrix K (x) conj(K) on v. The "Pauli basis" is the orthonormal operator
// basis sigma_p / sqrt(2).

// 4x4 unitary W with W[p, (i,j)] = (sigma_p / sqrt(2))_{j i}; maps row-major
// vectorized operators to their normalized-Pauli components.
const Tensor& pauli_basis_change();

// Superoperator (in the row-major vectorized convention above) of a
// single-qubit unitary: U (x) conj(U), 4x4, computational basis.
Tensor superop_of_unitary_1q(const Tensor& u);

// Vectorized forms of common operators (length-4 tensors, given basis).
Tensor vec_of_operator_1q(const Tensor& op, bool pauli_basis);

}  // namespace noisetn

#endif  // NOISETN_PAULI_HPP
