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

#ifndef NOISETN_ORACLE_HPP
#define NOISETN_ORACLE_HPP

#include <vector>

#include "noisetn/lpdo.hpp"
#include "noisetn/mpo.hpp"
#include "noisetn/noise_models.hpp"

// Dense reference implementations, deliberately independent of the tensor
// network contraction paths: channels are built by Kronecker embedding and
// plain matrix algebra, and every TN-side operation is cross-checked against
// them in the tests and the acceptance suite.
//
// Dense superoperators use the per-site-grouped vectorization: the row index
// of a 4^n x 4^n matrix is sum_j 4^{n-1-j} (2 i_j + j_j) with i (j) the ket
// (bra) bit of site j. This matches what densifying a SuperOpMpo produces.
namespace noisetn::oracle {

// Largest n accepted without the explicit opt-in flag.
inline constexpr int kMaxQubits = 5;

void check_size(int n, bool allow_n6 = false);

// ---- dense building blocks --------------------------------------------------

Tensor pauli_string_matrix(const std::vector<uint8_t>& letters);  // 2^n x 2^n
Tensor cnot_layer_unitary(int n, Parity parity);                  // 2^n x 2^n
Tensor superop_of_kraus(const std::vector<Tensor>& kraus);        // 4^n x 4^n
Tensor superop_to_pauli(const Tensor& s);                         // basis rotation
Tensor vec_interleaved(const Tensor& op);                         // 2^m x 2^m -> 4^m
Tensor choi_matrix(const Tensor& superop_computational);          // 4^n x 4^n

// Enumerated global Kraus operators of an LPDO (chi_kappa^n of them).
std::vector<Tensor> dense_kraus_operators(const Lpdo& channel);

// ---- module oracles ---------------------------------------------------------

Tensor dense_superoperator(const NoiseModelSpec& spec, Basis basis, bool allow_n6 = false);
Tensor dense_superoperator(const Lpdo& channel, Basis basis, bool allow_n6 = false);
Tensor dense_superoperator(const SuperOpMpo& mpo, Basis basis, bool allow_n6 = false);

Tensor dense_state(const StateMpo& rho);      // 2^n x 2^n
Tensor dense_vec(const VecMps& v);            // 4^n, in v's basis

// Kraus-sum application of an LPDO to a dense density matrix.
Tensor dense_lpdo_apply(const Lpdo& channel, const Tensor& rho, bool allow_n6 = false);

// Exact outcome distribution of one tomographic setting: SIC inputs, the
// ideal CNOT layer (even parity; identity when n == 1), the noise channel,
// then projective Pauli measurements. Outcomes are indexed by bits, qubit 0
// most significant, bit 0 meaning zeta = +1.
std::vector<double> dense_born_distribution(const NoiseModelSpec& spec,
                                            const std::vector<uint8_t>& alpha,
                                            const std::vector<uint8_t>& beta,
                                            bool allow_n6 = false);

// Matrix inverse with a condition-number guard (throws above 1e12).
Tensor dense_inverse(const Tensor& m);

}  // namespace noisetn::oracle

#endif  // NOISETN_ORACLE_HPP
