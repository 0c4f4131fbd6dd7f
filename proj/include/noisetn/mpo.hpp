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

#ifndef NOISETN_MPO_HPP
#define NOISETN_MPO_HPP

#include <cstdint>
#include <vector>

#include "noisetn/pauli.hpp"
#include "noisetn/tensor.hpp"

namespace noisetn {

// Basis tag for 4-dimensional vectorized-operator legs.
enum class Basis : uint8_t { Computational = 0, Pauli = 1 };

// Density matrix (or any 2^n x 2^n operator) in MPO form.
// Site tensors carry legs [bond_left, ket(2), bra(2), bond_right]; boundary
// bonds have dimension 1.
struct StateMpo {
  int n = 0;
  std::vector<Tensor> sites;
};

// Same structure as StateMpo, used when the chain represents a generic
// operator (e.g. the Kraus gram sum of an LPDO) rather than a state.
using OperatorMpo = StateMpo;

// Vectorized operator as an MPS with physical dimension 4 per site:
// [bond_left, phys(4), bond_right]. In the computational basis phys indexes
// (ket, bra) row-major; in the Pauli basis it indexes {I,X,Y,Z}/sqrt(2)
// components.
struct VecMps {
  int n = 0;
  Basis basis = Basis::Computational;
  std::vector<Tensor> sites;
};

// Superoperator as an MPO with legs [bond_left, out(4), in(4), bond_right].
struct SuperOpMpo {
  int n = 0;
  Basis basis = Basis::Computational;
  std::vector<Tensor> sites;
};

// Product POVM effect: one 2x2 Hermitian rank-1 projector per qubit.
struct ProductEffect {
  std::vector<Tensor> factors;
  int n() const { return static_cast<int>(factors.size()); }
};

ProductEffect product_effect(const std::vector<uint8_t>& beta,
                             const std::vector<int8_t>& zeta);

// ---- structural checks ----------------------------------------------------

void validate_chain(const std::vector<Tensor>& sites, int64_t middle_dims,
                    const char* what);
void validate(const StateMpo& m);
void validate(const VecMps& m);
void validate(const SuperOpMpo& m);

int max_bond(const std::vector<Tensor>& sites);

// ---- constructors ----------------------------------------------------------

StateMpo product_state_mpo(const std::vector<Tensor>& local_ops);  // bond 1
SuperOpMpo identity_superop(int n, Basis basis);
VecMps product_vec(const std::vector<Tensor>& local_vecs, Basis basis);

// ---- canonicalization / truncation -----------------------------------------

struct TruncationStats {
  double discarded_weight = 0.0;  // total sum of discarded squared singular values
  int max_bond = 1;
};

// Generic chain compression: left-canonical QR sweep followed by a
// right-to-left SVD truncation. `chi_max` bounds the kept rank per bond and
// `cutoff` bounds the discarded squared singular value weight per bond
// (absolute). chi_max <= 0 means unbounded.
TruncationStats compress_chain(std::vector<Tensor>& sites, int chi_max, double cutoff);

StateMpo svd_truncate(StateMpo m, int chi_max, double cutoff,
                      TruncationStats* stats = nullptr);
SuperOpMpo svd_truncate(SuperOpMpo m, int chi_max, double cutoff,
                        TruncationStats* stats = nullptr);
VecMps svd_truncate(VecMps m, int chi_max, double cutoff,
                    TruncationStats* stats = nullptr);

// ---- inner products and norms ----------------------------------------------

// Frobenius inner product Tr[a^dag b] of two chains with matching middle legs.
cx chain_inner(const std::vector<Tensor>& a, const std::vector<Tensor>& b);

cx mpo_inner(const SuperOpMpo& a, const SuperOpMpo& b);
double mpo_norm2(const SuperOpMpo& a);
cx op_inner(const OperatorMpo& a, const OperatorMpo& b);
cx vec_inner(const VecMps& a, const VecMps& b);
double vec_norm2(const VecMps& a);

// Reconstruction error Delta = |a - b|_F^2 / 2^(2n), computed entirely through
// MPO inner products. Requires matching n and basis tags.
double frobenius_error(const SuperOpMpo& a, const SuperOpMpo& b);

// ---- algebra ---------------------------------------------------------------

// Composition after . before (i.e. `before` acts first). Bond dimensions
// multiply; no truncation.
SuperOpMpo compose(const SuperOpMpo& after, const SuperOpMpo& before);

// Apply a superoperator MPO to a vectorized state; bonds multiply, no
// truncation.
VecMps apply_superop(const SuperOpMpo& op, const VecMps& v);

// Trace of an operator MPO: contract ket=bra on every site.
cx mpo_trace(const StateMpo& m);

// Born-rule expectation Tr[rho (x)_j Pi_j].
double expectation(const StateMpo& rho, const ProductEffect& effect);

// ---- state representation changes -------------------------------------------

VecMps to_vec(const StateMpo& rho, Basis basis);
StateMpo to_state(const VecMps& v);
VecMps change_vec_basis(const VecMps& v, Basis target);

// Per-site vectorized trace functional: contracting it with a VecMps site leg
// performs the partial trace of that qubit.
Tensor trace_vector(Basis basis);

// Apply a two-qubit gate u (4x4, acting on sites j, j+1) to a density-matrix
// MPO as rho -> u rho u^dag, re-splitting with an SVD (cutoff 0 keeps
// everything up to numerical rank).
void apply_two_qubit_gate(StateMpo& rho, const Tensor& u, int site, int chi_max,
                          double cutoff);

}  // namespace noisetn

#endif  // NOISETN_MPO_HPP
