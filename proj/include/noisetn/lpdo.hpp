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

#ifndef NOISETN_LPDO_HPP
#define NOISETN_LPDO_HPP

#include <vector>

#include "noisetn/mpo.hpp"
#include "noisetn/tensor.hpp"

namespace noisetn {

// Locally-purified density operator: a trainable tensor-network channel.
//
// Site tensors carry legs [b(2), a(2), mu_left, mu_right, kappa]: b is the
// output (post-channel) physical index, a the input one, mu the virtual bonds
// and kappa the local Kraus (purification) index. The channel acts as
// rho -> sum_kappa K_kappa rho K_kappa^dag, where K_kappa is the bond
// contraction of per-site 2x2 blocks. Complete positivity holds by
// construction; trace preservation does not (it is trained for).
struct Lpdo {
  int n = 0;
  int chi_b = 1;
  int chi_kappa = 1;
  std::vector<Tensor> sites;
};

void validate(const Lpdo& l);

// Single-Kraus identity channel (chi_b = chi_kappa = 1).
Lpdo identity_lpdo(int n);

// n=2 building block used in tests: the fully depolarizing channel
// rho -> Tr[rho] I / 2^n as an LPDO with chi_kappa = 4 per site.
Lpdo fully_depolarizing_lpdo(int n);

// Channel application N[rho]; output bond = chi_b^2 * input bond, no
// truncation.
StateMpo lpdo_apply(const Lpdo& channel, const StateMpo& state);

// Tr[Lambda] = sum_kappa Tr[K_kappa K_kappa^dag].
cx lpdo_trace(const Lpdo& channel);

// Partial trace over the output legs, Tr_out[Lambda] = sum_kappa
// K_kappa^dag K_kappa, as an operator MPO with bond chi_b^2. Equals the
// identity exactly for trace-preserving channels.
OperatorMpo kraus_gram_mpo(const Lpdo& channel);

}  // namespace noisetn

#endif  // NOISETN_LPDO_HPP
