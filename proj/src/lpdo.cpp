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

#include "noisetn/lpdo.hpp"

#include <stdexcept>
#include <string>

namespace noisetn {

void validate(const Lpdo& l) {
  if (static_cast<int>(l.sites.size()) != l.n || l.n < 1)
    throw std::invalid_argument("Lpdo: site count != n");
  for (size_t j = 0; j < l.sites.size(); ++j) {
    const Tensor& s = l.sites[j];
    if (s.rank() != 5 || s.dim(0) != 2 || s.dim(1) != 2)
      throw std::invalid_argument("Lpdo: site must have legs [2,2,muL,muR,kappa]");
    if (j == 0 && s.dim(2) != 1)
      throw std::invalid_argument("Lpdo: left boundary bond must be 1");
    if (j + 1 == l.sites.size() && s.dim(3) != 1)
      throw std::invalid_argument("Lpdo: right boundary bond must be 1");
    if (j + 1 < l.sites.size() && s.dim(3) != l.sites[j + 1].dim(2))
      throw std::invalid_argument("Lpdo: adjacent bonds mismatch at site " + std::to_string(j));
    if (!s.all_finite())
      throw std::invalid_argument("Lpdo: non-finite entries at site " + std::to_string(j));
  }
}

Lpdo identity_lpdo(int n) {
  if (n < 1) throw std::invalid_argument("identity_lpdo: n >= 1 required");
  Lpdo l;
  l.n = n;
  l.chi_b = 1;
  l.chi_kappa = 1;
  for (int j = 0; j < n; ++j) {
    Tensor s({2, 2, 1, 1, 1});
    s.at({0, 0, 0, 0, 0}) = 1.0;
    s.at({1, 1, 0, 0, 0}) = 1.0;
    l.sites.push_back(std::move(s));
  }
  return l;
}

Lpdo fully_depolarizing_lpdo(int n) {
  if (n < 1) throw std::invalid_argument("fully_depolarizing_lpdo: n >= 1 required");
  Lpdo l;
  l.n = n;
  l.chi_b = 1;
  l.chi_kappa = 4;
  for (int j = 0; j < n; ++j) {
    Tensor s({2, 2, 1, 1, 4});
    for (int kappa = 0; kappa < 4; ++kappa) {
      const Tensor& sigma = pauli_matrix(kappa);
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a)
          s.at({b, a, 0, 0, kappa}) = 0.5 * sigma.at({b, a});
    }
    l.sites.push_back(std::move(s));
  }
  return l;
}

StateMpo lpdo_apply(const Lpdo& channel, const StateMpo& state) {
  if (channel.n != state.n)
    throw std::invalid_argument("lpdo_apply: qubit count mismatch");
  StateMpo out;
  out.n = state.n;
  out.sites.reserve(static_cast<size_t>(state.n));
  for (int j = 0; j < state.n; ++j) {
    const Tensor& a = channel.sites[static_cast<size_t>(j)];  // [b,a,muL,muR,k]
    const Tensor& r = state.sites[static_cast<size_t>(j)];    // [lL,a,a',lR]
    Tensor x = tensordot(a, r, {1}, {1});  // [b,muL,muR,k, lL,a',lR]
    Tensor y = tensordot(x, conjugated(a), {3, 5}, {4, 1});
    // y legs: [b,muL,muR,lL,lR, b',nuL,nuR]
    y = permuted(y, {1, 3, 6, 0, 5, 2, 4, 7});  // [muL,lL,nuL, b,b', muR,lR,nuR]
    const int64_t bl = a.dim(2) * r.dim(0) * a.dim(2);
    const int64_t br = a.dim(3) * r.dim(3) * a.dim(3);
    out.sites.push_back(reshaped(std::move(y), {bl, 2, 2, br}));
  }
  return out;
}

cx lpdo_trace(const Lpdo& channel) {
  Tensor env = identity_matrix(1);
  for (const Tensor& a : channel.sites) {
    // sum_{kappa,b,a} A[b,a,muL,muR,k] conj(A[b,a,nuL,nuR,k])
    Tensor t = tensordot(a, conjugated(a), {0, 1, 4}, {0, 1, 4});  // [muL,muR,nuL,nuR]
    t = permuted(t, {0, 2, 1, 3});                                 // [muL,nuL,muR,nuR]
    env = matmul(env, reshaped(std::move(t), {a.dim(2) * a.dim(2), a.dim(3) * a.dim(3)}));
  }
  return env[0];
}

OperatorMpo kraus_gram_mpo(const Lpdo& channel) {
  OperatorMpo out;
  out.n = channel.n;
  out.sites.reserve(static_cast<size_t>(channel.n));
  for (const Tensor& a : channel.sites) {
    // T[(mu nu)L, x, y, (mu nu)R] = sum_{b,k} conj(A[b,x,nuL,nuR,k]) A[b,y,muL,muR,k]
    Tensor t = tensordot(conjugated(a), a, {0, 4}, {0, 4});  // [x,nuL,nuR, y,muL,muR]
    t = permuted(t, {4, 1, 0, 3, 5, 2});                     // [muL,nuL, x, y, muR,nuR]
    out.sites.push_back(reshaped(std::move(t),
                                 {a.dim(2) * a.dim(2), 2, 2, a.dim(3) * a.dim(3)}));
  }
  return out;
}

}  // namespace noisetn
