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

#include "noisetn/conversion.hpp"

#include <stdexcept>

namespace noisetn {

SuperOpMpo lpdo_to_superop(const Lpdo& channel) {
  validate(channel);
  SuperOpMpo out;
  out.n = channel.n;
  out.basis = Basis::Computational;
  out.sites.reserve(static_cast<size_t>(channel.n));
  for (const Tensor& a : channel.sites) {
    // S[(mu nu)L, (b,b'), (a,a'), (mu nu)R] = sum_k A[b,a,..,k] conj(A[b',a',..,k])
    Tensor t = tensordot(a, conjugated(a), {4}, {4});
    // legs: [b,a,muL,muR, b',a',nuL,nuR]
    t = permuted(t, {2, 6, 0, 4, 1, 5, 3, 7});  // [muL,nuL, b,b', a,a', muR,nuR]
    out.sites.push_back(reshaped(std::move(t), {a.dim(2) * a.dim(2), 4, 4,
                                                a.dim(3) * a.dim(3)}));
  }
  return out;
}

namespace {

SuperOpMpo change_basis(const SuperOpMpo& m, Basis target) {
  const Tensor& w = pauli_basis_change();
  Tensor fwd = (target == Basis::Pauli) ? w : conjugated(permuted(w, {1, 0}));
  SuperOpMpo out;
  out.n = m.n;
  out.basis = target;
  out.sites.reserve(m.sites.size());
  for (const Tensor& s : m.sites) {
    Tensor t = tensordot(fwd, s, {1}, {1});          // [o', l, i, r]
    t = tensordot(t, conjugated(fwd), {2}, {1});     // [o', l, r, i']
    out.sites.push_back(permuted(t, {1, 0, 3, 2}));  // [l, o', i', r]
  }
  return out;
}

}  // namespace

SuperOpMpo to_pauli_basis(const SuperOpMpo& m) {
  if (m.basis == Basis::Pauli)
    throw std::invalid_argument("to_pauli_basis: MPO is already in the Pauli basis");
  return change_basis(m, Basis::Pauli);
}

SuperOpMpo to_computational_basis(const SuperOpMpo& m) {
  if (m.basis == Basis::Computational)
    throw std::invalid_argument("to_computational_basis: MPO is already computational");
  return change_basis(m, Basis::Computational);
}

double ptm_coefficient(const SuperOpMpo& m, const std::string& p_out,
                       const std::string& p_in) {
  if (m.basis != Basis::Pauli)
    throw std::invalid_argument("ptm_coefficient: Pauli-basis MPO required");
  std::vector<uint8_t> out_letters = parse_pauli_string(p_out);
  std::vector<uint8_t> in_letters = parse_pauli_string(p_in);
  if (static_cast<int>(out_letters.size()) != m.n ||
      static_cast<int>(in_letters.size()) != m.n)
    throw std::invalid_argument("ptm_coefficient: Pauli string length != n");

  Tensor env = identity_matrix(1);
  for (int j = 0; j < m.n; ++j) {
    const Tensor& s = m.sites[static_cast<size_t>(j)];
    const int64_t bl = s.dim(0), br = s.dim(3);
    const int64_t o = out_letters[static_cast<size_t>(j)];
    const int64_t i = in_letters[static_cast<size_t>(j)];
    Tensor slice({bl, br});
    for (int64_t l = 0; l < bl; ++l)
      for (int64_t r = 0; r < br; ++r)
        slice[l * br + r] = s[((l * 4 + o) * 4 + i) * br + r];
    env = matmul(env, slice);
  }
  return env[0].real();
}

SuperOpMpo lpdo_to_pauli_superop(const Lpdo& channel) {
  return to_pauli_basis(lpdo_to_superop(channel));
}

}  // namespace noisetn
