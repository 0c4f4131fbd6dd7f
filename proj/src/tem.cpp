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

#include "noisetn/tem.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "noisetn/rng.hpp"

namespace noisetn {

namespace {

struct CliffordTable {
  std::vector<Tensor> unitary;         // phase-normalized 2x2
  std::vector<Tensor> unitary_dagger;
  std::vector<std::array<PauliImage, 4>> action;
};

Tensor normalize_phase(Tensor u) {
  for (int64_t i = 0; i < 4; ++i) {
    if (std::abs(u[i]) > 1e-9) {
      cx phase = u[i] / std::abs(u[i]);
      for (int64_t k = 0; k < 4; ++k) u[k] *= std::conj(phase);
      break;
    }
  }
  return u;
}

bool matrices_equal(const Tensor& a, const Tensor& b) {
  for (int64_t i = 0; i < 4; ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  return true;
}

const CliffordTable& clifford_table() {
  static const CliffordTable table = [] {
    const double s = 0.70710678118654752440;
    Tensor h({2, 2});
    h.at({0, 0}) = s;
    h.at({0, 1}) = s;
    h.at({1, 0}) = s;
    h.at({1, 1}) = -s;
    Tensor sgate({2, 2});
    sgate.at({0, 0}) = 1.0;
    sgate.at({1, 1}) = cx(0.0, 1.0);

    // Breadth-first closure of <H, S> modulo global phase.
    std::vector<Tensor> elems = {normalize_phase(identity_matrix(2))};
    for (size_t cursor = 0; cursor < elems.size(); ++cursor) {
      for (const Tensor* g : {&h, &sgate}) {
        Tensor next = normalize_phase(matmul(*g, elems[cursor]));
        bool known = false;
        for (const Tensor& e : elems)
          if (matrices_equal(e, next)) {
            known = true;
            break;
          }
        if (!known) elems.push_back(std::move(next));
      }
    }
    if (static_cast<int>(elems.size()) != kCliffordCount)
      throw std::logic_error("single-qubit Clifford closure has wrong size");

    CliffordTable t;
    t.unitary = elems;
    for (const Tensor& u : elems) {
      t.unitary_dagger.push_back(normalize_phase(conjugated(permuted(u, {1, 0}))));
      std::array<PauliImage, 4> act{};
      for (int p = 0; p < 4; ++p) {
        Tensor m = matmul(matmul(u, pauli_matrix(p)), conjugated(permuted(u, {1, 0})));
        bool found = false;
        for (int q = 0; q < 4 && !found; ++q) {
          cx overlap = 0.0;  // Tr[sigma_q m] / 2
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              overlap += pauli_matrix(q).at({j, i}) * m.at({i, j});
          overlap *= 0.5;
          if (std::abs(std::abs(overlap) - 1.0) < 1e-9) {
            act[static_cast<size_t>(p)] = {static_cast<uint8_t>(q),
                                           static_cast<int8_t>(overlap.real() > 0 ? 1 : -1)};
            found = true;
          }
        }
        if (!found) throw std::logic_error("Clifford conjugation did not map to a Pauli");
      }
      t.action.push_back(act);
    }
    return t;
  }();
  return table;
}

const std::array<std::array<PauliImage2, 4>, 4>& cnot_table() {
  static const auto table = [] {
    std::array<std::array<PauliImage2, 4>, 4> t{};
    Tensor c = cnot_matrix();
    for (int p1 = 0; p1 < 4; ++p1)
      for (int p2 = 0; p2 < 4; ++p2) {
        Tensor m = matmul(matmul(c, kron(pauli_matrix(p1), pauli_matrix(p2))), c);
        bool found = false;
        for (int q1 = 0; q1 < 4 && !found; ++q1)
          for (int q2 = 0; q2 < 4 && !found; ++q2) {
            Tensor pq = kron(pauli_matrix(q1), pauli_matrix(q2));
            cx overlap = 0.0;
            for (int i = 0; i < 4; ++i)
              for (int j = 0; j < 4; ++j) overlap += pq.at({j, i}) * m.at({i, j});
            overlap *= 0.25;
            if (std::abs(std::abs(overlap) - 1.0) < 1e-9) {
              t[static_cast<size_t>(p1)][static_cast<size_t>(p2)] = {
                  static_cast<uint8_t>(q1), static_cast<uint8_t>(q2),
                  static_cast<int8_t>(overlap.real() > 0 ? 1 : -1)};
              found = true;
            }
          }
        if (!found) throw std::logic_error("CNOT conjugation did not map to a Pauli pair");
      }
    return t;
  }();
  return table;
}

void conjugate_through_step(const CircuitStep& step, int n, std::vector<uint8_t>& letters,
                            int8_t& sign) {
  for (int j = 0; j < n; ++j) {
    PauliImage img = clifford_conjugate(step.cliffords[static_cast<size_t>(j)],
                                        letters[static_cast<size_t>(j)]);
    letters[static_cast<size_t>(j)] = img.letter;
    sign = static_cast<int8_t>(sign * img.sign);
  }
  for (auto [c, t] : cnot_layer_pairs(n, step.parity)) {
    PauliImage2 img = cnot_conjugate(letters[static_cast<size_t>(c)],
                                     letters[static_cast<size_t>(t)]);
    letters[static_cast<size_t>(c)] = img.control;
    letters[static_cast<size_t>(t)] = img.target;
    sign = static_cast<int8_t>(sign * img.sign);
  }
}

double spl_damping(const SplSpec& noise, const std::vector<uint8_t>& letters) {
  double log_damp = 0.0;
  for (const SplGenerator& g : noise.generators) {
    bool anti = false;
    for (size_t k = 0; k < g.paulis.size(); ++k) {
      int pk = pauli_index(g.paulis[k]);
      if (pauli_anticommute(letters[static_cast<size_t>(g.site) + k], pk)) anti = !anti;
    }
    if (anti) log_damp -= 2.0 * g.lambda;
  }
  return std::exp(log_damp);
}

}  // namespace

const Tensor& clifford_unitary(int id) {
  if (id < 0 || id >= kCliffordCount)
    throw std::invalid_argument("clifford id out of range");
  return clifford_table().unitary[static_cast<size_t>(id)];
}

const Tensor& clifford_unitary_dagger(int id) {
  if (id < 0 || id >= kCliffordCount)
    throw std::invalid_argument("clifford id out of range");
  return clifford_table().unitary_dagger[static_cast<size_t>(id)];
}

PauliImage clifford_conjugate(int id, int pauli) {
  if (id < 0 || id >= kCliffordCount)
    throw std::invalid_argument("clifford id out of range");
  return clifford_table().action[static_cast<size_t>(id)][static_cast<size_t>(pauli)];
}

PauliImage2 cnot_conjugate(int p_control, int p_target) {
  return cnot_table()[static_cast<size_t>(p_control)][static_cast<size_t>(p_target)];
}

CliffordCircuit build_circuit(int n, int m_steps, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("build_circuit: n >= 2 required");
  if (m_steps < 0) throw std::invalid_argument("build_circuit: m_steps >= 0 required");
  CliffordCircuit c;
  c.n = n;
  c.seed = seed;
  Rng rng(seed);
  for (int m = 0; m < m_steps; ++m) {
    CircuitStep step;
    step.parity = (m % 2 == 0) ? Parity::Even : Parity::Odd;
    for (int j = 0; j < n; ++j)
      step.cliffords.push_back(static_cast<uint8_t>(rng.below(kCliffordCount)));
    c.steps.push_back(std::move(step));
  }
  return c;
}

PauliObservable stabilizer_observable(const CliffordCircuit& circuit) {
  PauliObservable obs;
  obs.letters.assign(static_cast<size_t>(circuit.n), 3);  // Z^n
  obs.sign = 1;
  for (const CircuitStep& step : circuit.steps)
    conjugate_through_step(step, circuit.n, obs.letters, obs.sign);
  return obs;
}

double noisy_expectation(const CliffordCircuit& circuit, const SplSpec& noise) {
  if (noise.n != circuit.n)
    throw std::invalid_argument("noisy_expectation: qubit count mismatch");
  validate(noise);
  std::vector<uint8_t> letters(static_cast<size_t>(circuit.n), 3);
  int8_t sign = 1;
  double value = 1.0;
  for (const CircuitStep& step : circuit.steps) {
    conjugate_through_step(step, circuit.n, letters, sign);
    value *= spl_damping(noise, letters);
  }
  return value;
}

SuperOpMpo clifford_layer_superop(const std::vector<uint8_t>& ids, bool dagger) {
  SuperOpMpo layer;
  layer.n = static_cast<int>(ids.size());
  layer.basis = Basis::Pauli;
  const Tensor& w = pauli_basis_change();
  Tensor wdag = conjugated(permuted(w, {1, 0}));
  for (uint8_t id : ids) {
    const Tensor& u = dagger ? clifford_unitary_dagger(id) : clifford_unitary(id);
    Tensor sp = matmul(matmul(w, superop_of_unitary_1q(u)), wdag);
    layer.sites.push_back(reshaped(std::move(sp), {1, 4, 4, 1}));
  }
  return layer;
}

VecMps noisy_final_state(const CliffordCircuit& circuit, const SuperOpMpo& noise,
                         int chi_state, double cutoff) {
  if (noise.basis != Basis::Pauli)
    throw std::invalid_argument("noisy_final_state: Pauli-basis noise required");
  const int n = circuit.n;
  // |0...0> as vectorized Pauli components (1/sqrt2, 0, 0, 1/sqrt2) per site.
  std::vector<Tensor> locals;
  for (int j = 0; j < n; ++j) locals.push_back(vec_of_operator_1q(
      [] {
        Tensor r({2, 2});
        r.at({0, 0}) = 1.0;
        return r;
      }(),
      true));
  VecMps v = product_vec(locals, Basis::Pauli);

  for (const CircuitStep& step : circuit.steps) {
    v = apply_superop(clifford_layer_superop(step.cliffords, false), v);
    v = apply_superop(cnot_layer_superop(n, step.parity), v);
    v = apply_superop(noise, v);
    double n2 = vec_norm2(v);
    compress_chain(v.sites, chi_state, cutoff * n2);
  }
  return v;
}

SuperOpMpo build_tem_mpo(const CliffordCircuit& circuit, const SuperOpMpo& noise_inverse,
                         const TemOptions& options) {
  if (options.chi_tem < 1)
    throw std::invalid_argument("build_tem_mpo: chi_tem >= 1 required");
  if (noise_inverse.basis != Basis::Pauli)
    throw std::invalid_argument("build_tem_mpo: Pauli-basis inverse required");
  const int n = circuit.n;
  const int m = static_cast<int>(circuit.steps.size());

  SuperOpMpo acc = identity_superop(n, Basis::Pauli);
  bool first = true;
  auto push = [&](const SuperOpMpo& factor) {
    if (first) {
      acc = factor;
      first = false;
      return;
    }
    acc = compose(acc, factor);
    double n2 = mpo_norm2(acc);
    compress_chain(acc.sites, options.chi_tem, options.cutoff * n2);
  };

  // C_TEM = U_M ... U_1 . U_1^{-1} N^{-1} U_2^{-1} N^{-1} ... U_M^{-1} N^{-1}
  // (matrix product, rightmost factor acts first). U_j = CNOT_j . CLIFF_j.
  for (int j = m - 1; j >= 0; --j) {
    const CircuitStep& step = circuit.steps[static_cast<size_t>(j)];
    push(cnot_layer_superop(n, step.parity));
    push(clifford_layer_superop(step.cliffords, false));
  }
  for (int j = 0; j < m; ++j) {
    const CircuitStep& step = circuit.steps[static_cast<size_t>(j)];
    push(clifford_layer_superop(step.cliffords, true));
    push(cnot_layer_superop(n, step.parity));
    push(noise_inverse);
  }
  return acc;
}

VecMps observable_vec(const PauliObservable& obs) {
  const double sqrt2 = 1.4142135623730950488;
  std::vector<Tensor> locals;
  for (size_t j = 0; j < obs.letters.size(); ++j) {
    Tensor v({4});
    v[obs.letters[j]] = sqrt2 * ((j == 0) ? static_cast<double>(obs.sign) : 1.0);
    locals.push_back(std::move(v));
  }
  return product_vec(locals, Basis::Pauli);
}

double mitigated_expectation(const CliffordCircuit& circuit,
                             const SuperOpMpo& noise_inverse, const SplSpec& noise_true,
                             const TemOptions& options) {
  SuperOpMpo noise = build_spl_superop(noise_true);
  VecMps rho = noisy_final_state(circuit, noise, options.chi_state, options.cutoff);
  SuperOpMpo tem = build_tem_mpo(circuit, noise_inverse, options);
  VecMps mitigated = apply_superop(tem, rho);
  double n2 = vec_norm2(mitigated);
  compress_chain(mitigated.sites, 0, options.cutoff * n2);
  VecMps obs = observable_vec(stabilizer_observable(circuit));
  return vec_inner(obs, mitigated).real();
}

}  // namespace noisetn
