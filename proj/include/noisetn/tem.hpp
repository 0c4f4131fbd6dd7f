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

#ifndef NOISETN_TEM_HPP
#define NOISETN_TEM_HPP

#include <cstdint>
#include <vector>

#include "noisetn/mpo.hpp"
#include "noisetn/noise_models.hpp"

namespace noisetn {

// ---- single-qubit Clifford group -------------------------------------------

inline constexpr int kCliffordCount = 24;

// Unitary of one of the 24 single-qubit Cliffords (canonical H/S words,
// global phase fixed so the first non-zero entry is real positive).
const Tensor& clifford_unitary(int id);
const Tensor& clifford_unitary_dagger(int id);

// Conjugation action C sigma_p C^dag = sign * sigma_q.
struct PauliImage {
  uint8_t letter;
  int8_t sign;
};
PauliImage clifford_conjugate(int id, int pauli);

// CNOT conjugation on a pair (control = first qubit).
struct PauliImage2 {
  uint8_t control;
  uint8_t target;
  int8_t sign;
};
PauliImage2 cnot_conjugate(int p_control, int p_target);

// ---- circuits ---------------------------------------------------------------

struct CircuitStep {
  std::vector<uint8_t> cliffords;  // one id per qubit
  Parity parity;                   // CNOT sub-layer of this step
};

struct CliffordCircuit {
  int n = 0;
  uint64_t seed = 0;
  std::vector<CircuitStep> steps;
};

struct PauliObservable {
  int8_t sign = 1;  // +1 or -1
  std::vector<uint8_t> letters;
};

// Random circuit of m steps: uniform single-qubit Cliffords followed by a
// CNOT layer whose parity alternates with the step index (step 0 even).
CliffordCircuit build_circuit(int n, int m_steps, uint64_t seed);

// Z^{(x)n} conjugated through the whole circuit; its expectation value on the
// ideal evolved state is exactly +1.
PauliObservable stabilizer_observable(const CliffordCircuit& circuit);

// Exact noisy expectation of the stabilizer observable when every circuit
// step is followed by the (Clifford) sparse Pauli-Lindblad channel: Heisenberg
// propagation with multiplicative damping factors.
double noisy_expectation(const CliffordCircuit& circuit, const SplSpec& noise);

struct TemOptions {
  int chi_tem = 200;     // bond cap of the mitigation MPO
  int chi_state = 64;    // bond cap of the evolved vectorized state
  double cutoff = 1e-28; // relative discarded-weight cutoff for both
};

// Noisy evolution |rho>> through the circuit with noise after every step,
// followed by the TEM map of the circuit built from `noise_inverse`
// (Pauli-basis MPO), contracted against the stabilizer observable.
double mitigated_expectation(const CliffordCircuit& circuit,
                             const SuperOpMpo& noise_inverse, const SplSpec& noise_true,
                             const TemOptions& options = {});

// Building blocks shared with tests and the oracle cross-checks.
SuperOpMpo clifford_layer_superop(const std::vector<uint8_t>& ids, bool dagger);
VecMps noisy_final_state(const CliffordCircuit& circuit, const SuperOpMpo& noise,
                         int chi_state, double cutoff);
SuperOpMpo build_tem_mpo(const CliffordCircuit& circuit, const SuperOpMpo& noise_inverse,
                         const TemOptions& options = {});
VecMps observable_vec(const PauliObservable& obs);

}  // namespace noisetn

#endif  // NOISETN_TEM_HPP
