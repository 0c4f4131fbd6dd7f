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

#ifndef NOISETN_NOISE_MODELS_HPP
#define NOISETN_NOISE_MODELS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "noisetn/mpo.hpp"

namespace noisetn {

enum class Parity : uint8_t { Even = 0, Odd = 1 };

// No noise at all; useful as a pipeline baseline.
struct IdentityNoiseSpec {
  int n = 1;
};

// Brickwork of two-qubit depolarizing channels: rate p on the CNOT pairs
// (even links), rate p/2 on the crosstalk pairs (odd links).
struct DepolBrickworkSpec {
  int n = 2;
  double p = 1e-3;
};

// Depolarizing brickwork preceded by fixed per-qubit random rotations. The
// angles are sampled once (see sample_coherent_spec) and reused for every
// application of the layer.
struct CoherentDepolSpec {
  DepolBrickworkSpec base;
  double epsilon = 1e-3;
  uint64_t seed = 0;
  // Per-qubit (phi, varphi, psi): U = [[e^{i varphi} cos phi, e^{i psi} sin phi],
  //                                    [-e^{-i psi} sin phi, e^{-i varphi} cos phi]]
  std::vector<std::array<double, 3>> angles;
};

// One term of a sparse Pauli-Lindblad model: a weight-1 or weight-2 Pauli on
// adjacent qubits starting at `site`, with rate lambda >= 0.
struct SplGenerator {
  int site = 0;
  std::string paulis;  // "X".."Z" or two letters for an adjacent pair
  double lambda = 0.0;
};

struct SplSpec {
  int n = 2;
  std::vector<SplGenerator> generators;
};

using NoiseModelSpec =
    std::variant<IdentityNoiseSpec, DepolBrickworkSpec, CoherentDepolSpec, SplSpec>;

int qubit_count(const NoiseModelSpec& spec);
void validate(const SplSpec& spec);

// omega_k = (1 + e^{-2 lambda_k}) / 2.
double spl_omega(double lambda);

// ---- builders (all return Pauli-basis MPOs) ---------------------------------

// Brickwork depolarizing channel; diagonal in the Pauli basis, bond <= 4.
SuperOpMpo build_depol_superop(const DepolBrickworkSpec& spec);

// Sparse Pauli-Lindblad channel: every Pauli string Q is scaled by
// exp(-2 lambda_k) for each generator P_k anticommuting with Q.
SuperOpMpo build_spl_superop(const SplSpec& spec);

// Unitary rotation U(phi, varphi, psi) per qubit.
Tensor rotation_unitary(const std::array<double, 3>& angles);

// Draws per-qubit rotation angles: psi uniform in [0, 2pi), varphi uniform in
// [0, 2pi) scaled by epsilon, phi = arcsin(sqrt(epsilon * u)).
CoherentDepolSpec sample_coherent_spec(const DepolBrickworkSpec& base, double epsilon,
                                       uint64_t seed);

// Default generator set for SPL experiments: every weight-1 Pauli on every
// qubit plus every weight-2 Pauli on adjacent pairs, with rates drawn
// log-uniformly from [1e-4, 5e-3].
SplSpec sample_spl_spec(int n, uint64_t seed);

// Dispatch over the tagged union.
SuperOpMpo build_channel(const NoiseModelSpec& spec);

// Ideal CNOT-layer unitary as a superoperator MPO (Pauli basis, bond <= 4);
// control sits on the lower qubit index of each pair.
SuperOpMpo cnot_layer_superop(int n, Parity parity);

// Pairs (control, target) of a CNOT layer.
std::vector<std::pair<int, int>> cnot_layer_pairs(int n, Parity parity);

// ---- spec files and descriptors ---------------------------------------------

// Compact single-line descriptor, e.g. "depol(n=4,p=0.001)". Stored in dataset
// headers and manifests.
std::string describe(const NoiseModelSpec& spec);

// Sectioned key-value noise spec file.
NoiseModelSpec load_noise_spec(const std::string& path);
void save_noise_spec(const std::string& path, const NoiseModelSpec& spec);

}  // namespace noisetn

#endif  // NOISETN_NOISE_MODELS_HPP
