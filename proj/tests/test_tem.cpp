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

#include <doctest.h>

#include <cmath>
#include <map>

#include "noisetn/inversion.hpp"
#include "noisetn/oracle.hpp"
#include "test_helpers.hpp"

using namespace noisetn;

namespace {

// Dense reference: evolve |0..0><0..0| through the noisy circuit and measure.
double dense_noisy_expectation(const CliffordCircuit& circuit, const SplSpec& noise) {
  const int n = circuit.n;
  const int64_t d = int64_t{1} << n;
  Tensor rho({d, d});
  rho[0] = 1.0;
  Tensor noise_s = oracle::dense_superoperator(NoiseModelSpec{noise}, Basis::Computational);
  for (const CircuitStep& step : circuit.steps) {
    std::vector<Tensor> us;
    for (uint8_t id : step.cliffords) us.push_back(clifford_unitary(id));
    Tensor u = us[0];
    for (size_t j = 1; j < us.size(); ++j) u = kron(u, us[j]);
    u = matmul(oracle::cnot_layer_unitary(n, step.parity), u);
    rho = matmul(matmul(u, rho), conjugated(permuted(u, {1, 0})));
    Tensor v = tensordot(noise_s, oracle::vec_interleaved(rho), {1}, {0});
    for (int64_t i = 0; i < d; ++i)
      for (int64_t j = 0; j < d; ++j) {
        int64_t idx = 0;
        for (int s2 = 0; s2 < n; ++s2) {
          int64_t ib = (i >> (n - 1 - s2)) & 1;
          int64_t jb = (j >> (n - 1 - s2)) & 1;
          idx = idx * 4 + (2 * ib + jb);
        }
        rho[i * d + j] = v[idx];
      }
  }
  PauliObservable obs = stabilizer_observable(circuit);
  Tensor o = oracle::pauli_string_matrix(obs.letters);
  cx tr = 0.0;
  for (int64_t i = 0; i < d; ++i)
    for (int64_t j = 0; j < d; ++j) tr += o[j * d + i] * rho[i * d + j];
  return static_cast<double>(obs.sign) * tr.real();
}

}  // namespace

TEST_CASE("clifford table: 24 elements, unitary, closed under conjugation") {
  std::map<int, int> pauli_hits;
  for (int id = 0; id < kCliffordCount; ++id) {
    const Tensor& u = clifford_unitary(id);
    CHECK(max_abs_diff(matmul(conjugated(permuted(u, {1, 0})), u), identity_matrix(2)) < 1e-12);
    for (int p = 1; p < 4; ++p) {
      PauliImage img = clifford_conjugate(id, p);
      CHECK(img.letter >= 1);
      ++pauli_hits[img.letter];
    }
    CHECK(clifford_conjugate(id, 0).letter == 0);
    CHECK(clifford_conjugate(id, 0).sign == 1);
  }
  // every non-identity Pauli appears equally often as an image
  CHECK(pauli_hits[1] == 24);
  CHECK(pauli_hits[2] == 24);
  CHECK(pauli_hits[3] == 24);
}

TEST_CASE("cnot conjugation table reproduces the standard identities") {
  auto img = cnot_conjugate(1, 0);  // X(x)I -> X(x)X
  CHECK(img.control == 1);
  CHECK(img.target == 1);
  CHECK(img.sign == 1);
  img = cnot_conjugate(0, 3);  // I(x)Z -> Z(x)Z
  CHECK(img.control == 3);
  CHECK(img.target == 3);
  img = cnot_conjugate(3, 3);  // Z(x)Z -> I(x)Z
  CHECK(img.control == 0);
  CHECK(img.target == 3);
}

TEST_CASE("build_circuit: deterministic, alternating parity, uniform cliffords") {
  CliffordCircuit a = build_circuit(3, 6, 9);
  CliffordCircuit b = build_circuit(3, 6, 9);
  REQUIRE(a.steps.size() == 6);
  for (size_t m = 0; m < a.steps.size(); ++m) {
    CHECK(a.steps[m].cliffords == b.steps[m].cliffords);
    CHECK(a.steps[m].parity == ((m % 2 == 0) ? Parity::Even : Parity::Odd));
  }
  CHECK(build_circuit(3, 0, 1).steps.empty());

  // uniformity over the 24 elements at 3 sigma
  CliffordCircuit big = build_circuit(2, 50000, 123);
  std::vector<int64_t> counts(kCliffordCount, 0);
  int64_t total = 0;
  for (const CircuitStep& s : big.steps)
    for (uint8_t id : s.cliffords) {
      ++counts[id];
      ++total;
    }
  const double p = 1.0 / kCliffordCount;
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(total));
  for (int64_t c : counts)
    CHECK(std::abs(static_cast<double>(c) / static_cast<double>(total) - p) < 3.0 * sigma + 1e-12);
}

TEST_CASE("stabilizer_observable basics") {
  CliffordCircuit empty = build_circuit(3, 0, 1);
  PauliObservable obs = stabilizer_observable(empty);
  CHECK(obs.sign == 1);
  for (uint8_t l : obs.letters) CHECK(l == 3);

  // identity cliffords + even CNOT on n=2: dense conjugation maps
  // Z(x)Z -> (CNOT Z_c CNOT)(CNOT Z_t CNOT) = Z_c (Z_c Z_t) = I(x)Z.
  CliffordCircuit c;
  c.n = 2;
  CircuitStep step;
  step.parity = Parity::Even;
  step.cliffords = {0, 0};
  // find the clifford id of the identity
  for (int id = 0; id < kCliffordCount; ++id)
    if (max_abs_diff(clifford_unitary(id), identity_matrix(2)) < 1e-9) {
      step.cliffords = {static_cast<uint8_t>(id), static_cast<uint8_t>(id)};
      break;
    }
  c.steps.push_back(step);
  obs = stabilizer_observable(c);
  CHECK(obs.sign == 1);

  Tensor u = cnot_matrix();
  Tensor zz = kron(pauli_matrix(3), pauli_matrix(3));
  Tensor want = matmul(matmul(u, zz), u);
  Tensor got = oracle::pauli_string_matrix(obs.letters);
  CHECK(max_abs_diff(got, want) < 1e-12);
  CHECK(obs.letters == std::vector<uint8_t>{0, 3});
}

TEST_CASE("stabilizer_observable: ideal expectation is +1 (dense check)") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    CliffordCircuit c = build_circuit(4, 5, seed);
    SplSpec no_noise;
    no_noise.n = 4;
    CHECK(dense_noisy_expectation(c, no_noise) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("noisy_expectation: no noise and single-generator analytic case") {
  CliffordCircuit c = build_circuit(2, 3, 5);
  SplSpec no_noise;
  no_noise.n = 2;
  CHECK(noisy_expectation(c, no_noise) == doctest::Approx(1.0).epsilon(1e-15));

  // single step, identity cliffords, even CNOT: the observable becomes
  // I(x)Z, so a generator Z on the target commutes while X on the target
  // anticommutes and damps by e^{-2 lambda}.
  CliffordCircuit simple;
  simple.n = 2;
  CircuitStep step;
  step.parity = Parity::Even;
  for (int id = 0; id < kCliffordCount; ++id)
    if (max_abs_diff(clifford_unitary(id), identity_matrix(2)) < 1e-9)
      step.cliffords = {static_cast<uint8_t>(id), static_cast<uint8_t>(id)};
  simple.steps.push_back(step);

  SplSpec commuting;
  commuting.n = 2;
  commuting.generators = {{1, "Z", 0.01}, {0, "Z", 0.02}};
  CHECK(noisy_expectation(simple, commuting) == doctest::Approx(1.0).epsilon(1e-15));

  SplSpec anti;
  anti.n = 2;
  anti.generators = {{1, "X", 0.01}};
  CHECK(noisy_expectation(simple, anti) == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
}

TEST_CASE("noisy_expectation matches the dense density-matrix simulation") {
  SplSpec noise = sample_spl_spec(4, 3);
  for (uint64_t seed : {3ull, 8ull}) {
    CliffordCircuit c = build_circuit(4, 5, seed);
    CHECK(noisy_expectation(c, noise) ==
          doctest::Approx(dense_noisy_expectation(c, noise)).epsilon(1e-10));
  }
}

TEST_CASE("noisy expectation decays monotonically with depth") {
  SplSpec noise = sample_spl_spec(3, 7);
  CliffordCircuit master = build_circuit(3, 8, 11);
  double prev = 1.0;
  for (int depth = 1; depth <= 8; ++depth) {
    CliffordCircuit prefix;
    prefix.n = master.n;
    prefix.steps.assign(master.steps.begin(), master.steps.begin() + depth);
    double v = noisy_expectation(prefix, noise);
    CHECK(v <= prev + 1e-15);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("heisenberg and superoperator-MPO paths agree for SPL noise") {
  SplSpec noise = sample_spl_spec(5, 9);
  SuperOpMpo noise_mpo = build_spl_superop(noise);
  for (uint64_t seed : {2ull, 6ull}) {
    CliffordCircuit c = build_circuit(5, 6, seed);
    VecMps rho = noisy_final_state(c, noise_mpo, 64, 1e-28);
    VecMps obs = observable_vec(stabilizer_observable(c));
    double mpo_path = vec_inner(obs, rho).real();
    CHECK(mpo_path == doctest::Approx(noisy_expectation(c, noise)).epsilon(1e-8));
  }
}

TEST_CASE("tem composition identity: C_TEM after C_noisy equals C_ideal (dense)") {
  const int n = 3;
  SplSpec noise = sample_spl_spec(n, 13);
  SuperOpMpo gamma = build_spl_superop(noise);
  SuperOpMpo inverse = variational_polish(gamma, invert_sweep(gamma, 4, 6), 50);
  CliffordCircuit c = build_circuit(n, 3, 17);

  SuperOpMpo tem = build_tem_mpo(c, inverse, TemOptions{});
  Tensor tem_d = oracle::dense_superoperator(tem, Basis::Pauli);

  // dense noisy circuit and dense ideal circuit
  Tensor noisy = identity_matrix(int64_t{1} << (2 * n));
  Tensor ideal = identity_matrix(int64_t{1} << (2 * n));
  Tensor noise_d = oracle::dense_superoperator(NoiseModelSpec{noise}, Basis::Pauli);
  for (const CircuitStep& step : c.steps) {
    std::vector<Tensor> us;
    for (uint8_t id : step.cliffords) us.push_back(clifford_unitary(id));
    Tensor u = us[0];
    for (size_t j = 1; j < us.size(); ++j) u = kron(u, us[j]);
    u = matmul(oracle::cnot_layer_unitary(n, step.parity), u);
    Tensor layer = oracle::superop_to_pauli(oracle::superop_of_kraus({u}));
    ideal = matmul(layer, ideal);
    noisy = matmul(noise_d, matmul(layer, noisy));
  }
  Tensor recovered = matmul(tem_d, noisy);
  CHECK(max_abs_diff(recovered, ideal) < 1e-8);
}

TEST_CASE("mitigated_expectation: trivial and exact-inverse cases") {
  const int n = 3;
  // noiseless circuit + identity inverse -> exactly +1
  SplSpec no_noise;
  no_noise.n = n;
  CliffordCircuit c = build_circuit(n, 4, 19);
  SuperOpMpo id = identity_superop(n, Basis::Pauli);
  CHECK(mitigated_expectation(c, id, no_noise) == doctest::Approx(1.0).epsilon(1e-10));

  // real noise + exact inverse -> close to 1, much closer than unmitigated
  SplSpec noise = sample_spl_spec(n, 21);
  SuperOpMpo gamma = build_spl_superop(noise);
  SuperOpMpo inverse = variational_polish(gamma, invert_sweep(gamma, 4, 6), 50);
  double mitigated = mitigated_expectation(c, inverse, noise);
  double raw = noisy_expectation(c, noise);
  CHECK(std::abs(mitigated - 1.0) < 5e-3);
  CHECK(std::abs(mitigated - 1.0) < std::abs(raw - 1.0));

  TemOptions bad;
  bad.chi_tem = 0;
  CHECK_THROWS_AS(mitigated_expectation(c, inverse, noise, bad), std::invalid_argument);
}
