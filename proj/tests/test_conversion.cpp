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

#include <doctest.h>

#include <cmath>

#include "noisetn/noise_models.hpp"
#include "noisetn/oracle.hpp"
#include "test_helpers.hpp"

using namespace noisetn;
using noisetn::testing::random_lpdo;
using noisetn::testing::random_superop;

TEST_CASE("lpdo_to_superop: identity channel gives the identity MPO") {
  SuperOpMpo s = lpdo_to_superop(identity_lpdo(3));
  CHECK(frobenius_error(s, identity_superop(3, Basis::Computational)) < 1e-24);
}

TEST_CASE("lpdo_to_superop: fully depolarizing single qubit is Pauli diag(1,0,0,0)") {
  SuperOpMpo s = lpdo_to_pauli_superop(fully_depolarizing_lpdo(1));
  Tensor d = oracle::dense_superoperator(s, Basis::Pauli);
  Tensor want({4, 4});
  want.at({0, 0}) = 1.0;
  CHECK(max_abs_diff(d, want) < 1e-12);
}

TEST_CASE("lpdo_to_superop matches the dense Kraus-sum superoperator") {
  for (uint64_t seed : {1ull, 7ull}) {
    Lpdo l = random_lpdo(3, 2, 2, seed);
    SuperOpMpo s = lpdo_to_superop(l);
    CHECK(max_bond(s.sites) <= l.chi_b * l.chi_b);
    Tensor got = oracle::dense_superoperator(s, Basis::Computational);
    Tensor want = oracle::dense_superoperator(l, Basis::Computational);
    CHECK(max_abs_diff(got, want) < 1e-10);
  }
}

TEST_CASE("to_pauli_basis: identity invariant, Z-conjugation diag(1,-1,-1,1)") {
  SuperOpMpo id = identity_superop(2, Basis::Computational);
  SuperOpMpo idp = to_pauli_basis(id);
  CHECK(frobenius_error(idp, identity_superop(2, Basis::Pauli)) < 1e-24);

  // single-qubit channel rho -> Z rho Z
  Lpdo zconj = identity_lpdo(1);
  Tensor site({2, 2, 1, 1, 1});
  site.at({0, 0, 0, 0, 0}) = 1.0;
  site.at({1, 1, 0, 0, 0}) = -1.0;
  zconj.sites[0] = site;
  Tensor d = oracle::dense_superoperator(lpdo_to_pauli_superop(zconj), Basis::Pauli);
  Tensor want({4, 4});
  want.at({0, 0}) = 1.0;
  want.at({1, 1}) = -1.0;
  want.at({2, 2}) = -1.0;
  want.at({3, 3}) = 1.0;
  CHECK(max_abs_diff(d, want) < 1e-12);
}

TEST_CASE("to_pauli_basis is an isometry and a reversible round trip") {
  SuperOpMpo s = random_superop(3, 3, 91, Basis::Computational, 0.4);
  SuperOpMpo p = to_pauli_basis(s);
  CHECK(mpo_norm2(p) == doctest::Approx(mpo_norm2(s)).epsilon(1e-12));
  SuperOpMpo back = to_computational_basis(p);
  CHECK(frobenius_error(back, s) < 1e-24);
  CHECK_THROWS_AS(to_pauli_basis(p), std::invalid_argument);
}

TEST_CASE("frobenius distances agree across bases") {
  SuperOpMpo a = random_superop(3, 2, 93, Basis::Computational, 0.4);
  SuperOpMpo b = random_superop(3, 3, 97, Basis::Computational, 0.4);
  double comp = frobenius_error(a, b);
  double pauli = frobenius_error(to_pauli_basis(a), to_pauli_basis(b));
  CHECK(comp == doctest::Approx(pauli).epsilon(1e-10));
}

TEST_CASE("ptm_coefficient: TP channels have unit identity-identity entry") {
  for (const NoiseModelSpec& spec :
       {NoiseModelSpec{DepolBrickworkSpec{3, 1e-3}}, NoiseModelSpec{sample_spl_spec(3, 5)}}) {
    SuperOpMpo m = build_channel(spec);
    CHECK(ptm_coefficient(m, "III", "III") == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ptm_coefficient reproduces known diagonal entries") {
  SuperOpMpo dep = build_depol_superop({2, 1e-3});
  CHECK(ptm_coefficient(dep, "XZ", "XZ") == doctest::Approx(0.999).epsilon(1e-12));

  SplSpec spl;
  spl.n = 2;
  spl.generators = {{0, "Z", 0.01}};
  SuperOpMpo m = build_spl_superop(spl);
  CHECK(ptm_coefficient(m, "XI", "XI") == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
}

TEST_CASE("ptm_coefficient matches dense matrix entries on random channels") {
  CoherentDepolSpec spec = sample_coherent_spec({3, 1e-2}, 0.3, 3);
  SuperOpMpo m = build_channel(NoiseModelSpec{spec});
  Tensor d = oracle::dense_superoperator(m, Basis::Pauli);
  const char* strings[] = {"XYZ", "IXZ", "ZZI", "YII"};
  for (const char* s_out : strings)
    for (const char* s_in : strings) {
      int64_t r = 0, c = 0;
      for (int j = 0; j < 3; ++j) {
        r = r * 4 + pauli_index(s_out[j]);
        c = c * 4 + pauli_index(s_in[j]);
      }
      CHECK(ptm_coefficient(m, s_out, s_in) ==
            doctest::Approx(d[r * 64 + c].real()).epsilon(1e-10));
    }
}
