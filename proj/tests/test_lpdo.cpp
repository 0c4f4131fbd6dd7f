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

#include <doctest.h>

#include <cmath>

#include "noisetn/oracle.hpp"
#include "test_helpers.hpp"

using namespace noisetn;
using noisetn::testing::random_lpdo;
using noisetn::testing::random_state_mpo;

TEST_CASE("identity LPDO leaves states unchanged") {
  StateMpo rho = random_state_mpo(3, 5);
  StateMpo out = lpdo_apply(identity_lpdo(3), rho);
  CHECK(max_abs_diff(oracle::dense_state(out), oracle::dense_state(rho)) < 1e-12);
}

TEST_CASE("fully depolarizing LPDO maps |00><00| to I/4") {
  std::vector<Tensor> locals;
  for (int j = 0; j < 2; ++j) {
    Tensor rho({2, 2});
    rho.at({0, 0}) = 1.0;
    locals.push_back(rho);
  }
  StateMpo out = lpdo_apply(fully_depolarizing_lpdo(2), product_state_mpo(locals));
  CHECK(max_abs_diff(oracle::dense_state(out), scaled(identity_matrix(4), 0.25)) < 1e-12);
}

TEST_CASE("lpdo_apply equals the dense Kraus sum on random instances") {
  Lpdo l = random_lpdo(3, 2, 2, 7);
  StateMpo rho = random_state_mpo(3, 7, 0);  // random product state
  StateMpo out = lpdo_apply(l, rho);
  Tensor want = oracle::dense_lpdo_apply(l, oracle::dense_state(rho));
  CHECK(max_abs_diff(oracle::dense_state(out), want) < 1e-10);

  // output bond bounded by input bond * chi_b^2
  StateMpo ent = random_state_mpo(3, 8, 1);
  StateMpo out2 = lpdo_apply(l, ent);
  CHECK(max_bond(out2.sites) <= max_bond(ent.sites) * l.chi_b * l.chi_b);
}

TEST_CASE("lpdo_apply output is Hermitian and PSD") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    int n = 3;
    Lpdo l = random_lpdo(n, 2, 3, seed);
    StateMpo rho = random_state_mpo(n, seed + 50);
    Tensor out = oracle::dense_state(lpdo_apply(l, rho));
    Tensor herm_gap = added(out, scaled(conjugated(permuted(out, {1, 0})), -1.0));
    CHECK(std::sqrt(norm2(herm_gap)) < 1e-10 * std::max(1.0, std::sqrt(norm2(out))));
    auto evals = hermitian_eigenvalues(out);
    CHECK(evals.front() > -1e-9 * std::max(1.0, evals.back()));
  }
}

TEST_CASE("lpdo_apply rejects mismatched qubit counts") {
  CHECK_THROWS_AS(lpdo_apply(identity_lpdo(2), random_state_mpo(3, 1)),
                  std::invalid_argument);
}

TEST_CASE("lpdo_trace of the identity channel is 2^n") {
  for (int n : {1, 2, 5}) {
    cx tr = lpdo_trace(identity_lpdo(n));
    CHECK(tr.real() == doctest::Approx(std::pow(2.0, n)).epsilon(1e-12));
    CHECK(std::abs(tr.imag()) < 1e-12);
  }
}

TEST_CASE("lpdo_trace of a constant-entry single site matches the dense sum") {
  // n=1, all entries equal to c: the trace must equal the dense
  // sum_kappa Tr[K_kappa K_kappa^dag] evaluated directly.
  const cx c(0.3, -0.4);
  for (int chi_kappa : {1, 3, 5}) {
    Lpdo l;
    l.n = 1;
    l.chi_b = 1;
    l.chi_kappa = chi_kappa;
    Tensor s({2, 2, 1, 1, chi_kappa});
    for (int64_t i = 0; i < s.size(); ++i) s[i] = c;
    l.sites.push_back(s);

    double dense = 0.0;
    for (const Tensor& k : oracle::dense_kraus_operators(l)) {
      for (int64_t i = 0; i < k.size(); ++i) dense += std::norm(k[i]);
    }
    CHECK(lpdo_trace(l).real() == doctest::Approx(dense).epsilon(1e-12));
    // all four entries of each of the chi_kappa Kraus blocks contribute |c|^2
    CHECK(dense == doctest::Approx(4.0 * std::norm(c) * chi_kappa).epsilon(1e-12));
  }
}

TEST_CASE("lpdo_trace matches the dense Kraus sum on random LPDOs") {
  Lpdo l = random_lpdo(3, 2, 2, 11);
  double dense = 0.0;
  for (const Tensor& k : oracle::dense_kraus_operators(l))
    for (int64_t i = 0; i < k.size(); ++i) dense += std::norm(k[i]);
  cx tr = lpdo_trace(l);
  CHECK(std::abs(tr.real() - dense) < 1e-12 * dense);
  CHECK(std::abs(tr.imag()) < 1e-12 * dense);
}

TEST_CASE("kraus_gram_mpo is the identity for trace-preserving channels") {
  OperatorMpo gram = kraus_gram_mpo(identity_lpdo(3));
  StateMpo id;
  id.n = 3;
  for (int j = 0; j < 3; ++j) id.sites.push_back(reshaped(identity_matrix(2), {1, 2, 2, 1}));
  CHECK(op_inner(gram, gram).real() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(op_inner(id, gram).real() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("kraus_gram_mpo matches dense sum_k K^dag K") {
  Lpdo l = random_lpdo(2, 2, 3, 13);
  Tensor want({4, 4});
  for (const Tensor& k : oracle::dense_kraus_operators(l)) {
    Tensor kdk = matmul(conjugated(permuted(k, {1, 0})), k);
    accumulate(want, kdk);
  }
  CHECK(max_abs_diff(oracle::dense_state(kraus_gram_mpo(l)), want) < 1e-10);
}
