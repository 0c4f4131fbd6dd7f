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

#include "noisetn/tensor.hpp"

#include <doctest.h>

#include "noisetn/rng.hpp"
#include "test_helpers.hpp"

using namespace noisetn;
using noisetn::testing::random_tensor;

TEST_CASE("permuted moves axes correctly") {
  Tensor t({2, 3, 4});
  for (int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  Tensor p = permuted(t, {2, 0, 1});
  CHECK(p.shape() == std::vector<int64_t>{4, 2, 3});
  for (int64_t a = 0; a < 2; ++a)
    for (int64_t b = 0; b < 3; ++b)
      for (int64_t c = 0; c < 4; ++c)
        CHECK(p.at({c, a, b}) == t.at({a, b, c}));
}

TEST_CASE("tensordot matches explicit sum") {
  Rng rng(42);
  Tensor a = random_tensor({2, 3, 4}, rng);
  Tensor b = random_tensor({4, 3, 5}, rng);
  Tensor c = tensordot(a, b, {1, 2}, {1, 0});
  REQUIRE(c.shape() == std::vector<int64_t>{2, 5});
  for (int64_t i = 0; i < 2; ++i)
    for (int64_t j = 0; j < 5; ++j) {
      cx acc = 0.0;
      for (int64_t k = 0; k < 3; ++k)
        for (int64_t l = 0; l < 4; ++l) acc += a.at({i, k, l}) * b.at({l, k, j});
      CHECK(std::abs(c.at({i, j}) - acc) < 1e-12);
    }
}

TEST_CASE("tensordot rejects mismatched axes") {
  Rng rng(1);
  Tensor a = random_tensor({2, 3}, rng);
  Tensor b = random_tensor({4, 2}, rng);
  CHECK_THROWS_AS(tensordot(a, b, {1}, {0}), std::invalid_argument);
}

TEST_CASE("svd reconstructs and is deterministically gauged") {
  Rng rng(7);
  Tensor m = random_tensor({6, 9}, rng);
  SvdResult f = svd(m);
  // reconstruct
  Tensor us = f.u;
  for (int64_t r = 0; r < us.dim(0); ++r)
    for (int64_t c = 0; c < us.dim(1); ++c) us[r * us.dim(1) + c] *= f.s[static_cast<size_t>(c)];
  Tensor rec = matmul(us, f.vh);
  CHECK(max_abs_diff(rec, m) < 1e-12);
  // gauge: largest-magnitude entry of each left singular vector real positive
  for (int64_t c = 0; c < f.u.dim(1); ++c) {
    int64_t imax = 0;
    double amax = -1.0;
    for (int64_t r = 0; r < f.u.dim(0); ++r) {
      double a = std::abs(f.u[r * f.u.dim(1) + c]);
      if (a > amax + 1e-300) {
        amax = a;
        imax = r;
      }
    }
    cx top = f.u[imax * f.u.dim(1) + c];
    CHECK(top.real() > 0.0);
    CHECK(std::abs(top.imag()) < 1e-12 * top.real());
  }
  // determinism
  SvdResult g = svd(m);
  CHECK(max_abs_diff(f.u, g.u) == 0.0);
  CHECK(max_abs_diff(f.vh, g.vh) == 0.0);
}

TEST_CASE("qr reconstructs with isometric q") {
  Rng rng(9);
  Tensor m = random_tensor({8, 5}, rng);
  QrResult f = qr(m);
  CHECK(max_abs_diff(matmul(f.q, f.r), m) < 1e-12);
  Tensor qhq = tensordot(conjugated(f.q), f.q, {0}, {0});
  CHECK(max_abs_diff(qhq, identity_matrix(f.q.dim(1))) < 1e-12);
}

TEST_CASE("kron agrees with dense definition") {
  Rng rng(11);
  Tensor a = random_tensor({2, 3}, rng);
  Tensor b = random_tensor({3, 2}, rng);
  Tensor k = kron(a, b);
  for (int64_t i = 0; i < 2; ++i)
    for (int64_t j = 0; j < 3; ++j)
      for (int64_t p = 0; p < 3; ++p)
        for (int64_t q = 0; q < 2; ++q)
          CHECK(std::abs(k.at({i * 3 + p, j * 2 + q}) - a.at({i, j}) * b.at({p, q})) < 1e-14);
}

TEST_CASE("solve_hermitian solves the regularized normal system") {
  Rng rng(13);
  Tensor m = random_tensor({6, 6}, rng);
  Tensor h = tensordot(conjugated(m), m, {0}, {0});  // PSD
  Tensor x_true = random_tensor({6}, rng);
  Tensor b = tensordot(h, x_true, {1}, {0});
  Tensor x = solve_hermitian(h, b, 0.0);
  CHECK(max_abs_diff(x, x_true) < 1e-9);
}
