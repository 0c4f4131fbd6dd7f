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

#include "noisetn/inversion.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "noisetn/rng.hpp"

namespace noisetn {

cx superop_trace(const SuperOpMpo& m) {
  Tensor env = identity_matrix(1);
  for (const Tensor& s : m.sites) {
    Tensor tr({s.dim(0), s.dim(3)});
    for (int64_t l = 0; l < s.dim(0); ++l)
      for (int64_t r = 0; r < s.dim(3); ++r) {
        cx acc = 0.0;
        for (int64_t x = 0; x < 4; ++x) acc += s[((l * 4 + x) * 4 + x) * s.dim(3) + r];
        tr[l * s.dim(3) + r] = acc;
      }
    env = matmul(env, tr);
  }
  return env[0];
}

double inversion_residual(const SuperOpMpo& gamma, const SuperOpMpo& upsilon) {
  if (gamma.n != upsilon.n)
    throw std::invalid_argument("inversion_residual: qubit count mismatch");
  if (gamma.basis != upsilon.basis)
    throw std::invalid_argument("inversion_residual: basis mismatch");
  SuperOpMpo phi = compose(gamma, upsilon);
  double quad = mpo_norm2(phi);
  double lin = superop_trace(phi).real();
  return std::max(quad - 2.0 * lin + std::pow(4.0, gamma.n), 0.0);
}

namespace {

// Environments of |Gamma Upsilon|^2: four chains (conj Gamma, conj Upsilon,
// Gamma, Upsilon), bond order [cg, cu, g, u].
Tensor quad_boundary() {
  Tensor t({1, 1, 1, 1});
  t[0] = 1.0;
  return t;
}

Tensor quad_push_left(const Tensor& env, const Tensor& gsite, const Tensor& usite) {
  Tensor cg = conjugated(gsite);
  Tensor cu = conjugated(usite);
  Tensor t = tensordot(env, cg, {0}, {0});        // [cu,g,u, o,m1,cgR]
  t = tensordot(t, cu, {0, 4}, {0, 1});           // [g,u,o,cgR, i,cuR]
  t = tensordot(t, gsite, {0, 2}, {0, 1});        // [u,cgR,i,cuR, m2,gR]
  t = tensordot(t, usite, {0, 4, 2}, {0, 1, 2});  // [cgR,cuR, gR,uR]
  return t;
}

Tensor quad_push_right(const Tensor& env, const Tensor& gsite, const Tensor& usite) {
  Tensor cg = conjugated(gsite);
  Tensor cu = conjugated(usite);
  Tensor t = tensordot(cg, env, {3}, {0});        // [cgL,o,m1, cu,g,u]
  t = tensordot(cu, t, {1, 3}, {2, 3});           // [cuL,i, cgL,o, g,u]
  t = tensordot(gsite, t, {1, 3}, {3, 4});        // [gL,m2, cuL,i, cgL, u]
  t = tensordot(usite, t, {1, 2, 3}, {1, 3, 5});  // [uL, gL, cuL, cgL]
  return permuted(t, {3, 2, 1, 0});               // [cgL, cuL, gL, uL]
}

// Environments of Tr[Gamma Upsilon]: bond order [g, u].
Tensor trace_boundary() { return identity_matrix(1); }

Tensor trace_site(const Tensor& gsite, const Tensor& usite) {
  // sum_{o,m} Gamma[gL,o,m,gR] Upsilon[uL,m,o,uR] -> [gL,gR,uL,uR]
  Tensor t = tensordot(gsite, usite, {1, 2}, {2, 1});
  return t;  // [gL,gR, uL,uR]
}

Tensor trace_push_left(const Tensor& env, const Tensor& gsite, const Tensor& usite) {
  Tensor ts = trace_site(gsite, usite);
  return tensordot(env, ts, {0, 1}, {0, 2});  // [gR, uR]
}

Tensor trace_push_right(const Tensor& env, const Tensor& gsite, const Tensor& usite) {
  Tensor ts = trace_site(gsite, usite);
  return tensordot(ts, env, {1, 3}, {0, 1});  // [gL, uL]
}

// Environment of conj(Upsilon_j) in Tr[Gamma Upsilon]: e[uL, m, o, uR], so
// that Tr = sum e . Upsilon_j (no conjugation).
Tensor trace_env(const Tensor& lenv, const Tensor& renv, const Tensor& gsite) {
  Tensor t = tensordot(lenv, gsite, {0}, {0});  // [u, o, m, gR]
  t = tensordot(t, renv, {3}, {0});             // [u, o, m, uR']
  return permuted(t, {0, 2, 1, 3});             // [uL, m, o, uR]
}

struct LocalProblem {
  Tensor h6;   // [(cu,m1,cuR), (u,m2,uR)] as rank-6 tensor
  Tensor rhs;  // conj(trace env), legs [uL, m, o, uR]
};

LocalProblem build_local(const Tensor& l4, const Tensor& r4, const Tensor& ltr,
                         const Tensor& rtr, const Tensor& gsite) {
  Tensor cg = conjugated(gsite);
  Tensor t = tensordot(l4, cg, {0}, {0});      // [cu,g,u, o,m1,cgR]
  t = tensordot(t, gsite, {1, 3}, {0, 1});     // [cu,u,m1,cgR, m2,gR]
  t = tensordot(t, r4, {3, 5}, {0, 2});        // [cu,u,m1,m2, cuR,uR]
  LocalProblem p;
  p.h6 = permuted(t, {0, 2, 4, 1, 3, 5});      // [cu,m1,cuR, u,m2,uR]
  p.rhs = conjugated(trace_env(ltr, rtr, gsite));
  return p;
}

// Solves the block-diagonal normal equations (one block per Upsilon input
// leg) and writes the updated site.
Tensor solve_local(const LocalProblem& p, double ridge) {
  const int64_t cu = p.h6.dim(0), cur = p.h6.dim(2);
  const int64_t u = p.h6.dim(3), ur = p.h6.dim(5);
  const int64_t d = cu * 4 * cur;
  Tensor h = reshaped(p.h6, {d, u * 4 * ur});
  Tensor site({u, 4, 4, ur});
  for (int64_t i = 0; i < 4; ++i) {
    Tensor b({d});
    for (int64_t l = 0; l < cu; ++l)
      for (int64_t m = 0; m < 4; ++m)
        for (int64_t r = 0; r < cur; ++r)
          b[(l * 4 + m) * cur + r] = p.rhs[((l * 4 + m) * 4 + i) * cur + r];
    Tensor x = solve_hermitian(h, b, ridge);
    for (int64_t l = 0; l < u; ++l)
      for (int64_t m = 0; m < 4; ++m)
        for (int64_t r = 0; r < ur; ++r)
          site[((l * 4 + m) * 4 + i) * ur + r] = x[(l * 4 + m) * ur + r];
  }
  return site;
}

SuperOpMpo initial_guess(const SuperOpMpo& gamma, int chi) {
  Rng rng(0x1147u);
  SuperOpMpo u = identity_superop(gamma.n, gamma.basis);
  for (int j = 0; j < gamma.n; ++j) {
    int64_t bl = (j == 0) ? 1 : chi;
    int64_t br = (j == gamma.n - 1) ? 1 : chi;
    Tensor s({bl, 4, 4, br});
    for (int64_t i = 0; i < s.size(); ++i) s[i] = rng.complex_gaussian(1e-3);
    for (int64_t x = 0; x < 4; ++x) s[(0 * 4 + x) * 4 * br + x * br + 0] += 1.0;
    u.sites[static_cast<size_t>(j)] = std::move(s);
  }
  return u;
}

}  // namespace

SuperOpMpo invert_sweep(const SuperOpMpo& gamma, int chi, int sweeps,
                        std::vector<double>* history) {
  validate(gamma);
  if (chi < 1) throw std::invalid_argument("invert_sweep: chi >= 1 required");
  const int n = gamma.n;
  SuperOpMpo ups = initial_guess(gamma, chi);

  auto record = [&] {
    if (history) history->push_back(inversion_residual(gamma, ups));
  };

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    // Right environments for the left-to-right pass.
    std::vector<Tensor> r4(static_cast<size_t>(n) + 1), rtr(static_cast<size_t>(n) + 1);
    r4[static_cast<size_t>(n)] = quad_boundary();
    rtr[static_cast<size_t>(n)] = trace_boundary();
    for (int j = n - 1; j >= 1; --j) {
      r4[static_cast<size_t>(j)] =
          quad_push_right(r4[static_cast<size_t>(j) + 1], gamma.sites[static_cast<size_t>(j)],
                          ups.sites[static_cast<size_t>(j)]);
      rtr[static_cast<size_t>(j)] =
          trace_push_right(rtr[static_cast<size_t>(j) + 1], gamma.sites[static_cast<size_t>(j)],
                           ups.sites[static_cast<size_t>(j)]);
    }
    Tensor l4 = quad_boundary(), ltr = trace_boundary();
    for (int j = 0; j < n; ++j) {
      LocalProblem p = build_local(l4, j + 1 <= n - 1 ? r4[static_cast<size_t>(j) + 1] : quad_boundary(),
                                   ltr, j + 1 <= n - 1 ? rtr[static_cast<size_t>(j) + 1] : trace_boundary(),
                                   gamma.sites[static_cast<size_t>(j)]);
      ups.sites[static_cast<size_t>(j)] = solve_local(p, 1e-12);
      if (j < n - 1) {
        l4 = quad_push_left(l4, gamma.sites[static_cast<size_t>(j)], ups.sites[static_cast<size_t>(j)]);
        ltr = trace_push_left(ltr, gamma.sites[static_cast<size_t>(j)], ups.sites[static_cast<size_t>(j)]);
      }
    }
    record();

    // Right-to-left pass.
    std::vector<Tensor> l4s(static_cast<size_t>(n) + 1), ltrs(static_cast<size_t>(n) + 1);
    l4s[0] = quad_boundary();
    ltrs[0] = trace_boundary();
    for (int j = 0; j < n - 1; ++j) {
      l4s[static_cast<size_t>(j) + 1] =
          quad_push_left(l4s[static_cast<size_t>(j)], gamma.sites[static_cast<size_t>(j)],
                         ups.sites[static_cast<size_t>(j)]);
      ltrs[static_cast<size_t>(j) + 1] =
          trace_push_left(ltrs[static_cast<size_t>(j)], gamma.sites[static_cast<size_t>(j)],
                          ups.sites[static_cast<size_t>(j)]);
    }
    Tensor r4c = quad_boundary(), rtrc = trace_boundary();
    for (int j = n - 1; j >= 0; --j) {
      LocalProblem p = build_local(l4s[static_cast<size_t>(j)], r4c, ltrs[static_cast<size_t>(j)],
                                   rtrc, gamma.sites[static_cast<size_t>(j)]);
      ups.sites[static_cast<size_t>(j)] = solve_local(p, 1e-12);
      if (j > 0) {
        r4c = quad_push_right(r4c, gamma.sites[static_cast<size_t>(j)], ups.sites[static_cast<size_t>(j)]);
        rtrc = trace_push_right(rtrc, gamma.sites[static_cast<size_t>(j)], ups.sites[static_cast<size_t>(j)]);
      }
    }
    record();
  }
  return ups;
}

SuperOpMpo variational_polish(const SuperOpMpo& gamma, SuperOpMpo upsilon0, int max_iters) {
  validate(gamma);
  validate(upsilon0);
  const int n = gamma.n;
  SuperOpMpo ups = std::move(upsilon0);
  double best = inversion_residual(gamma, ups);
  SuperOpMpo best_ups = ups;

  double step = 0.1;
  for (int iter = 0; iter < max_iters; ++iter) {
    // Full environments around every site.
    std::vector<Tensor> l4(static_cast<size_t>(n) + 1), ltr(static_cast<size_t>(n) + 1);
    std::vector<Tensor> r4(static_cast<size_t>(n) + 1), rtr(static_cast<size_t>(n) + 1);
    l4[0] = quad_boundary();
    ltr[0] = trace_boundary();
    for (int j = 0; j < n; ++j) {
      l4[static_cast<size_t>(j) + 1] = quad_push_left(l4[static_cast<size_t>(j)],
                                                      gamma.sites[static_cast<size_t>(j)],
                                                      ups.sites[static_cast<size_t>(j)]);
      ltr[static_cast<size_t>(j) + 1] = trace_push_left(ltr[static_cast<size_t>(j)],
                                                        gamma.sites[static_cast<size_t>(j)],
                                                        ups.sites[static_cast<size_t>(j)]);
    }
    r4[static_cast<size_t>(n)] = quad_boundary();
    rtr[static_cast<size_t>(n)] = trace_boundary();
    for (int j = n - 1; j >= 0; --j) {
      r4[static_cast<size_t>(j)] = quad_push_right(r4[static_cast<size_t>(j) + 1],
                                                   gamma.sites[static_cast<size_t>(j)],
                                                   ups.sites[static_cast<size_t>(j)]);
      rtr[static_cast<size_t>(j)] = trace_push_right(rtr[static_cast<size_t>(j) + 1],
                                                     gamma.sites[static_cast<size_t>(j)],
                                                     ups.sites[static_cast<size_t>(j)]);
    }

    // grad_j = d Delta / d conj(Upsilon_j) = (H Upsilon)_j - conj(e_j)
    std::vector<Tensor> grads;
    grads.reserve(static_cast<size_t>(n));
    double grad_norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const Tensor& g = gamma.sites[static_cast<size_t>(j)];
      Tensor cg = conjugated(g);
      Tensor t = tensordot(l4[static_cast<size_t>(j)], cg, {0}, {0});  // [cu,g,u,o,m1,cgR]
      t = tensordot(t, g, {1, 3}, {0, 1});                             // [cu,u,m1,cgR,m2,gR]
      t = tensordot(t, ups.sites[static_cast<size_t>(j)], {1, 4}, {0, 1});  // [cu,m1,cgR,gR,i,uR]
      t = tensordot(t, r4[static_cast<size_t>(j) + 1], {2, 3, 5}, {0, 2, 3});  // [cu,m1,i,cuR]
      Tensor e = trace_env(ltr[static_cast<size_t>(j)], rtr[static_cast<size_t>(j) + 1], g);
      accumulate(t, conjugated(e), cx(-1.0, 0.0));
      grad_norm2 += norm2(t);
      grads.push_back(std::move(t));
    }
    if (grad_norm2 < 1e-28) break;

    bool improved = false;
    while (step > 1e-14) {
      SuperOpMpo cand = ups;
      for (int j = 0; j < n; ++j)
        accumulate(cand.sites[static_cast<size_t>(j)], grads[static_cast<size_t>(j)],
                   cx(-step, 0.0));
      double r = inversion_residual(gamma, cand);
      if (r < best) {
        ups = std::move(cand);
        best = r;
        best_ups = ups;
        step *= 1.25;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return best_ups;
}

}  // namespace noisetn
