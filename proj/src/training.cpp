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

#include "noisetn/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

#include "noisetn/conversion.hpp"
#include "noisetn/rng.hpp"

namespace noisetn {

namespace {

// Per-site effect-dressed double tensors
//   SE_e[(muL nuL), (muR nuR), (a a')] =
//     sum_{kappa,b,b'} A[b,a,muL,muR,kappa] conj(A[b',a',nuL,nuR,kappa]) Pi_e[b',b],
// shared by every shot of a batch. Contracting SE with a state site over
// (a a') yields that site's scalar transfer matrix.
std::vector<std::array<Tensor, 6>> build_effect_envs(const Lpdo& model) {
  std::vector<std::array<Tensor, 6>> out(static_cast<size_t>(model.n));
  for (int j = 0; j < model.n; ++j) {
    const Tensor& a = model.sites[static_cast<size_t>(j)];
    Tensor ac = conjugated(a);
    for (int e = 0; e < 6; ++e) {
      Tensor pa = tensordot(effect_by_code(e), a, {1}, {0});  // [b',a,muL,muR,k]
      Tensor se = tensordot(pa, ac, {0, 4}, {0, 4});          // [a,muL,muR, a',nuL,nuR]
      se = permuted(se, {1, 4, 2, 5, 0, 3});                  // [muL,nuL,muR,nuR,a,a']
      out[static_cast<size_t>(j)][static_cast<size_t>(e)] =
          reshaped(std::move(se), {a.dim(2) * a.dim(2), a.dim(3) * a.dim(3), 4});
    }
  }
  return out;
}

// T[(mn_l, ll), (mn_r, lr)] = sum_{aa'} SE[mn_l, mn_r, aa'] rho[ll, aa', lr].
void build_transfer(const Tensor& se, const cx* rho, int64_t ll, int64_t lr,
                    std::vector<cx>& t) {
  const int64_t mnl = se.dim(0), mnr = se.dim(1);
  const int64_t dr = mnr * lr;
  t.assign(static_cast<size_t>(mnl * ll * dr), cx(0.0, 0.0));
  const cx* sed = se.data();
  for (int64_t ml = 0; ml < mnl; ++ml)
    for (int64_t mr = 0; mr < mnr; ++mr) {
      const cx* s = sed + (ml * mnr + mr) * 4;
      for (int64_t al = 0; al < ll; ++al) {
        const cx* r = rho + al * 4 * lr;
        cx* dst = t.data() + (ml * ll + al) * dr + mr * lr;
        for (int64_t ar = 0; ar < lr; ++ar)
          dst[ar] = s[0] * r[ar] + s[1] * r[lr + ar] + s[2] * r[2 * lr + ar] +
                    s[3] * r[3 * lr + ar];
      }
    }
}

struct ShotWorkspace {
  std::vector<std::vector<cx>> t;       // per-site transfer matrices
  std::vector<std::vector<cx>> lenv;    // lenv[j]: left env entering site j
  std::vector<std::vector<cx>> renv;    // renv[j]: right env entering site j from the right
  std::vector<cx> scratch;
};

// Forward sweep for one shot; fills ws and returns the probability.
double shot_forward(const std::vector<std::array<Tensor, 6>>& se, const StateMpo& state,
                    const uint8_t* codes, ShotWorkspace& ws, bool keep_envs) {
  const int n = state.n;
  ws.t.resize(static_cast<size_t>(n));
  ws.lenv.resize(static_cast<size_t>(n) + 1);
  ws.renv.resize(static_cast<size_t>(n) + 1);

  std::vector<int64_t> dl(static_cast<size_t>(n)), dr(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Tensor& rho = state.sites[static_cast<size_t>(j)];
    const Tensor& s = se[static_cast<size_t>(j)][codes[j]];
    build_transfer(s, rho.data(), rho.dim(0), rho.dim(3), ws.t[static_cast<size_t>(j)]);
    dl[static_cast<size_t>(j)] = s.dim(0) * rho.dim(0);
    dr[static_cast<size_t>(j)] = s.dim(1) * rho.dim(3);
  }

  ws.lenv[0].assign(1, cx(1.0, 0.0));
  for (int j = 0; j < n; ++j) {
    const auto& t = ws.t[static_cast<size_t>(j)];
    const auto& l = ws.lenv[static_cast<size_t>(j)];
    auto& out = ws.lenv[static_cast<size_t>(j) + 1];
    out.assign(static_cast<size_t>(dr[static_cast<size_t>(j)]), cx(0.0, 0.0));
    for (int64_t r = 0; r < dl[static_cast<size_t>(j)]; ++r) {
      cx lv = l[static_cast<size_t>(r)];
      if (lv == cx(0.0, 0.0)) continue;
      const cx* row = t.data() + r * dr[static_cast<size_t>(j)];
      for (int64_t c = 0; c < dr[static_cast<size_t>(j)]; ++c) out[static_cast<size_t>(c)] += lv * row[c];
    }
  }
  double p = ws.lenv[static_cast<size_t>(n)][0].real();

  if (keep_envs) {
    ws.renv[static_cast<size_t>(n)].assign(1, cx(1.0, 0.0));
    for (int j = n - 1; j >= 0; --j) {
      const auto& t = ws.t[static_cast<size_t>(j)];
      const auto& r = ws.renv[static_cast<size_t>(j) + 1];
      auto& out = ws.renv[static_cast<size_t>(j)];
      out.assign(static_cast<size_t>(dl[static_cast<size_t>(j)]), cx(0.0, 0.0));
      for (int64_t row = 0; row < dl[static_cast<size_t>(j)]; ++row) {
        const cx* trow = t.data() + row * dr[static_cast<size_t>(j)];
        cx acc(0.0, 0.0);
        for (int64_t c = 0; c < dr[static_cast<size_t>(j)]; ++c) acc += trow[c] * r[static_cast<size_t>(c)];
        out[static_cast<size_t>(row)] = acc;
      }
    }
  }
  return p;
}

// G[j][e] accumulators share SE's layout [mn_l, mn_r, 4].
void accumulate_env(const Tensor& se, const cx* rho, int64_t ll, int64_t lr,
                    const std::vector<cx>& lenv, const std::vector<cx>& renv, cx w,
                    std::vector<cx>& scratch, Tensor& g) {
  const int64_t mnl = se.dim(0), mnr = se.dim(1);
  // z[aa', al, mr] = sum_ar rho[al, aa', ar] renv[mr*lr + ar]
  scratch.assign(static_cast<size_t>(4 * ll * mnr), cx(0.0, 0.0));
  for (int64_t aa = 0; aa < 4; ++aa)
    for (int64_t al = 0; al < ll; ++al) {
      const cx* r = rho + (al * 4 + aa) * lr;
      cx* zrow = scratch.data() + (aa * ll + al) * mnr;
      for (int64_t mr = 0; mr < mnr; ++mr) {
        const cx* re = renv.data() + mr * lr;
        cx acc(0.0, 0.0);
        for (int64_t ar = 0; ar < lr; ++ar) acc += r[ar] * re[ar];
        zrow[mr] = acc;
      }
    }
  cx* gd = g.data();
  for (int64_t ml = 0; ml < mnl; ++ml)
    for (int64_t al = 0; al < ll; ++al) {
      cx lv = w * lenv[static_cast<size_t>(ml * ll + al)];
      if (lv == cx(0.0, 0.0)) continue;
      for (int64_t aa = 0; aa < 4; ++aa) {
        const cx* zrow = scratch.data() + (aa * ll + al) * mnr;
        cx* grow = gd + (ml * mnr) * 4 + aa;
        for (int64_t mr = 0; mr < mnr; ++mr) grow[mr * 4] += lv * zrow[mr];
      }
    }
}

// Turns accumulated G tensors into dL/d(conj A_j).
Tensor fold_gradient(const std::array<Tensor, 6>& g, const Tensor& a) {
  const int64_t bl = a.dim(2), br = a.dim(3), ck = a.dim(4);
  Tensor out({2, 2, bl, br, ck});
  for (int e = 0; e < 6; ++e) {
    if (norm2(g[static_cast<size_t>(e)]) == 0.0) continue;
    Tensor g6 = reshaped(g[static_cast<size_t>(e)], {bl, bl, br, br, 2, 2});
    // [nuL,nuR,a',b,k] <- sum_{muL,muR,a} G[muL,nuL,muR,nuR,a,a'] A[b,a,muL,muR,k]
    Tensor ag = tensordot(g6, a, {0, 2, 4}, {2, 3, 1});
    Tensor withpi = tensordot(ag, effect_by_code(e), {3}, {1});  // [nuL,nuR,a',k,b']
    accumulate(out, permuted(withpi, {4, 2, 0, 1, 3}));
  }
  return out;
}

}  // namespace

PreparedDataset::PreparedDataset(const TomographicDataset& ds, const SuperOpMpo& layer) {
  ds.check_consistent();
  n_ = ds.meta.n;
  if (layer.n != n_)
    throw std::invalid_argument("PreparedDataset: layer qubit count mismatch");

  std::map<std::vector<uint8_t>, int> state_ids;
  std::vector<int32_t> setting_state(ds.settings.size());
  for (size_t i = 0; i < ds.settings.size(); ++i) {
    auto [it, inserted] = state_ids.try_emplace(ds.settings[i].alpha,
                                                static_cast<int>(states_.size()));
    if (inserted) states_.push_back(tomographic_state(ds.settings[i].alpha, layer));
    setting_state[i] = it->second;
  }

  shot_state_.resize(static_cast<size_t>(ds.num_shots()));
  effect_codes_.resize(static_cast<size_t>(ds.num_shots()) * static_cast<size_t>(n_));
  for (int64_t s = 0; s < ds.num_shots(); ++s) {
    const Setting& st = ds.settings[static_cast<size_t>(ds.shot_setting[static_cast<size_t>(s)])];
    shot_state_[static_cast<size_t>(s)] =
        setting_state[static_cast<size_t>(ds.shot_setting[static_cast<size_t>(s)])];
    const int8_t* z = ds.zeta(s);
    for (int j = 0; j < n_; ++j)
      effect_codes_[static_cast<size_t>(s) * static_cast<size_t>(n_) + static_cast<size_t>(j)] =
          static_cast<uint8_t>(st.beta[static_cast<size_t>(j)] * 2 + (z[j] > 0 ? 0 : 1));
  }
}

const Tensor& effect_by_code(int code) {
  static const std::array<Tensor, 6> table = [] {
    std::array<Tensor, 6> t;
    for (int basis = 0; basis < 3; ++basis)
      for (int neg = 0; neg < 2; ++neg)
        t[static_cast<size_t>(basis * 2 + neg)] = effect_matrix(basis, neg ? -1 : +1);
    return t;
  }();
  if (code < 0 || code > 5) throw std::invalid_argument("effect code out of range");
  return table[static_cast<size_t>(code)];
}

double init_sigma(int n, int chi_b, int chi_kappa) {
  return std::sqrt(2.0 / (8.0 * chi_kappa * std::pow(chi_b, 1.0 - 1.0 / n)));
}

Lpdo init_lpdo(int n, int chi_b, int chi_kappa, uint64_t seed) {
  if (n < 1 || chi_b < 1 || chi_kappa < 1)
    throw std::invalid_argument("init_lpdo: dimensions must be >= 1");
  const double sigma = init_sigma(n, chi_b, chi_kappa);
  Rng rng(seed);
  Lpdo l;
  l.n = n;
  l.chi_b = chi_b;
  l.chi_kappa = chi_kappa;
  for (int j = 0; j < n; ++j) {
    int64_t bl = (j == 0) ? 1 : chi_b;
    int64_t br = (j == n - 1) ? 1 : chi_b;
    Tensor s({2, 2, bl, br, chi_kappa});
    for (int64_t i = 0; i < s.size(); ++i) s[i] = rng.complex_gaussian(sigma);
    l.sites.push_back(std::move(s));
  }
  return l;
}

double nll_loss(const Lpdo& model, const PreparedDataset& data,
                std::span<const int64_t> shots, double prob_floor) {
  if (shots.empty()) throw std::invalid_argument("nll_loss: empty batch");
  auto se = build_effect_envs(model);
  ShotWorkspace ws;
  double sum = 0.0;
  for (int64_t s : shots) {
    double p = shot_forward(se, data.state(data.state_of_shot(s)), data.effect_codes(s),
                            ws, false);
    double logp = std::log(std::max(p, prob_floor));
    if (!std::isfinite(logp))
      throw std::runtime_error("nll_loss: non-finite log-likelihood at shot " +
                               std::to_string(s));
    sum -= logp;
  }
  return sum / static_cast<double>(shots.size());
}

double tp_penalty(const Lpdo& model) {
  OperatorMpo t = kraus_gram_mpo(model);
  double tt = op_inner(t, t).real();
  double tr = mpo_trace(t).real();
  double f = tt - 2.0 * tr + std::pow(2.0, model.n);
  return std::sqrt(std::max(f, 0.0)) / std::pow(2.0, 0.5 * model.n);
}

double total_loss(const Lpdo& model, const PreparedDataset& data,
                  std::span<const int64_t> shots, double eta_tp, double prob_floor) {
  return nll_loss(model, data, shots, prob_floor) + eta_tp * tp_penalty(model);
}

std::vector<Tensor> tp_penalty_gradient(const Lpdo& model, double* penalty_out) {
  const int n = model.n;
  OperatorMpo t = kraus_gram_mpo(model);

  // <T,T> environments; index order [conj-side bond, plain-side bond].
  std::vector<Tensor> lenv(static_cast<size_t>(n) + 1), renv(static_cast<size_t>(n) + 1);
  lenv[0] = identity_matrix(1);
  for (int j = 0; j < n; ++j) {
    const Tensor& s = t.sites[static_cast<size_t>(j)];
    Tensor x = tensordot(lenv[static_cast<size_t>(j)], s, {1}, {0});  // [c, x,y, tR]
    lenv[static_cast<size_t>(j) + 1] = tensordot(conjugated(s), x, {0, 1, 2}, {0, 1, 2});
  }
  renv[static_cast<size_t>(n)] = identity_matrix(1);
  for (int j = n - 1; j >= 0; --j) {
    const Tensor& s = t.sites[static_cast<size_t>(j)];
    Tensor x = tensordot(s, renv[static_cast<size_t>(j) + 1], {3}, {1});  // [tL,x,y,cR]
    renv[static_cast<size_t>(j)] = tensordot(conjugated(s), x, {1, 2, 3}, {1, 2, 3});  // [cL,tL]
  }

  // Tr[T] partial chains.
  std::vector<Tensor> ltr(static_cast<size_t>(n) + 1), rtr(static_cast<size_t>(n) + 1);
  ltr[0] = Tensor({1});
  ltr[0][0] = 1.0;
  rtr[static_cast<size_t>(n)] = ltr[0];
  auto traced = [](const Tensor& s) {
    Tensor m({s.dim(0), s.dim(3)});
    for (int64_t l = 0; l < s.dim(0); ++l)
      for (int64_t r = 0; r < s.dim(3); ++r)
        m[l * s.dim(3) + r] = s[((l * 2 + 0) * 2 + 0) * s.dim(3) + r] +
                              s[((l * 2 + 1) * 2 + 1) * s.dim(3) + r];
    return m;
  };
  for (int j = 0; j < n; ++j)
    ltr[static_cast<size_t>(j) + 1] =
        tensordot(ltr[static_cast<size_t>(j)], traced(t.sites[static_cast<size_t>(j)]), {0}, {0});
  for (int j = n - 1; j >= 0; --j)
    rtr[static_cast<size_t>(j)] =
        tensordot(traced(t.sites[static_cast<size_t>(j)]), rtr[static_cast<size_t>(j) + 1], {1}, {0});

  const double tt = lenv[static_cast<size_t>(n)][0].real();
  const double tr = ltr[static_cast<size_t>(n)][0].real();
  const double f = tt - 2.0 * tr + std::pow(2.0, n);
  const double delta = std::sqrt(std::max(f, 0.0)) / std::pow(2.0, 0.5 * n);
  if (penalty_out) *penalty_out = delta;

  std::vector<Tensor> grads;
  grads.reserve(static_cast<size_t>(n));
  if (f < 1e-28) {
    for (const Tensor& a : model.sites) grads.push_back(zeros(a.shape()));
    return grads;
  }
  const double scale = 1.0 / (2.0 * std::sqrt(f) * std::pow(2.0, 0.5 * n));

  for (int j = 0; j < n; ++j) {
    const Tensor& s = t.sites[static_cast<size_t>(j)];
    const Tensor& a = model.sites[static_cast<size_t>(j)];

    // E = d f / d T_j  (plain side), legs [tL, x, y, tR]
    Tensor e = tensordot(lenv[static_cast<size_t>(j)], conjugated(s), {0}, {0});  // [tL, x,y,cR]
    e = tensordot(e, renv[static_cast<size_t>(j) + 1], {3}, {0});                 // [tL,x,y,tR]
    // minus the identity-chain environment (d of -2 Re Tr[T])
    for (int64_t l = 0; l < e.dim(0); ++l)
      for (int64_t x = 0; x < 2; ++x)
        for (int64_t r = 0; r < e.dim(3); ++r)
          e[((l * 2 + x) * 2 + x) * e.dim(3) + r] -=
              ltr[static_cast<size_t>(j)][l] * rtr[static_cast<size_t>(j) + 1][r];

    // chain rule through T_j = sum_{b,k} conj(A[b,x,..]) A[b,y,..]
    const int64_t bl = a.dim(2), br = a.dim(3);
    Tensor e6 = reshaped(e, {bl, bl, 2, 2, br, br});  // [lA,lC,x,y,rA,rC]
    Tensor term1 = tensordot(e6, a, {0, 3, 4}, {2, 1, 3});                 // [lC,x,rC,b,k]
    term1 = permuted(term1, {3, 1, 0, 2, 4});                              // [b,x,lC,rC,k]
    Tensor term2 = tensordot(conjugated(e6), a, {1, 2, 5}, {2, 1, 3});     // [lA,y,rA,b,k]
    term2 = permuted(term2, {3, 1, 0, 2, 4});                              // [b,y,lA,rA,k]
    Tensor g = added(term1, term2);
    grads.push_back(scaled(std::move(g), scale));
  }
  return grads;
}

std::vector<Tensor> loss_gradient(const Lpdo& model, const PreparedDataset& data,
                                  std::span<const int64_t> shots, double eta_tp,
                                  double* loss_out, double prob_floor, int threads) {
  if (shots.empty()) throw std::invalid_argument("loss_gradient: empty batch");
  const int n = model.n;
  auto se = build_effect_envs(model);
  const double inv_batch = 1.0 / static_cast<double>(shots.size());

  // Fixed chunk grid: results are independent of the worker count.
  const int chunks = shots.size() >= 16 ? 8 : 1;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, chunks));

  struct ChunkAccum {
    std::vector<std::array<Tensor, 6>> g;
    double loss_sum = 0.0;
    bool bad = false;
    int64_t bad_shot = 0;
  };
  std::vector<ChunkAccum> accums(static_cast<size_t>(chunks));
  for (auto& acc : accums) {
    acc.g.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
      for (int e = 0; e < 6; ++e)
        acc.g[static_cast<size_t>(j)][static_cast<size_t>(e)] =
            zeros(se[static_cast<size_t>(j)][static_cast<size_t>(e)].shape());
  }

  auto run_chunk = [&](int chunk) {
    ChunkAccum& acc = accums[static_cast<size_t>(chunk)];
    ShotWorkspace ws;
    const int64_t lo = static_cast<int64_t>(shots.size()) * chunk / chunks;
    const int64_t hi = static_cast<int64_t>(shots.size()) * (chunk + 1) / chunks;
    for (int64_t i = lo; i < hi; ++i) {
      int64_t shot = shots[static_cast<size_t>(i)];
      const StateMpo& state = data.state(data.state_of_shot(shot));
      const uint8_t* codes = data.effect_codes(shot);
      double p = shot_forward(se, state, codes, ws, true);
      double pc = std::max(p, prob_floor);
      double logp = std::log(pc);
      if (!std::isfinite(logp)) {
        acc.bad = true;
        acc.bad_shot = shot;
        return;
      }
      acc.loss_sum -= logp;
      const cx w(-inv_batch / pc, 0.0);
      for (int j = 0; j < n; ++j) {
        const Tensor& rho = state.sites[static_cast<size_t>(j)];
        accumulate_env(se[static_cast<size_t>(j)][codes[j]], rho.data(), rho.dim(0),
                       rho.dim(3), ws.lenv[static_cast<size_t>(j)],
                       ws.renv[static_cast<size_t>(j) + 1], w, ws.scratch,
                       acc.g[static_cast<size_t>(j)][codes[j]]);
      }
    }
  };

  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int c = w; c < chunks; c += workers) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& acc : accums)
    if (acc.bad)
      throw std::runtime_error("loss_gradient: non-finite probability at shot " +
                               std::to_string(acc.bad_shot));

  // Reduce chunks in fixed order, then fold the per-effect environments.
  double loss = 0.0;
  for (const auto& acc : accums) loss += acc.loss_sum;
  loss *= inv_batch;
  for (int j = 0; j < n; ++j)
    for (int e = 0; e < 6; ++e)
      for (int c = 1; c < chunks; ++c)
        accumulate(accums[0].g[static_cast<size_t>(j)][static_cast<size_t>(e)],
                   accums[static_cast<size_t>(c)].g[static_cast<size_t>(j)][static_cast<size_t>(e)]);

  std::vector<Tensor> grads;
  grads.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    grads.push_back(fold_gradient(accums[0].g[static_cast<size_t>(j)],
                                  model.sites[static_cast<size_t>(j)]));

  if (eta_tp != 0.0) {
    double delta = 0.0;
    std::vector<Tensor> tp_grads = tp_penalty_gradient(model, &delta);
    for (int j = 0; j < n; ++j)
      accumulate(grads[static_cast<size_t>(j)], tp_grads[static_cast<size_t>(j)], eta_tp);
    loss += eta_tp * delta;
  }
  if (loss_out) *loss_out = loss;
  return grads;
}

Lpdo pre_optimize_tp(Lpdo model, double target, int max_iters) {
  double delta = tp_penalty(model);
  if (delta <= target) return model;
  double lr = 0.05;
  for (int iter = 0; iter < max_iters && delta > target; ++iter) {
    std::vector<Tensor> grads = tp_penalty_gradient(model, &delta);
    if (delta <= target) break;
    bool improved = false;
    while (lr > 1e-12) {
      Lpdo candidate = model;
      for (int j = 0; j < model.n; ++j)
        accumulate(candidate.sites[static_cast<size_t>(j)], grads[static_cast<size_t>(j)],
                   cx(-lr, 0.0));
      double cand_delta = tp_penalty(candidate);
      if (cand_delta < delta) {
        model = std::move(candidate);
        delta = cand_delta;
        lr *= 1.2;
        improved = true;
        break;
      }
      lr *= 0.5;
    }
    if (!improved) break;
  }
  if (delta > target)
    std::cerr << "[noisetn] warning: TP pre-optimization stopped at delta_TP=" << delta
              << " (target " << target << ")\n";
  double trace_ratio = lpdo_trace(model).real() / std::pow(2.0, model.n);
  if (trace_ratio < 0.5 || trace_ratio > 2.0)
    std::cerr << "[noisetn] warning: pre-optimized LPDO trace ratio " << trace_ratio
              << " outside [0.5, 2]\n";
  return model;
}

namespace {

struct AdamState {
  std::vector<std::vector<cx>> m;
  std::vector<std::vector<double>> v;
  int64_t t = 0;

  explicit AdamState(const Lpdo& model) {
    for (const Tensor& s : model.sites) {
      m.emplace_back(static_cast<size_t>(s.size()), cx(0.0, 0.0));
      v.emplace_back(static_cast<size_t>(s.size()), 0.0);
    }
  }

  void step(Lpdo& model, const std::vector<Tensor>& grads, double lr,
            const AdamParams& p) {
    ++t;
    const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(t));
    for (size_t j = 0; j < model.sites.size(); ++j) {
      Tensor& site = model.sites[j];
      const Tensor& g = grads[j];
      auto& mj = m[j];
      auto& vj = v[j];
      for (int64_t i = 0; i < site.size(); ++i) {
        mj[static_cast<size_t>(i)] =
            p.beta1 * mj[static_cast<size_t>(i)] + (1.0 - p.beta1) * g[i];
        vj[static_cast<size_t>(i)] =
            p.beta2 * vj[static_cast<size_t>(i)] + (1.0 - p.beta2) * std::norm(g[i]);
        cx mhat = mj[static_cast<size_t>(i)] / bc1;
        double vhat = vj[static_cast<size_t>(i)] / bc2;
        site[i] -= lr * mhat / (std::sqrt(vhat) + p.eps);
      }
    }
  }
};

void shuffle_indices(std::vector<int64_t>& idx, Rng& rng) {
  for (size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[static_cast<size_t>(rng.below(i))]);
}

}  // namespace

std::pair<Lpdo, TrainReport> train(const TomographicDataset& ds,
                                   const SuperOpMpo& ideal_layer,
                                   const TrainConfig& config,
                                   const SuperOpMpo* true_channel) {
  const int64_t total = ds.num_shots();
  if (total < 2) throw std::invalid_argument("train: dataset is empty or too small");
  const int n = ds.meta.n;

  PreparedDataset data(ds, ideal_layer);

  int64_t batch = config.batch_size > 0
                      ? config.batch_size
                      : (total >= 10000 ? 250 : 50);
  batch = std::min<int64_t>(batch, total);
  const int64_t test_count = std::max<int64_t>(
      1, std::min<int64_t>(total / 10, 12500));

  std::vector<int64_t> perm(static_cast<size_t>(total));
  for (int64_t i = 0; i < total; ++i) perm[static_cast<size_t>(i)] = i;
  Rng split_rng = Rng::child(config.seed, 0x5911u);
  shuffle_indices(perm, split_rng);
  std::vector<int64_t> test_idx(perm.begin(), perm.begin() + test_count);
  std::vector<int64_t> train_idx(perm.begin() + test_count, perm.end());
  const int64_t batches_per_epoch =
      std::max<int64_t>(1, static_cast<int64_t>(train_idx.size()) / batch);

  Lpdo model = pre_optimize_tp(init_lpdo(n, config.chi_b, config.chi_kappa, config.seed));
  AdamState adam(model);
  TrainReport report;

  Lpdo best_model = model;
  double best_test = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  int64_t step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng epoch_rng = Rng::child(config.seed, 0x10000u + static_cast<uint64_t>(epoch));
    shuffle_indices(train_idx, epoch_rng);

    double loss_sum = 0.0;
    for (int64_t b = 0; b < batches_per_epoch; ++b) {
      std::span<const int64_t> slice(train_idx.data() + b * batch,
                                     static_cast<size_t>(batch));
      double lr = config.lr0;
      if (step >= config.warmup_steps)
        lr = config.lr0 *
             std::pow(config.decay_gamma,
                      static_cast<double>(step - config.warmup_steps) /
                          static_cast<double>(batches_per_epoch));
      double loss = 0.0;
      std::vector<Tensor> grads = loss_gradient(model, data, slice, config.eta_tp, &loss,
                                                config.prob_floor, config.threads);
      if (!std::isfinite(loss))
        throw std::runtime_error("train: non-finite loss at step " + std::to_string(step));
      adam.step(model, grads, lr, config.adam);
      ++step;
      loss_sum += loss;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.step = step;
    stats.train_loss = loss_sum / static_cast<double>(batches_per_epoch);
    stats.test_loss = nll_loss(model, data, test_idx, config.prob_floor);
    stats.tp_penalty = tp_penalty(model);
    stats.trace_ratio = lpdo_trace(model).real() / std::pow(2.0, n);
    if (true_channel) stats.delta = reconstruction_error(model, *true_channel);
    report.history.push_back(stats);

    // Checkpoint selection uses the full test loss including the TP penalty:
    // a non-trace-preserving model scales every predicted probability and so
    // can undercut the bare NLL by log Tr[Lambda]/2^n.
    double selection = stats.test_loss + config.eta_tp * stats.tp_penalty;
    if (selection < best_test) {
      best_test = selection;
      best_epoch = epoch;
      best_model = model;
    }
    if (epoch - best_epoch >= config.patience) break;
  }

  report.best_epoch = best_epoch;
  report.best_test_loss = best_test;
  report.total_steps = step;
  return {std::move(best_model), std::move(report)};
}

double reconstruction_error(const Lpdo& model, const SuperOpMpo& true_channel) {
  SuperOpMpo learned = lpdo_to_superop(model);
  if (true_channel.basis == Basis::Pauli) learned = to_pauli_basis(learned);
  return frobenius_error(learned, true_channel);
}

void write_metrics_csv(const std::string& path, const TrainReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << "epoch,step,train_loss,test_loss,tp_penalty,trace_ratio,delta\n";
  char buf[64];
  for (const EpochStats& s : report.history) {
    out << s.epoch << "," << s.step << ",";
    auto emit = [&](double v, bool last) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << (last ? "\n" : ",");
    };
    emit(s.train_loss, false);
    emit(s.test_loss, false);
    emit(s.tp_penalty, false);
    emit(s.trace_ratio, false);
    if (s.delta >= 0.0)
      emit(s.delta, true);
    else
      out << "\n";
  }
}

}  // namespace noisetn
