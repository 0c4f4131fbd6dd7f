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

#ifndef NOISETN_TRAINING_HPP
#define NOISETN_TRAINING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "noisetn/lpdo.hpp"
#include "noisetn/mpo.hpp"
#include "noisetn/tomography.hpp"

namespace noisetn {

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  int chi_b = 2;
  int chi_kappa = 16;
  double eta_tp = 1.2;   // weight of the trace-preservation penalty
  AdamParams adam;
  double lr0 = 1e-2;     // initial learning rate
  double decay_gamma = 0.9;
  int warmup_steps = 500;
  int batch_size = 0;    // 0: 250, or 50 when the dataset is small (N < 1e4)
  int epochs = 200;
  int patience = 25;     // early stop after this many epochs without test improvement
  uint64_t seed = 0;
  int threads = 0;       // 0: hardware concurrency (never changes results)
  double prob_floor = 1e-12;
};

struct EpochStats {
  int epoch = 0;
  int64_t step = 0;       // global gradient steps completed
  double train_loss = 0;  // mean total loss over the epoch's batches
  double test_loss = 0;   // D_KL on the held-out split
  double tp_penalty = 0;
  double trace_ratio = 0;  // Tr[Lambda] / 2^n
  double delta = -1.0;     // reconstruction error vs the true channel, -1 if unknown
};

struct TrainReport {
  std::vector<EpochStats> history;
  int best_epoch = -1;
  // Minimum of test_loss + eta_tp * tp_penalty over epochs; the returned
  // model is the checkpoint attaining it.
  double best_test_loss = 0.0;
  int64_t total_steps = 0;
};

// Tomographic data rearranged for loss evaluation: one precomputed state per
// distinct alpha, plus per-shot effect codes (basis * 2 + (zeta < 0)).
class PreparedDataset {
 public:
  PreparedDataset(const TomographicDataset& ds, const SuperOpMpo& ideal_layer);

  int n() const { return n_; }
  int64_t size() const { return static_cast<int64_t>(shot_state_.size()); }
  int state_count() const { return static_cast<int>(states_.size()); }
  const StateMpo& state(int id) const { return states_[static_cast<size_t>(id)]; }
  int state_of_shot(int64_t shot) const { return shot_state_[static_cast<size_t>(shot)]; }
  const uint8_t* effect_codes(int64_t shot) const {
    return effect_codes_.data() + shot * n_;
  }

 private:
  int n_ = 0;
  std::vector<StateMpo> states_;
  std::vector<int32_t> shot_state_;
  std::vector<uint8_t> effect_codes_;
};

// The six per-qubit effects indexed by code = basis * 2 + (zeta < 0 ? 1 : 0).
const Tensor& effect_by_code(int code);

// Gaussian initialization with sigma^2 = 2 / (8 chi_kappa chi_b^{1 - 1/n}),
// which makes E[Tr Lambda] = 2^n.
Lpdo init_lpdo(int n, int chi_b, int chi_kappa, uint64_t seed);
double init_sigma(int n, int chi_b, int chi_kappa);

// Negative log-likelihood -(1/|batch|) sum log Tr[Lambda(rho) Pi], with
// probabilities floored at `prob_floor` inside the log.
double nll_loss(const Lpdo& model, const PreparedDataset& data,
                std::span<const int64_t> shots, double prob_floor = 1e-12);

// delta_TP = |Tr_out[Lambda] - I|_F / 2^{n/2}.
double tp_penalty(const Lpdo& model);

double total_loss(const Lpdo& model, const PreparedDataset& data,
                  std::span<const int64_t> shots, double eta_tp,
                  double prob_floor = 1e-12);

// Analytic Wirtinger gradient dL/d(conj theta) of the total loss, one tensor
// per site. Also returns the loss value when loss_out is non-null.
std::vector<Tensor> loss_gradient(const Lpdo& model, const PreparedDataset& data,
                                  std::span<const int64_t> shots, double eta_tp,
                                  double* loss_out = nullptr,
                                  double prob_floor = 1e-12, int threads = 1);

// Gradient of delta_TP alone (used by the pre-optimizer and in tests).
std::vector<Tensor> tp_penalty_gradient(const Lpdo& model, double* penalty_out = nullptr);

// Plain gradient descent on delta_TP until it drops below `target` (default
// 1e-2) or `max_iters` iterations; warns on stderr when it does not converge.
Lpdo pre_optimize_tp(Lpdo model, double target = 1e-2, int max_iters = 500);

// Full training loop: Adam on the conjugated gradient with warmup plus
// exponential learning-rate decay, held-out test split, best-checkpoint
// tracking and early stopping. `true_channel` (Pauli basis), when given, adds
// the per-epoch reconstruction error to the report.
std::pair<Lpdo, TrainReport> train(const TomographicDataset& ds,
                                   const SuperOpMpo& ideal_layer,
                                   const TrainConfig& config,
                                   const SuperOpMpo* true_channel = nullptr);

// Delta between a trained LPDO and a reference channel (Pauli-basis MPO).
double reconstruction_error(const Lpdo& model, const SuperOpMpo& true_channel);

void write_metrics_csv(const std::string& path, const TrainReport& report);

}  // namespace noisetn

#endif  // NOISETN_TRAINING_HPP
