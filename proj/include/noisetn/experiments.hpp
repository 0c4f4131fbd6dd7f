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

#ifndef NOISETN_EXPERIMENTS_HPP
#define NOISETN_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "noisetn/noise_models.hpp"
#include "noisetn/tem.hpp"
#include "noisetn/tomography.hpp"
#include "noisetn/training.hpp"

namespace noisetn {

// Bond/Kraus dimensions used throughout the experiments: (2, 16) for
// depolarizing-type channels, (4, 4) for sparse Pauli-Lindblad ones.
TrainConfig default_train_config(const NoiseModelSpec& spec);

// Sample a tomographic dataset for the even-CNOT-layer experiment.
TomographicDataset sample_experiment_dataset(const NoiseModelSpec& spec, int64_t n_set,
                                             int64_t n_shots, uint64_t seed);

struct CharacterizationResult {
  Lpdo model;
  TrainReport report;
  SuperOpMpo truth;  // Pauli basis
  double delta = 0.0;
};

// Full pipeline: build the channel, sample data, train, report the
// reconstruction error of the best checkpoint.
CharacterizationResult run_characterization(const NoiseModelSpec& spec, int64_t n_set,
                                            int64_t n_shots, uint64_t data_seed,
                                            TrainConfig config);

struct TemRow {
  int depth = 0;
  double unmitigated = 0.0;
  double mitigated_true = 0.0;
  double mitigated_learned = 0.0;  // NaN when no learned inverse was given
};

// Fig.-6-style experiment: one master circuit, evaluated at every prefix
// depth 1..m_max.
std::vector<TemRow> run_tem_experiment(const SplSpec& noise, int m_max,
                                       uint64_t circuit_seed,
                                       const SuperOpMpo& inverse_true,
                                       const SuperOpMpo* inverse_learned,
                                       const TemOptions& options = {});

void write_tem_csv(const std::string& path, const std::vector<TemRow>& rows);

// Least-squares fit y = a + b x; returns (a, b, r_squared).
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace noisetn

#endif  // NOISETN_EXPERIMENTS_HPP
