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

#ifndef NOISETN_TOMOGRAPHY_HPP
#define NOISETN_TOMOGRAPHY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "noisetn/mpo.hpp"

namespace noisetn {

// One experimental configuration: a SIC input index (0..3) and a measurement
// basis (X=0, Y=1, Z=2) per qubit.
struct Setting {
  std::vector<uint8_t> alpha;
  std::vector<uint8_t> beta;
};

struct ShotRecord {
  int32_t setting_index = 0;
  std::vector<int8_t> zeta;  // +1 / -1 per qubit
};

struct DatasetMeta {
  int version = 1;
  int n = 0;
  int64_t n_set = 0;
  int64_t n_shots = 0;
  uint64_t seed = 0;
  std::string noise;  // free-form descriptor of the sampled channel
};

// Shot records are stored struct-of-arrays so multi-million-shot datasets stay
// compact; ShotRecord views are materialized on demand.
class TomographicDataset {
 public:
  DatasetMeta meta;
  std::vector<Setting> settings;
  std::vector<int32_t> shot_setting;  // one entry per shot
  std::vector<int8_t> zeta_flat;      // n entries per shot

  int64_t num_shots() const { return static_cast<int64_t>(shot_setting.size()); }
  const int8_t* zeta(int64_t shot) const { return zeta_flat.data() + shot * meta.n; }
  ShotRecord shot(int64_t i) const;
  void append_shot(int32_t setting_index, const int8_t* zeta);
  void check_consistent() const;
};

// I.i.d. uniform settings: alpha_j over the 4 SIC states, beta_j over the 3
// Pauli bases. Deterministic per seed.
std::vector<Setting> generate_settings(int n, int64_t n_set, uint64_t seed);

// Tomographic state rho_alpha = U[rho_alpha^in] where U is the ideal layer.
StateMpo tomographic_state(const std::vector<uint8_t>& alpha, const SuperOpMpo& layer);

// Weight vector w with Tr[sigma Pi] = sum_p w[p] sigma_p for the per-qubit
// effect Pi_zeta(beta), in the given vectorization basis.
Tensor effect_weight_vec(int basis, int zeta, Basis vec_basis);

// p(zeta | alpha, beta) = Tr[N[rho_alpha] (x)_j Pi_{zeta_j}(beta_j)].
double born_probability(const SuperOpMpo& noise, const StateMpo& rho_alpha,
                        const Setting& setting, const std::vector<int8_t>& zeta);

// Draws n_shots outcomes per setting from the exact joint distribution by
// sequential conditional sampling along the chain. Deterministic per seed,
// with one child RNG stream per setting.
TomographicDataset sample_shots(const SuperOpMpo& noise, const SuperOpMpo& layer,
                                const std::vector<Setting>& settings, int64_t n_shots,
                                uint64_t seed, const std::string& noise_descriptor);

void write_dataset(const std::string& path, const TomographicDataset& ds);
TomographicDataset read_dataset(const std::string& path);

}  // namespace noisetn

#endif  // NOISETN_TOMOGRAPHY_HPP
