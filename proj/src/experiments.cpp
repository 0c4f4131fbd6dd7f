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

#include "noisetn/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace noisetn {

TrainConfig default_train_config(const NoiseModelSpec& spec) {
  TrainConfig cfg;
  if (std::holds_alternative<SplSpec>(spec)) {
    cfg.chi_b = 4;
    cfg.chi_kappa = 4;
  } else {
    cfg.chi_b = 2;
    cfg.chi_kappa = 16;
  }
  return cfg;
}

TomographicDataset sample_experiment_dataset(const NoiseModelSpec& spec, int64_t n_set,
                                             int64_t n_shots, uint64_t seed) {
  const int n = qubit_count(spec);
  if (n < 2)
    throw std::invalid_argument("sample_experiment_dataset: n >= 2 required");
  SuperOpMpo noise = build_channel(spec);
  SuperOpMpo layer = cnot_layer_superop(n, Parity::Even);
  std::vector<Setting> settings = generate_settings(n, n_set, seed);
  return sample_shots(noise, layer, settings, n_shots, seed, describe(spec));
}

CharacterizationResult run_characterization(const NoiseModelSpec& spec, int64_t n_set,
                                            int64_t n_shots, uint64_t data_seed,
                                            TrainConfig config) {
  const int n = qubit_count(spec);
  TomographicDataset ds = sample_experiment_dataset(spec, n_set, n_shots, data_seed);
  SuperOpMpo layer = cnot_layer_superop(n, Parity::Even);

  CharacterizationResult result{Lpdo{}, TrainReport{}, build_channel(spec), 0.0};
  auto [model, report] = train(ds, layer, config, &result.truth);
  result.model = std::move(model);
  result.report = std::move(report);
  result.delta = reconstruction_error(result.model, result.truth);
  return result;
}

std::vector<TemRow> run_tem_experiment(const SplSpec& noise, int m_max,
                                       uint64_t circuit_seed,
                                       const SuperOpMpo& inverse_true,
                                       const SuperOpMpo* inverse_learned,
                                       const TemOptions& options) {
  CliffordCircuit master = build_circuit(noise.n, m_max, circuit_seed);
  std::vector<TemRow> rows;
  rows.reserve(static_cast<size_t>(m_max));
  for (int depth = 1; depth <= m_max; ++depth) {
    CliffordCircuit prefix;
    prefix.n = master.n;
    prefix.seed = master.seed;
    prefix.steps.assign(master.steps.begin(), master.steps.begin() + depth);

    TemRow row;
    row.depth = depth;
    row.unmitigated = noisy_expectation(prefix, noise);
    row.mitigated_true = mitigated_expectation(prefix, inverse_true, noise, options);
    row.mitigated_learned =
        inverse_learned
            ? mitigated_expectation(prefix, *inverse_learned, noise, options)
            : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

void write_tem_csv(const std::string& path, const std::vector<TemRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write TEM csv: " + path);
  out << "depth,unmitigated,mitigated_true,mitigated_learned\n";
  char buf[64];
  auto emit = [&](double v, bool last) {
    if (std::isnan(v)) {
      out << (last ? "\n" : ",");
      return;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << (last ? "\n" : ",");
  };
  for (const TemRow& r : rows) {
    out << r.depth << ",";
    emit(r.unmitigated, false);
    emit(r.mitigated_true, false);
    emit(r.mitigated_learned, true);
  }
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace noisetn
