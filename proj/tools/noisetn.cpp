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

// Command-line driver for the noise characterization and mitigation pipeline:
//   sample        simulate a tomographic experiment and write a dataset
//   train         fit an LPDO to a dataset
//   evaluate      compare a trained model against a reference channel
//   ptm           query Pauli transfer matrix coefficients
//   invert        compute an MPO inverse of a channel
//   mitigate      run the noisy-Clifford-circuit mitigation experiment
//   oracle-check  cross-validate tensor network paths against dense algebra
//   scaling       reconstruction-error sweeps over shots or qubits
//   rerun         re-execute a run from its manifest
//
// Every run writes <output>.manifest.json with the resolved options, so any
// artifact can be regenerated bit for bit.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noisetn/conversion.hpp"
#include "noisetn/experiments.hpp"
#include "noisetn/inversion.hpp"
#include "noisetn/oracle.hpp"
#include "noisetn/rng.hpp"
#include "noisetn/serialize.hpp"
#include "noisetn/tem.hpp"

using json = nlohmann::json;
using namespace noisetn;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---- manifests ---------------------------------------------------------------

std::map<std::string, std::vector<std::string>> collect_options(const CLI::App& app) {
  std::map<std::string, std::vector<std::string>> out;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_name().rfind("--", 0) != 0) continue;
    if (opt->count() == 0) continue;
    out[opt->get_name()] = opt->results();
  }
  return out;
}

uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const CLI::App& cmd, const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "noisetn";
  j["version"] = kVersion;
  j["command"] = command;
  json opts = json::object();
  std::string canonical;
  for (const auto& [name, values] : collect_options(cmd)) {
    opts[name] = values;
    for (const std::string& v : values) canonical += name + "=" + v + "\n";
  }
  j["options"] = opts;
  char hash[32];
  std::snprintf(hash, sizeof hash, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(command + "\n" + canonical)));
  j["config_hash"] = hash;
  j["outputs"] = outputs;
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write manifest: " + out_path);
  out << j.dump(2) << "\n";
}

// ---- noise flags --------------------------------------------------------------

struct NoiseFlags {
  std::string kind;        // identity|depol|coherent|spl
  std::string spec_file;
  int qubits = 0;
  double p = 1e-3;
  double epsilon = 1e-3;
  uint64_t noise_seed = 0;
  bool noise_seed_set = false;

  void attach(CLI::App* cmd, bool required) {
    auto* kind_opt = cmd->add_option("--noise", kind,
                                     "noise kind: identity, depol, coherent or spl");
    auto* file_opt =
        cmd->add_option("--noise-spec", spec_file, "noise spec file (overrides --noise)");
    if (required) {
      kind_opt->check(CLI::IsMember({"identity", "depol", "coherent", "spl"}));
      file_opt->check(CLI::ExistingFile);
    }
    cmd->add_option("--p", p, "depolarizing rate");
    cmd->add_option("--epsilon", epsilon, "coherent rotation strength");
    cmd->add_option("--noise-seed", noise_seed, "seed for sampled noise parameters")
        ->each([this](const std::string&) { noise_seed_set = true; });
  }

  bool given() const { return !kind.empty() || !spec_file.empty(); }

  NoiseModelSpec build(int n) const {
    if (!spec_file.empty()) return load_noise_spec(spec_file);
    if (kind == "identity") return IdentityNoiseSpec{n};
    if (kind == "depol") return DepolBrickworkSpec{n, p};
    if (kind == "coherent") {
      if (!noise_seed_set)
        throw CLI::ValidationError("--noise-seed is required for coherent noise");
      return sample_coherent_spec({n, p}, epsilon, noise_seed);
    }
    if (kind == "spl") {
      if (!noise_seed_set)
        throw CLI::ValidationError("--noise-seed is required for spl noise");
      return sample_spl_spec(n, noise_seed);
    }
    throw CLI::ValidationError("unknown --noise kind '" + kind + "'");
  }
};

SuperOpMpo inverse_of_channel(const SuperOpMpo& gamma, int chi, int sweeps,
                              int polish_iters) {
  SuperOpMpo ups = invert_sweep(gamma, chi, sweeps);
  if (polish_iters > 0) ups = variational_polish(gamma, ups, polish_iters);
  return ups;
}

// ---- subcommand implementations ------------------------------------------------

int run_sample(const CLI::App& cmd, int qubits, const NoiseFlags& noise, int64_t settings,
               int64_t shots, uint64_t seed, const std::string& out) {
  NoiseModelSpec spec = noise.build(qubits);
  TomographicDataset ds = sample_experiment_dataset(spec, settings, shots, seed);
  write_dataset(out, ds);
  write_manifest(out + ".manifest.json", "sample", cmd, {out});
  std::printf("wrote %lld shots (%lld settings x %lld) to %s\n",
              static_cast<long long>(ds.num_shots()), static_cast<long long>(settings),
              static_cast<long long>(shots), out.c_str());
  return 0;
}

int run_train(const CLI::App& cmd, const std::string& data_path, TrainConfig cfg,
              const NoiseFlags& true_noise, const std::string& out,
              const std::string& metrics) {
  TomographicDataset ds = read_dataset(data_path);
  SuperOpMpo layer = ds.meta.n >= 2 ? cnot_layer_superop(ds.meta.n, Parity::Even)
                                    : identity_superop(ds.meta.n, Basis::Pauli);
  std::optional<SuperOpMpo> truth;
  if (true_noise.given()) truth = build_channel(true_noise.build(ds.meta.n));

  auto [model, report] = train(ds, layer, cfg, truth ? &*truth : nullptr);
  save_model(out, AnyModel{model});
  std::vector<std::string> outputs = {out};
  if (!metrics.empty()) {
    write_metrics_csv(metrics, report);
    outputs.push_back(metrics);
  }
  write_manifest(out + ".manifest.json", "train", cmd, outputs);

  std::printf("trained %d epochs (best %d, penalized test loss %.6f)\n",
              static_cast<int>(report.history.size()), report.best_epoch,
              report.best_test_loss);
  std::printf("delta_TP %.3e, trace ratio %.6f\n", tp_penalty(model),
              lpdo_trace(model).real() / std::pow(2.0, ds.meta.n));
  if (truth)
    std::printf("reconstruction error Delta = %.6e\n", reconstruction_error(model, *truth));
  return 0;
}

int run_evaluate(const std::string& model_path, const NoiseFlags& noise,
                 const std::string& data_path) {
  Lpdo model = load_lpdo(model_path);
  std::printf("model: n=%d chi_b=%d chi_kappa=%d\n", model.n, model.chi_b, model.chi_kappa);
  std::printf("delta_TP %.6e, trace ratio %.8f\n", tp_penalty(model),
              lpdo_trace(model).real() / std::pow(2.0, model.n));
  if (noise.given()) {
    SuperOpMpo truth = build_channel(noise.build(model.n));
    std::printf("reconstruction error Delta = %.6e\n", reconstruction_error(model, truth));
  }
  if (!data_path.empty()) {
    TomographicDataset ds = read_dataset(data_path);
    SuperOpMpo layer = ds.meta.n >= 2 ? cnot_layer_superop(ds.meta.n, Parity::Even)
                                      : identity_superop(ds.meta.n, Basis::Pauli);
    PreparedDataset data(ds, layer);
    std::vector<int64_t> all(static_cast<size_t>(ds.num_shots()));
    for (int64_t i = 0; i < ds.num_shots(); ++i) all[static_cast<size_t>(i)] = i;
    std::printf("dataset NLL %.6f over %lld shots\n", nll_loss(model, data, all),
                static_cast<long long>(ds.num_shots()));
  }
  return 0;
}

int run_ptm(const std::string& model_path, const NoiseFlags& noise, int qubits,
            std::vector<std::string> paulis, int sample_count, int max_weight,
            uint64_t seed) {
  std::optional<SuperOpMpo> learned;
  if (!model_path.empty()) learned = lpdo_to_pauli_superop(load_lpdo(model_path));
  std::optional<SuperOpMpo> truth;
  int n = qubits;
  if (learned) n = learned->n;
  if (noise.given()) {
    if (n == 0) throw CLI::ValidationError("--qubits is required with --noise");
    truth = build_channel(noise.build(n));
    n = truth->n;
  }
  if (!learned && !truth)
    throw CLI::ValidationError("ptm needs --model and/or --noise");

  if (paulis.empty() && sample_count > 0) {
    // Sample diagonal strings uniformly per weight, heavier weights last.
    Rng rng(seed);
    for (int i = 0; i < sample_count; ++i) {
      int w = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(
                  std::min(max_weight, n))));
      std::string s(static_cast<size_t>(n), 'I');
      // choose w distinct sites
      std::vector<int> sites;
      while (static_cast<int>(sites.size()) < w) {
        int cand = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        bool dup = false;
        for (int x : sites) dup = dup || (x == cand);
        if (!dup) sites.push_back(cand);
      }
      for (int x : sites) s[static_cast<size_t>(x)] = "XYZ"[rng.below(3)];
      paulis.push_back(s);
    }
  }
  if (paulis.empty()) throw CLI::ValidationError("ptm needs --pauli or --sample");

  std::printf("%-*s  %14s  %14s\n", n, "pauli", "true", "model");
  for (const std::string& s : paulis) {
    double t = truth ? ptm_coefficient(*truth, s, s) : std::nan("");
    double m = learned ? ptm_coefficient(*learned, s, s) : std::nan("");
    std::printf("%-*s  %14.8f  %14.8f\n", n, s.c_str(), t, m);
  }
  return 0;
}

int run_invert(const CLI::App& cmd, const std::string& model_path, const NoiseFlags& noise,
               int qubits, int chi, int sweeps, int polish_iters, const std::string& out) {
  SuperOpMpo gamma = [&] {
    if (!model_path.empty()) {
      AnyModel m = load_model(model_path);
      if (auto* l = std::get_if<Lpdo>(&m)) return lpdo_to_pauli_superop(*l);
      if (auto* s = std::get_if<SuperOpMpo>(&m))
        return s->basis == Basis::Pauli ? *s : to_pauli_basis(*s);
      throw std::runtime_error("invert: model file must hold an LPDO or superoperator");
    }
    if (qubits == 0) throw CLI::ValidationError("--qubits is required with --noise");
    return build_channel(noise.build(qubits));
  }();

  std::vector<double> history;
  SuperOpMpo ups = invert_sweep(gamma, chi, sweeps, &history);
  double sweep_residual = history.empty() ? inversion_residual(gamma, ups) : history.back();
  if (polish_iters > 0) ups = variational_polish(gamma, ups, polish_iters);
  double residual = inversion_residual(gamma, ups);

  save_model(out, AnyModel{ups});
  write_manifest(out + ".manifest.json", "invert", cmd, {out});
  double norm = std::pow(4.0, gamma.n);
  std::printf("sweep residual   Delta_phi = %.6e  (normalized %.6e)\n", sweep_residual,
              sweep_residual / norm);
  std::printf("final residual   Delta_phi = %.6e  (normalized %.6e)\n", residual,
              residual / norm);
  return 0;
}

int run_mitigate(const CLI::App& cmd, int qubits, int steps, uint64_t seed,
                 const NoiseFlags& noise, const std::string& learned_model, int chi_tem,
                 int chi_state, int chi_inv, const std::string& out) {
  NoiseModelSpec spec = noise.build(qubits);
  if (!std::holds_alternative<SplSpec>(spec))
    throw CLI::ValidationError("mitigate requires sparse Pauli-Lindblad noise");
  const SplSpec& spl = std::get<SplSpec>(spec);

  SuperOpMpo gamma = build_spl_superop(spl);
  SuperOpMpo inverse_true = inverse_of_channel(gamma, chi_inv, 8, 100);

  std::optional<SuperOpMpo> inverse_learned;
  if (!learned_model.empty()) {
    SuperOpMpo learned = lpdo_to_pauli_superop(load_lpdo(learned_model));
    inverse_learned = inverse_of_channel(learned, chi_inv, 8, 200);
  }

  TemOptions options;
  options.chi_tem = chi_tem;
  options.chi_state = chi_state;
  std::vector<TemRow> rows = run_tem_experiment(
      spl, steps, seed, inverse_true, inverse_learned ? &*inverse_learned : nullptr,
      options);
  write_tem_csv(out, rows);
  write_manifest(out + ".manifest.json", "mitigate", cmd, {out});
  for (const TemRow& r : rows)
    std::printf("depth %2d  raw %.6f  tem(true) %.6f  tem(learned) %.6f\n", r.depth,
                r.unmitigated, r.mitigated_true, r.mitigated_learned);
  return 0;
}

int run_oracle_check(int qubits, uint64_t seed) {
  oracle::check_size(qubits);
  double worst = 0.0;
  auto report = [&](const char* what, double dev) {
    std::printf("%-34s max deviation %.3e\n", what, dev);
    worst = std::max(worst, dev);
  };

  std::vector<std::pair<std::string, NoiseModelSpec>> specs = {
      {"depol", DepolBrickworkSpec{qubits, 1e-3}},
      {"coherent", sample_coherent_spec({qubits, 1e-3}, 1e-3, seed)},
      {"spl", sample_spl_spec(qubits, seed)}};

  for (const auto& [name, spec] : specs) {
    Tensor got = oracle::dense_superoperator(build_channel(spec), Basis::Pauli);
    Tensor want = oracle::dense_superoperator(spec, Basis::Pauli);
    report(("channel MPO vs dense (" + name + ")").c_str(), max_abs_diff(got, want));
  }

  {
    SuperOpMpo noise = build_channel(specs[0].second);
    SuperOpMpo layer = cnot_layer_superop(qubits, Parity::Even);
    double dev = 0.0;
    for (const Setting& s : generate_settings(qubits, 5, seed)) {
      StateMpo rho = tomographic_state(s.alpha, layer);
      auto dense = oracle::dense_born_distribution(specs[0].second, s.alpha, s.beta);
      for (int64_t z = 0; z < (int64_t{1} << qubits); ++z) {
        std::vector<int8_t> zeta;
        for (int j = 0; j < qubits; ++j)
          zeta.push_back(((z >> (qubits - 1 - j)) & 1) ? -1 : 1);
        dev = std::max(dev, std::abs(born_probability(noise, rho, s, zeta) -
                                     dense[static_cast<size_t>(z)]));
      }
    }
    report("born probabilities vs dense", dev);
  }

  {
    Lpdo l = pre_optimize_tp(init_lpdo(qubits, 2, 2, seed));
    SuperOpMpo s = lpdo_to_superop(l);
    Tensor got = oracle::dense_superoperator(s, Basis::Computational);
    Tensor want = oracle::dense_superoperator(l, Basis::Computational);
    report("lpdo -> superoperator vs dense", max_abs_diff(got, want));

    SuperOpMpo truth = build_channel(specs[0].second);
    double got_fro = reconstruction_error(l, truth);
    Tensor a = oracle::dense_superoperator(lpdo_to_pauli_superop(l), Basis::Pauli);
    Tensor b = oracle::dense_superoperator(truth, Basis::Pauli);
    double want_fro = 0.0;
    for (int64_t i = 0; i < a.size(); ++i) want_fro += std::norm(a[i] - b[i]);
    want_fro /= std::pow(4.0, qubits);
    report("frobenius distance vs dense", std::abs(got_fro - want_fro));
  }

  {
    SuperOpMpo m = build_channel(specs[2].second);
    Tensor dense = oracle::dense_superoperator(m, Basis::Pauli);
    Rng rng(seed);
    double dev = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::string s;
      for (int j = 0; j < qubits; ++j) s += "IXYZ"[rng.below(4)];
      int64_t idx = 0;
      for (char c : s) idx = idx * 4 + pauli_index(c);
      dev = std::max(dev, std::abs(ptm_coefficient(m, s, s) -
                                   dense[idx * dense.dim(1) + idx].real()));
    }
    report("ptm coefficients vs dense", dev);
  }

  std::printf("overall max deviation %.3e\n", worst);
  return worst < 1e-8 ? 0 : 1;
}

int run_scaling(const CLI::App& cmd, const std::string& axis, const NoiseFlags& noise,
                int qubits, std::vector<int64_t> shots_list, std::vector<int> qubits_list,
                int64_t settings, std::vector<uint64_t> seeds, int epochs,
                const std::string& out) {
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot write scaling csv: " + out);

  auto run_one = [&](int n, int64_t n_shots, uint64_t seed) {
    NoiseModelSpec spec = noise.build(n);
    TrainConfig cfg = default_train_config(spec);
    cfg.seed = seed;
    cfg.threads = 0;
    if (epochs > 0) {
      cfg.epochs = epochs;
      cfg.patience = epochs;
    }
    CharacterizationResult res = run_characterization(spec, settings, n_shots, seed, cfg);
    return res.delta;
  };

  if (axis == "shots") {
    csv << "total_shots,seed,delta\n";
    for (int64_t s : shots_list)
      for (uint64_t seed : seeds) {
        double delta = run_one(qubits, s, seed);
        csv << settings * s << "," << seed << "," << delta << "\n";
        csv.flush();
        std::printf("N=%lld seed=%llu delta=%.6e\n",
                    static_cast<long long>(settings * s),
                    static_cast<unsigned long long>(seed), delta);
      }
  } else if (axis == "qubits") {
    csv << "qubits,seed,delta\n";
    for (int n : qubits_list)
      for (uint64_t seed : seeds) {
        double delta = run_one(n, 1000, seed);
        csv << n << "," << seed << "," << delta << "\n";
        csv.flush();
        std::printf("n=%d seed=%llu delta=%.6e\n", n,
                    static_cast<unsigned long long>(seed), delta);
      }
  } else {
    throw CLI::ValidationError("--axis must be 'shots' or 'qubits'");
  }
  write_manifest(out + ".manifest.json", "scaling", cmd, {out});
  return 0;
}

// Builds the CLI; runs either the given argv or a manifest re-run.
int dispatch(std::vector<std::string> args);

int run_rerun(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
  json j;
  in >> j;
  std::vector<std::string> args;
  args.push_back(j.at("command").get<std::string>());
  for (const auto& [name, values] : j.at("options").items())
    for (const auto& v : values) {
      args.push_back(name);
      args.push_back(v.get<std::string>());
    }
  return dispatch(std::move(args));
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"tensor-network noise characterization and error mitigation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "sectioned key=value config file; flags override");

  // sample
  auto* sample = app.add_subcommand("sample", "simulate a tomographic experiment");
  int s_qubits = 2;
  int64_t s_settings = 100, s_shots = 100;
  uint64_t s_seed = 0;
  std::string s_out = "dataset.tds";
  NoiseFlags s_noise;
  sample->add_option("--qubits", s_qubits, "qubit count")->required();
  s_noise.attach(sample, true);
  sample->add_option("--settings", s_settings, "number of tomographic settings")->required();
  sample->add_option("--shots", s_shots, "shots per setting")->required();
  sample->add_option("--seed", s_seed, "sampling seed")->required();
  sample->add_option("--out", s_out, "output dataset path");

  // train
  auto* tr = app.add_subcommand("train", "fit an LPDO to a dataset");
  std::string t_data, t_out = "model.tnm", t_metrics;
  TrainConfig t_cfg;
  NoiseFlags t_noise;
  tr->add_option("--data", t_data, "dataset path")->required()->check(CLI::ExistingFile);
  tr->add_option("--chi-b", t_cfg.chi_b, "virtual bond dimension");
  tr->add_option("--chi-kappa", t_cfg.chi_kappa, "Kraus dimension");
  tr->add_option("--eta-tp", t_cfg.eta_tp, "trace-preservation penalty weight");
  tr->add_option("--lr0", t_cfg.lr0, "initial learning rate");
  tr->add_option("--gamma", t_cfg.decay_gamma, "learning rate decay per epoch");
  tr->add_option("--warmup", t_cfg.warmup_steps, "warmup steps before decay");
  tr->add_option("--batch-size", t_cfg.batch_size, "mini-batch size (0 = auto)");
  tr->add_option("--epochs", t_cfg.epochs, "maximum epochs");
  tr->add_option("--patience", t_cfg.patience, "early-stop patience in epochs");
  tr->add_option("--threads", t_cfg.threads, "worker threads (0 = hardware)");
  tr->add_option("--seed", t_cfg.seed, "training seed")->required();
  t_noise.attach(tr, false);
  tr->add_option("--out", t_out, "output model path");
  tr->add_option("--metrics", t_metrics, "per-epoch metrics csv");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "report model quality");
  std::string e_model, e_data;
  NoiseFlags e_noise;
  ev->add_option("--model", e_model, "LPDO model path")->required()->check(CLI::ExistingFile);
  e_noise.attach(ev, false);
  ev->add_option("--data", e_data, "optional dataset for NLL evaluation");

  // ptm
  auto* pt = app.add_subcommand("ptm", "query Pauli transfer matrix coefficients");
  std::string p_model;
  int p_qubits = 0, p_sample = 0, p_weight = 4;
  uint64_t p_seed = 0;
  std::vector<std::string> p_paulis;
  NoiseFlags p_noise;
  pt->add_option("--model", p_model, "LPDO model path");
  p_noise.attach(pt, false);
  pt->add_option("--qubits", p_qubits, "qubit count (with --noise)");
  pt->add_option("--pauli", p_paulis, "diagonal Pauli string, e.g. XIZY (repeatable)");
  pt->add_option("--sample", p_sample, "sample this many diagonal strings");
  pt->add_option("--max-weight", p_weight, "maximum weight of sampled strings");
  pt->add_option("--seed", p_seed, "sampling seed");

  // invert
  auto* iv = app.add_subcommand("invert", "compute an MPO inverse");
  std::string i_model, i_out = "inverse.tnm";
  int i_qubits = 0, i_chi = 4, i_sweeps = 8, i_polish = 100;
  NoiseFlags i_noise;
  iv->add_option("--model", i_model, "channel to invert (LPDO or superoperator file)");
  i_noise.attach(iv, false);
  iv->add_option("--qubits", i_qubits, "qubit count (with --noise)");
  iv->add_option("--chi", i_chi, "inverse bond dimension");
  iv->add_option("--sweeps", i_sweeps, "alternating-solve sweeps");
  iv->add_option("--polish-iters", i_polish, "variational polish iterations");
  iv->add_option("--out", i_out, "output model path");

  // mitigate
  auto* mi = app.add_subcommand("mitigate", "noisy Clifford circuit + TEM experiment");
  int m_qubits = 6, m_steps = 20, m_chi_tem = 200, m_chi_state = 64, m_chi_inv = 4;
  uint64_t m_seed = 0;
  std::string m_learned, m_out = "tem.csv";
  NoiseFlags m_noise;
  mi->add_option("--qubits", m_qubits, "qubit count")->required();
  mi->add_option("--steps", m_steps, "circuit depth")->required();
  mi->add_option("--seed", m_seed, "circuit seed")->required();
  m_noise.attach(mi, true);
  mi->add_option("--learned-model", m_learned, "trained LPDO to mitigate with");
  mi->add_option("--chi-tem", m_chi_tem, "TEM map bond cap");
  mi->add_option("--chi-state", m_chi_state, "evolved state bond cap");
  mi->add_option("--chi-inv", m_chi_inv, "inversion bond dimension");
  mi->add_option("--out", m_out, "output csv path");

  // oracle-check
  auto* oc = app.add_subcommand("oracle-check", "cross-validate against dense algebra");
  int o_qubits = 3;
  uint64_t o_seed = 1;
  oc->add_option("--qubits", o_qubits, "qubit count (<= 5)");
  oc->add_option("--seed", o_seed, "seed");

  // scaling
  auto* sc = app.add_subcommand("scaling", "reconstruction error sweeps");
  std::string c_axis = "shots", c_out = "scaling.csv";
  int c_qubits = 4, c_epochs = 0;
  int64_t c_settings = 1000;
  std::vector<int64_t> c_shots = {10, 100, 1000};
  std::vector<int> c_qubits_list = {4, 6, 8, 10};
  std::vector<uint64_t> c_seeds = {1, 2, 3};
  NoiseFlags c_noise;
  sc->add_option("--axis", c_axis, "shots or qubits")->required();
  c_noise.attach(sc, true);
  sc->add_option("--qubits", c_qubits, "qubit count for the shots axis");
  sc->add_option("--settings", c_settings, "settings per experiment");
  sc->add_option("--shots-list", c_shots, "shots-per-setting values");
  sc->add_option("--qubits-list", c_qubits_list, "qubit counts for the qubits axis");
  sc->add_option("--seeds", c_seeds, "training seeds");
  sc->add_option("--epochs", c_epochs, "epoch cap per run (0 = default)");
  sc->add_option("--out", c_out, "output csv path");

  // rerun
  auto* rr = app.add_subcommand("rerun", "re-execute a run from its manifest");
  std::string r_manifest;
  rr->add_option("manifest", r_manifest, "manifest json path")
      ->required()
      ->check(CLI::ExistingFile);

  std::vector<const char*> argv;
  argv.push_back("noisetn");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sample->parsed())
      return run_sample(*sample, s_qubits, s_noise, s_settings, s_shots, s_seed, s_out);
    if (tr->parsed()) return run_train(*tr, t_data, t_cfg, t_noise, t_out, t_metrics);
    if (ev->parsed()) return run_evaluate(e_model, e_noise, e_data);
    if (pt->parsed())
      return run_ptm(p_model, p_noise, p_qubits, p_paulis, p_sample, p_weight, p_seed);
    if (iv->parsed())
      return run_invert(*iv, i_model, i_noise, i_qubits, i_chi, i_sweeps, i_polish, i_out);
    if (mi->parsed())
      return run_mitigate(*mi, m_qubits, m_steps, m_seed, m_noise, m_learned, m_chi_tem,
                          m_chi_state, m_chi_inv, m_out);
    if (oc->parsed()) return run_oracle_check(o_qubits, o_seed);
    if (sc->parsed())
      return run_scaling(*sc, c_axis, c_noise, c_qubits, c_shots, c_qubits_list,
                         c_settings, c_seeds, c_epochs, c_out);
    if (rr->parsed()) return run_rerun(r_manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(std::move(args));
}
