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

#include "noisetn/tomography.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "noisetn/rng.hpp"

namespace noisetn {

ShotRecord TomographicDataset::shot(int64_t i) const {
  ShotRecord r;
  r.setting_index = shot_setting[static_cast<size_t>(i)];
  r.zeta.assign(zeta(i), zeta(i) + meta.n);
  return r;
}

void TomographicDataset::append_shot(int32_t setting_index, const int8_t* z) {
  shot_setting.push_back(setting_index);
  zeta_flat.insert(zeta_flat.end(), z, z + meta.n);
}

void TomographicDataset::check_consistent() const {
  if (zeta_flat.size() != shot_setting.size() * static_cast<size_t>(meta.n))
    throw std::runtime_error("dataset: outcome storage inconsistent with shot count");
  for (int32_t s : shot_setting)
    if (s < 0 || s >= static_cast<int32_t>(settings.size()))
      throw std::runtime_error("dataset: shot references an unknown setting");
  for (const Setting& s : settings)
    if (static_cast<int>(s.alpha.size()) != meta.n ||
        static_cast<int>(s.beta.size()) != meta.n)
      throw std::runtime_error("dataset: setting length != n");
}

std::vector<Setting> generate_settings(int n, int64_t n_set, uint64_t seed) {
  if (n < 1 || n_set < 1)
    throw std::invalid_argument("generate_settings: n >= 1 and n_set >= 1 required");
  Rng rng(seed);
  std::vector<Setting> out;
  out.reserve(static_cast<size_t>(n_set));
  for (int64_t i = 0; i < n_set; ++i) {
    Setting s;
    s.alpha.reserve(static_cast<size_t>(n));
    s.beta.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) s.alpha.push_back(static_cast<uint8_t>(rng.below(4)));
    for (int j = 0; j < n; ++j) s.beta.push_back(static_cast<uint8_t>(rng.below(3)));
    out.push_back(std::move(s));
  }
  return out;
}

StateMpo tomographic_state(const std::vector<uint8_t>& alpha, const SuperOpMpo& layer) {
  const int n = static_cast<int>(alpha.size());
  if (layer.n != n)
    throw std::invalid_argument("tomographic_state: layer qubit count mismatch");
  std::vector<Tensor> locals;
  locals.reserve(alpha.size());
  for (uint8_t a : alpha) locals.push_back(sic_state(a));
  VecMps v = to_vec(product_state_mpo(locals), layer.basis);
  VecMps evolved = apply_superop(layer, v);
  compress_chain(evolved.sites, 0, 1e-28);
  return to_state(evolved);
}

Tensor effect_weight_vec(int basis, int zeta, Basis vec_basis) {
  Tensor pi = effect_matrix(basis, zeta);
  if (vec_basis == Basis::Pauli) return vec_of_operator_1q(pi, true);
  // computational: w[(i,j)] = Pi[j,i]
  Tensor w({4});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) w[2 * i + j] = pi.at({j, i});
  return w;
}

namespace {

// Bond-space matrix of one VecMps site contracted with a weight vector.
Tensor site_weight_matrix(const Tensor& site, const Tensor& w) {
  Tensor m({site.dim(0), site.dim(2)});
  for (int64_t l = 0; l < site.dim(0); ++l)
    for (int64_t r = 0; r < site.dim(2); ++r) {
      cx acc = 0.0;
      for (int64_t p = 0; p < 4; ++p) acc += w[p] * site[(l * 4 + p) * site.dim(2) + r];
      m[l * site.dim(2) + r] = acc;
    }
  return m;
}

}  // namespace

double born_probability(const SuperOpMpo& noise, const StateMpo& rho_alpha,
                        const Setting& setting, const std::vector<int8_t>& zeta) {
  if (rho_alpha.n != noise.n)
    throw std::invalid_argument("born_probability: qubit count mismatch");
  if (static_cast<int>(zeta.size()) != noise.n)
    throw std::invalid_argument("born_probability: outcome length mismatch");
  VecMps sigma = apply_superop(noise, to_vec(rho_alpha, noise.basis));
  Tensor env = identity_matrix(1);
  for (int j = 0; j < noise.n; ++j) {
    Tensor w = effect_weight_vec(setting.beta[static_cast<size_t>(j)],
                                 zeta[static_cast<size_t>(j)], noise.basis);
    env = matmul(env, site_weight_matrix(sigma.sites[static_cast<size_t>(j)], w));
  }
  return env[0].real();
}

TomographicDataset sample_shots(const SuperOpMpo& noise, const SuperOpMpo& layer,
                                const std::vector<Setting>& settings, int64_t n_shots,
                                uint64_t seed, const std::string& noise_descriptor) {
  if (n_shots < 1) throw std::invalid_argument("sample_shots: n_shots >= 1 required");
  const int n = noise.n;

  TomographicDataset ds;
  ds.meta.n = n;
  ds.meta.n_set = static_cast<int64_t>(settings.size());
  ds.meta.n_shots = n_shots;
  ds.meta.seed = seed;
  ds.meta.noise = noise_descriptor;
  ds.settings = settings;
  ds.shot_setting.reserve(settings.size() * static_cast<size_t>(n_shots));
  ds.zeta_flat.reserve(settings.size() * static_cast<size_t>(n_shots * n));

  // Tomographic states are shared between settings with equal alpha.
  std::map<std::vector<uint8_t>, VecMps> sigma_cache;

  std::vector<int8_t> zeta(static_cast<size_t>(n));
  for (size_t is = 0; is < settings.size(); ++is) {
    const Setting& setting = settings[is];
    if (static_cast<int>(setting.alpha.size()) != n)
      throw std::invalid_argument("sample_shots: setting length mismatch");

    auto it = sigma_cache.find(setting.alpha);
    if (it == sigma_cache.end()) {
      VecMps v = to_vec(tomographic_state(setting.alpha, layer), noise.basis);
      VecMps sigma = apply_superop(noise, v);
      compress_chain(sigma.sites, 0, 1e-28);
      it = sigma_cache.emplace(setting.alpha, std::move(sigma)).first;
    }
    const VecMps& sigma = it->second;

    // Per-site transfer matrices for the + effect and for the partial trace.
    std::vector<Tensor> m_plus(static_cast<size_t>(n)), m_trace(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      const Tensor& site = sigma.sites[static_cast<size_t>(j)];
      m_plus[static_cast<size_t>(j)] = site_weight_matrix(
          site, effect_weight_vec(setting.beta[static_cast<size_t>(j)], +1, noise.basis));
      m_trace[static_cast<size_t>(j)] = site_weight_matrix(site, trace_vector(noise.basis));
    }

    // Right marginal environments: R[j] marginalizes qubits j..n-1.
    std::vector<Tensor> renv(static_cast<size_t>(n) + 1);
    renv[static_cast<size_t>(n)] = identity_matrix(1);
    for (int j = n - 1; j >= 0; --j)
      renv[static_cast<size_t>(j)] =
          matmul(m_trace[static_cast<size_t>(j)], renv[static_cast<size_t>(j) + 1]);

    Rng rng = Rng::child(seed, is);
    for (int64_t shot = 0; shot < n_shots; ++shot) {
      Tensor left = identity_matrix(1);
      double joint = renv[0][0].real();  // total trace, == 1 for physical sigma
      for (int j = 0; j < n; ++j) {
        Tensor u_plus = matmul(left, m_plus[static_cast<size_t>(j)]);
        Tensor u_tot = matmul(left, m_trace[static_cast<size_t>(j)]);
        double q_plus =
            tensordot(u_plus, renv[static_cast<size_t>(j) + 1], {1}, {0})[0].real();
        double cond = (joint > 0.0) ? q_plus / joint : 0.0;
        if (cond < -1e-9 || cond > 1.0 + 1e-9)
          throw std::runtime_error(
              "sample_shots: conditional probability out of range (" +
              std::to_string(cond) + ") at setting " + std::to_string(is));
        cond = std::min(std::max(cond, 0.0), 1.0);
        bool plus = rng.uniform() < cond;
        zeta[static_cast<size_t>(j)] = plus ? 1 : -1;
        if (plus) {
          left = std::move(u_plus);
          joint = q_plus;
        } else {
          for (int64_t x = 0; x < u_tot.size(); ++x) u_tot[x] -= u_plus[x];
          left = std::move(u_tot);
          joint = joint - q_plus;
        }
      }
      ds.append_shot(static_cast<int32_t>(is), zeta.data());
    }
  }
  return ds;
}

// ---- dataset files ----------------------------------------------------------
//
// Line-oriented text format:
//
//   tomodataset v1
//   meta n=3 n_set=2 n_shots=2 seed=7 noise="depol(n=3,p=0.001)"
//   setting 0 alpha=013 beta=XYZ
//   setting 1 alpha=220 beta=ZZX
//   shots
//   0 +1 -1 +1
//   1 +1 +1 +1
//
// Each shot row lists the setting index followed by n outcomes (+1/-1).

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void write_dataset(const std::string& path, const TomographicDataset& ds) {
  ds.check_consistent();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << "tomodataset v1\n";
  out << "meta n=" << ds.meta.n << " n_set=" << ds.meta.n_set
      << " n_shots=" << ds.meta.n_shots << " seed=" << ds.meta.seed << " noise=\""
      << ds.meta.noise << "\"\n";
  for (size_t i = 0; i < ds.settings.size(); ++i) {
    out << "setting " << i << " alpha=";
    for (uint8_t a : ds.settings[i].alpha) out << static_cast<int>(a);
    out << " beta=";
    for (uint8_t b : ds.settings[i].beta) out << "XYZ"[b];
    out << "\n";
  }
  out << "shots\n";
  const int n = ds.meta.n;
  for (int64_t s = 0; s < ds.num_shots(); ++s) {
    out << ds.shot_setting[static_cast<size_t>(s)];
    const int8_t* z = ds.zeta(s);
    for (int j = 0; j < n; ++j) out << (z[j] > 0 ? " +1" : " -1");
    out << "\n";
  }
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

TomographicDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  TomographicDataset ds;
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  if (line != "tomodataset v1") parse_fail(path, lineno, "bad magic line");

  if (!std::getline(in, line)) parse_fail(path, lineno, "missing meta line");
  ++lineno;
  {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag != "meta") parse_fail(path, lineno, "expected meta line");
    std::string tok;
    while (is >> tok) {
      size_t eq = tok.find('=');
      if (eq == std::string::npos) parse_fail(path, lineno, "malformed meta token " + tok);
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      try {
        if (key == "n") ds.meta.n = std::stoi(val);
        else if (key == "n_set") ds.meta.n_set = std::stoll(val);
        else if (key == "n_shots") ds.meta.n_shots = std::stoll(val);
        else if (key == "seed") ds.meta.seed = std::stoull(val);
        else if (key == "noise") {
          std::string rest = val;
          // quoted value may contain spaces: swallow tokens until closing quote
          while (!rest.empty() && rest.front() == '"' &&
                 (rest.size() < 2 || rest.back() != '"')) {
            std::string more;
            if (!(is >> more)) parse_fail(path, lineno, "unterminated noise descriptor");
            rest += " " + more;
          }
          if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"')
            rest = rest.substr(1, rest.size() - 2);
          ds.meta.noise = rest;
        }
      } catch (const std::exception&) {
        parse_fail(path, lineno, "malformed meta value in " + tok);
      }
    }
    if (ds.meta.n < 1) parse_fail(path, lineno, "meta line must set n >= 1");
  }

  bool in_shots = false;
  std::vector<int8_t> zeta(static_cast<size_t>(ds.meta.n));
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!in_shots) {
      if (line == "shots") {
        in_shots = true;
        continue;
      }
      std::istringstream is(line);
      std::string tag, alpha_tok, beta_tok;
      int64_t idx;
      if (!(is >> tag >> idx >> alpha_tok >> beta_tok) || tag != "setting")
        parse_fail(path, lineno, "expected setting line or 'shots'");
      if (idx != static_cast<int64_t>(ds.settings.size()))
        parse_fail(path, lineno, "setting indices must be consecutive");
      if (alpha_tok.rfind("alpha=", 0) != 0 || beta_tok.rfind("beta=", 0) != 0)
        parse_fail(path, lineno, "malformed setting line");
      Setting s;
      for (char c : alpha_tok.substr(6)) {
        if (c < '0' || c > '3') parse_fail(path, lineno, "alpha digits must be 0..3");
        s.alpha.push_back(static_cast<uint8_t>(c - '0'));
      }
      for (char c : beta_tok.substr(5)) {
        if (c == 'X') s.beta.push_back(0);
        else if (c == 'Y') s.beta.push_back(1);
        else if (c == 'Z') s.beta.push_back(2);
        else parse_fail(path, lineno, "beta letters must be X, Y or Z");
      }
      if (static_cast<int>(s.alpha.size()) != ds.meta.n ||
          static_cast<int>(s.beta.size()) != ds.meta.n)
        parse_fail(path, lineno, "setting length != n");
      ds.settings.push_back(std::move(s));
    } else {
      std::istringstream is(line);
      int64_t idx;
      if (!(is >> idx)) parse_fail(path, lineno, "malformed shot line");
      if (idx < 0 || idx >= static_cast<int64_t>(ds.settings.size()))
        parse_fail(path, lineno, "shot references unknown setting " + std::to_string(idx));
      for (int j = 0; j < ds.meta.n; ++j) {
        int v;
        if (!(is >> v)) parse_fail(path, lineno, "shot line has fewer than n outcomes");
        if (v != 1 && v != -1)
          parse_fail(path, lineno, "outcomes must be +1 or -1, got " + std::to_string(v));
        zeta[static_cast<size_t>(j)] = static_cast<int8_t>(v);
      }
      int extra;
      if (is >> extra) parse_fail(path, lineno, "shot line has more than n outcomes");
      ds.append_shot(static_cast<int32_t>(idx), zeta.data());
    }
  }
  ds.check_consistent();
  return ds;
}

}  // namespace noisetn
