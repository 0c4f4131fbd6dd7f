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

#include "noisetn/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "noisetn/rng.hpp"

namespace noisetn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Diagonal (Pauli-basis) channels are carried around as an MPS of their
// diagonal; elementwise products then compose channels without leaving the
// diagonal representation.
struct DiagMps {
  int n = 0;
  std::vector<Tensor> sites;  // [bL, 4, bR]
};

DiagMps diag_ones(int n) {
  DiagMps d;
  d.n = n;
  for (int j = 0; j < n; ++j) {
    Tensor s({1, 4, 1});
    for (int q = 0; q < 4; ++q) s[q] = 1.0;
    d.sites.push_back(std::move(s));
  }
  return d;
}

// Elementwise (Hadamard) product of two diagonals; bonds multiply.
DiagMps diag_multiply(const DiagMps& a, const DiagMps& b) {
  DiagMps out;
  out.n = a.n;
  out.sites.reserve(static_cast<size_t>(a.n));
  for (int j = 0; j < a.n; ++j) {
    const Tensor& x = a.sites[static_cast<size_t>(j)];
    const Tensor& y = b.sites[static_cast<size_t>(j)];
    Tensor t({x.dim(0) * y.dim(0), 4, x.dim(2) * y.dim(2)});
    for (int64_t xl = 0; xl < x.dim(0); ++xl)
      for (int64_t yl = 0; yl < y.dim(0); ++yl)
        for (int64_t q = 0; q < 4; ++q)
          for (int64_t xr = 0; xr < x.dim(2); ++xr)
            for (int64_t yr = 0; yr < y.dim(2); ++yr)
              t[((xl * y.dim(0) + yl) * 4 + q) * (x.dim(2) * y.dim(2)) + xr * y.dim(2) + yr] =
                  x[(xl * 4 + q) * x.dim(2) + xr] * y[(yl * 4 + q) * y.dim(2) + yr];
    out.sites.push_back(std::move(t));
  }
  return out;
}

void diag_compress(DiagMps& d) {
  double n2 = chain_inner(d.sites, d.sites).real();
  compress_chain(d.sites, 0, 1e-26 * std::max(n2, 1.0));
}

SuperOpMpo diag_to_superop(const DiagMps& d) {
  SuperOpMpo m;
  m.n = d.n;
  m.basis = Basis::Pauli;
  m.sites.reserve(static_cast<size_t>(d.n));
  for (const Tensor& s : d.sites) {
    Tensor t({s.dim(0), 4, 4, s.dim(2)});
    for (int64_t l = 0; l < s.dim(0); ++l)
      for (int64_t q = 0; q < 4; ++q)
        for (int64_t r = 0; r < s.dim(2); ++r)
          t[((l * 4 + q) * 4 + q) * s.dim(2) + r] = s[(l * 4 + q) * s.dim(2) + r];
    m.sites.push_back(std::move(t));
  }
  return m;
}

// Diagonal of one brickwork layer of two-qubit depolarizing factors with rate
// p on the given (non-overlapping) pairs: entry 1 on the double identity,
// (1-p) on every other two-qubit Pauli.
DiagMps depol_layer_diag(int n, double p, const std::vector<std::pair<int, int>>& pairs) {
  DiagMps d = diag_ones(n);
  for (auto [c, t] : pairs) {
    Tensor left({1, 4, 2});
    Tensor right({2, 4, 1});
    for (int q = 0; q < 4; ++q) {
      left[q * 2 + 0] = 1.0 - p;
      left[q * 2 + 1] = (q == 0) ? p : 0.0;
      right[0 * 4 + q] = 1.0;
      right[1 * 4 + q] = (q == 0) ? 1.0 : 0.0;
    }
    d.sites[static_cast<size_t>(c)] = std::move(left);
    d.sites[static_cast<size_t>(t)] = std::move(right);
  }
  return d;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int qubit_count(const NoiseModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CoherentDepolSpec>)
          return s.base.n;
        else
          return s.n;
      },
      spec);
}

void validate(const SplSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("SplSpec: n >= 1 required");
  for (const SplGenerator& g : spec.generators) {
    if (g.lambda < 0.0)
      throw std::invalid_argument("SplSpec: negative rate lambda for generator '" + g.paulis + "'");
    if (g.paulis.empty() || g.paulis.size() > 2)
      throw std::invalid_argument("SplSpec: generators act on one qubit or two adjacent qubits");
    int weight = 0;
    for (char c : g.paulis)
      if (pauli_index(c) != 0) ++weight;
    if (weight == 0)
      throw std::invalid_argument("SplSpec: identity generator is not allowed");
    if (g.site < 0 || g.site + static_cast<int>(g.paulis.size()) > spec.n)
      throw std::invalid_argument("SplSpec: generator support outside the chain");
  }
}

double spl_omega(double lambda) { return 0.5 * (1.0 + std::exp(-2.0 * lambda)); }

SuperOpMpo build_depol_superop(const DepolBrickworkSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("build_depol_superop: n >= 2 required");
  if (spec.p < 0.0 || spec.p > 1.0)
    throw std::invalid_argument("build_depol_superop: p must lie in [0,1]");
  DiagMps even = depol_layer_diag(spec.n, spec.p, cnot_layer_pairs(spec.n, Parity::Even));
  DiagMps odd = depol_layer_diag(spec.n, 0.5 * spec.p, cnot_layer_pairs(spec.n, Parity::Odd));
  DiagMps total = diag_multiply(odd, even);
  diag_compress(total);
  return diag_to_superop(total);
}

SuperOpMpo build_spl_superop(const SplSpec& spec) {
  validate(spec);
  DiagMps total = diag_ones(spec.n);
  for (const SplGenerator& g : spec.generators) {
    const double e = std::exp(-2.0 * g.lambda);
    std::vector<uint8_t> letters = parse_pauli_string(g.paulis);
    DiagMps factor = diag_ones(spec.n);
    if (letters.size() == 1) {
      Tensor s({1, 4, 1});
      for (int q = 0; q < 4; ++q)
        s[q] = pauli_anticommute(q, letters[0]) ? e : 1.0;
      factor.sites[static_cast<size_t>(g.site)] = std::move(s);
    } else {
      // d[q1,q2] = e if exactly one of the two positions anticommutes, else 1:
      // split as (1+e)/2 + (1-e)/2 * s(q1) s(q2) with s = +-1 commutation signs.
      const double a = 0.5 * (1.0 + e), b = 0.5 * (1.0 - e);
      Tensor left({1, 4, 2}), right({2, 4, 1});
      for (int q = 0; q < 4; ++q) {
        double s1 = pauli_anticommute(q, letters[0]) ? -1.0 : 1.0;
        double s2 = pauli_anticommute(q, letters[1]) ? -1.0 : 1.0;
        left[q * 2 + 0] = a;
        left[q * 2 + 1] = b * s1;
        right[0 * 4 + q] = 1.0;
        right[1 * 4 + q] = s2;
      }
      factor.sites[static_cast<size_t>(g.site)] = std::move(left);
      factor.sites[static_cast<size_t>(g.site) + 1] = std::move(right);
    }
    total = diag_multiply(total, factor);
    if (max_bond(total.sites) > 8) diag_compress(total);
  }
  diag_compress(total);
  return diag_to_superop(total);
}

Tensor rotation_unitary(const std::array<double, 3>& angles) {
  const double phi = angles[0], varphi = angles[1], psi = angles[2];
  Tensor u({2, 2});
  u.at({0, 0}) = std::polar(std::cos(phi), varphi);
  u.at({0, 1}) = std::polar(std::sin(phi), psi);
  u.at({1, 0}) = -std::polar(std::sin(phi), -psi);
  u.at({1, 1}) = std::polar(std::cos(phi), -varphi);
  return u;
}

CoherentDepolSpec sample_coherent_spec(const DepolBrickworkSpec& base, double epsilon,
                                       uint64_t seed) {
  if (epsilon < 0.0) throw std::invalid_argument("sample_coherent_spec: epsilon >= 0 required");
  CoherentDepolSpec spec;
  spec.base = base;
  spec.epsilon = epsilon;
  spec.seed = seed;
  Rng rng(seed);
  for (int j = 0; j < base.n; ++j) {
    double psi = kTwoPi * rng.uniform();
    double varphi = epsilon * kTwoPi * rng.uniform();
    double zeta = epsilon * rng.uniform();
    double phi = std::asin(std::sqrt(std::min(zeta, 1.0)));
    spec.angles.push_back({phi, varphi, psi});
  }
  return spec;
}

SplSpec sample_spl_spec(int n, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_spl_spec: n >= 2 required");
  SplSpec spec;
  spec.n = n;
  Rng rng(seed);
  const double lo = std::log(1e-4), hi = std::log(5e-3);
  auto draw = [&] { return std::exp(lo + (hi - lo) * rng.uniform()); };
  const char letters[3] = {'X', 'Y', 'Z'};
  for (int j = 0; j < n; ++j)
    for (char c : letters)
      spec.generators.push_back({j, std::string(1, c), draw()});
  for (int j = 0; j + 1 < n; ++j)
    for (char c1 : letters)
      for (char c2 : letters)
        spec.generators.push_back({j, std::string() + c1 + c2, draw()});
  return spec;
}

SuperOpMpo build_channel(const NoiseModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> SuperOpMpo {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IdentityNoiseSpec>) {
          return identity_superop(s.n, Basis::Pauli);
        } else if constexpr (std::is_same_v<T, DepolBrickworkSpec>) {
          return build_depol_superop(s);
        } else if constexpr (std::is_same_v<T, CoherentDepolSpec>) {
          if (static_cast<int>(s.angles.size()) != s.base.n)
            throw std::invalid_argument("CoherentDepolSpec: angles not sampled");
          SuperOpMpo rot;
          rot.n = s.base.n;
          rot.basis = Basis::Pauli;
          const Tensor& w = pauli_basis_change();
          Tensor wdag = conjugated(permuted(w, {1, 0}));
          for (int j = 0; j < s.base.n; ++j) {
            Tensor u = rotation_unitary(s.angles[static_cast<size_t>(j)]);
            Tensor sp = matmul(matmul(w, superop_of_unitary_1q(u)), wdag);
            rot.sites.push_back(reshaped(std::move(sp), {1, 4, 4, 1}));
          }
          return compose(build_depol_superop(s.base), rot);
        } else {
          return build_spl_superop(s);
        }
      },
      spec);
}

std::vector<std::pair<int, int>> cnot_layer_pairs(int n, Parity parity) {
  std::vector<std::pair<int, int>> pairs;
  for (int c = (parity == Parity::Even) ? 0 : 1; c + 1 < n; c += 2)
    pairs.emplace_back(c, c + 1);
  return pairs;
}

SuperOpMpo cnot_layer_superop(int n, Parity parity) {
  if (n < 2) throw std::invalid_argument("cnot_layer_superop: n >= 2 required");
  // Dense 16x16 superoperator of one CNOT in the per-site-grouped (ket,bra)
  // vectorization, then rotated to the Pauli basis and split by SVD.
  Tensor c = cnot_matrix();
  Tensor s_int({16, 16});
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int a1 = 0; a1 < 2; ++a1)
            for (int b1 = 0; b1 < 2; ++b1)
              for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2) {
                  cx v = c.at({2 * i1 + i2, 2 * a1 + a2}) *
                         std::conj(c.at({2 * j1 + j2, 2 * b1 + b2}));
                  if (v == cx(0.0, 0.0)) continue;
                  int row = (2 * i1 + j1) * 4 + (2 * i2 + j2);
                  int col = (2 * a1 + b1) * 4 + (2 * a2 + b2);
                  s_int[row * 16 + col] += v;
                }
  const Tensor& w = pauli_basis_change();
  Tensor w2 = kron(w, w);
  Tensor s_pauli = matmul(matmul(w2, s_int), conjugated(permuted(w2, {1, 0})));

  // Split the pair superoperator into two MPO sites.
  Tensor t = reshaped(std::move(s_pauli), {4, 4, 4, 4});  // [o1,o2,i1,i2]
  t = permuted(t, {0, 2, 1, 3});                          // [o1,i1,o2,i2]
  SvdResult f = svd(reshaped(std::move(t), {16, 16}));
  int64_t keep = 0;
  for (double sv : f.s)
    if (sv > 1e-12 * f.s[0]) ++keep;
  Tensor left({16, keep}), right({keep, 16});
  for (int64_t r = 0; r < 16; ++r)
    for (int64_t k = 0; k < keep; ++k) left[r * keep + k] = f.u[r * f.s.size() + k];
  for (int64_t k = 0; k < keep; ++k)
    for (int64_t col = 0; col < 16; ++col)
      right[k * 16 + col] = f.s[static_cast<size_t>(k)] * f.vh[k * 16 + col];

  SuperOpMpo layer = identity_superop(n, Basis::Pauli);
  for (auto [ctl, tgt] : cnot_layer_pairs(n, parity)) {
    layer.sites[static_cast<size_t>(ctl)] = reshaped(left, {1, 4, 4, keep});
    layer.sites[static_cast<size_t>(tgt)] = reshaped(right, {keep, 4, 4, 1});
  }
  return layer;
}

std::string describe(const NoiseModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, IdentityNoiseSpec>) {
          os << "identity(n=" << s.n << ")";
        } else if constexpr (std::is_same_v<T, DepolBrickworkSpec>) {
          os << "depol(n=" << s.n << ",p=" << fmt_double(s.p) << ")";
        } else if constexpr (std::is_same_v<T, CoherentDepolSpec>) {
          os << "coherent(n=" << s.base.n << ",p=" << fmt_double(s.base.p)
             << ",eps=" << fmt_double(s.epsilon) << ",seed=" << s.seed << ")";
        } else {
          os << "spl(n=" << s.n << ",gens=" << s.generators.size() << ")";
        }
        return os.str();
      },
      spec);
}

namespace {

struct KvFile {
  // section -> ordered (key, value) pairs
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

  const std::vector<std::pair<std::string, std::string>>* find(const std::string& name) const {
    for (const auto& s : sections)
      if (s.first == name) return &s.second;
    return nullptr;
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

KvFile parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open noise spec file: " + path);
  KvFile kv;
  kv.sections.emplace_back("", std::vector<std::pair<std::string, std::string>>{});
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    size_t hash = t.find('#');
    if (hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed section header");
      kv.sections.emplace_back(trim(t.substr(1, t.size() - 2)),
                               std::vector<std::pair<std::string, std::string>>{});
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv.sections.back().second.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

std::string require(const std::vector<std::pair<std::string, std::string>>& sec,
                    const std::string& key, const std::string& path) {
  for (const auto& [k, v] : sec)
    if (k == key) return v;
  throw std::runtime_error(path + ": missing key '" + key + "' in noise spec");
}

}  // namespace

NoiseModelSpec load_noise_spec(const std::string& path) {
  KvFile kv = parse_kv_file(path);
  const auto* model = kv.find("model");
  if (!model) throw std::runtime_error(path + ": missing [model] section");
  std::string kind = require(*model, "kind", path);
  int n = std::stoi(require(*model, "n", path));
  if (kind == "identity") return IdentityNoiseSpec{n};
  if (kind == "depol") {
    return DepolBrickworkSpec{n, std::stod(require(*model, "p", path))};
  }
  if (kind == "coherent") {
    DepolBrickworkSpec base{n, std::stod(require(*model, "p", path))};
    double eps = std::stod(require(*model, "epsilon", path));
    uint64_t seed = std::stoull(require(*model, "seed", path));
    return sample_coherent_spec(base, eps, seed);
  }
  if (kind == "spl") {
    const auto* gens = kv.find("spl");
    if (!gens)  // no explicit generator list: sample the default set from a seed
      return sample_spl_spec(n, std::stoull(require(*model, "seed", path)));
    SplSpec spec;
    spec.n = n;
    for (const auto& [k, v] : *gens) {
      if (k != "gen") continue;
      std::istringstream is(v);
      SplGenerator g;
      if (!(is >> g.paulis >> g.site >> g.lambda))
        throw std::runtime_error(path + ": malformed generator line '" + v + "'");
      spec.generators.push_back(std::move(g));
    }
    validate(spec);
    return spec;
  }
  throw std::runtime_error(path + ": unknown noise kind '" + kind + "'");
}

void save_noise_spec(const std::string& path, const NoiseModelSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write noise spec file: " + path);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IdentityNoiseSpec>) {
          out << "[model]\nkind = identity\nn = " << s.n << "\n";
        } else if constexpr (std::is_same_v<T, DepolBrickworkSpec>) {
          out << "[model]\nkind = depol\nn = " << s.n << "\np = " << fmt_double(s.p) << "\n";
        } else if constexpr (std::is_same_v<T, CoherentDepolSpec>) {
          out << "[model]\nkind = coherent\nn = " << s.base.n
              << "\np = " << fmt_double(s.base.p) << "\nepsilon = " << fmt_double(s.epsilon)
              << "\nseed = " << s.seed << "\n";
        } else {
          out << "[model]\nkind = spl\nn = " << s.n << "\n\n[spl]\n";
          for (const SplGenerator& g : s.generators)
            out << "gen = " << g.paulis << " " << g.site << " " << fmt_double(g.lambda) << "\n";
        }
      },
      spec);
  if (!out) throw std::runtime_error("failed writing noise spec file: " + path);
}

}  // namespace noisetn
