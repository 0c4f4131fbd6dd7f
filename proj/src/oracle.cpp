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

#include "noisetn/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetn::oracle {

namespace {

int64_t pow2(int n) { return int64_t{1} << n; }
int64_t pow4(int n) { return int64_t{1} << (2 * n); }

// Per-site-grouped vectorization index of (ket bits i, bra bits j), qubit 0
// most significant.
int64_t interleave(int64_t i, int64_t j, int n) {
  int64_t r = 0;
  for (int s = 0; s < n; ++s) {
    int64_t ib = (i >> (n - 1 - s)) & 1;
    int64_t jb = (j >> (n - 1 - s)) & 1;
    r = r * 4 + (2 * ib + jb);
  }
  return r;
}

Tensor kron_all(const std::vector<Tensor>& factors) {
  Tensor out = identity_matrix(1);
  for (const Tensor& f : factors) out = kron(out, f);
  return out;
}

Tensor pauli_change_full(int n) {
  std::vector<Tensor> ws(static_cast<size_t>(n), pauli_basis_change());
  return kron_all(ws);
}

Tensor unvec_interleaved(const Tensor& v, int n) {
  Tensor op({pow2(n), pow2(n)});
  for (int64_t i = 0; i < pow2(n); ++i)
    for (int64_t j = 0; j < pow2(n); ++j)
      op[i * pow2(n) + j] = v[interleave(i, j, n)];
  return op;
}

int qubits_of_dim4(const Tensor& s, const char* what) {
  int64_t d = s.dim(0);
  int n = 0;
  while ((int64_t{1} << (2 * n)) < d) ++n;
  if ((int64_t{1} << (2 * n)) != d || s.rank() != 2 || s.dim(1) != d)
    throw std::invalid_argument(std::string(what) + ": square 4^n matrix required");
  return n;
}

}  // namespace

void check_size(int n, bool allow_n6) {
  const int cap = allow_n6 ? 6 : kMaxQubits;
  if (n < 1 || n > cap)
    throw std::invalid_argument("dense oracle refuses n=" + std::to_string(n) +
                                " (limit " + std::to_string(cap) + ")");
}

Tensor pauli_string_matrix(const std::vector<uint8_t>& letters) {
  std::vector<Tensor> fs;
  fs.reserve(letters.size());
  for (uint8_t p : letters) fs.push_back(pauli_matrix(p));
  return kron_all(fs);
}

Tensor cnot_layer_unitary(int n, Parity parity) {
  Tensor u = identity_matrix(pow2(n));
  for (auto [c, t] : cnot_layer_pairs(n, parity)) {
    Tensor g = kron(identity_matrix(pow2(c)),
                    kron(cnot_matrix(), identity_matrix(pow2(n - c - 2))));
    u = matmul(g, u);
  }
  return u;
}

Tensor superop_of_kraus(const std::vector<Tensor>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("superop_of_kraus: no operators");
  const int64_t d = kraus.front().dim(0);
  int n = 0;
  while (pow2(n) < d) ++n;
  if (pow2(n) != d) throw std::invalid_argument("superop_of_kraus: dimension not 2^n");
  Tensor s({d * d, d * d});
  for (const Tensor& k : kraus) {
    if (k.rank() != 2 || k.dim(0) != d || k.dim(1) != d)
      throw std::invalid_argument("superop_of_kraus: inconsistent Kraus shapes");
    for (int64_t i = 0; i < d; ++i)
      for (int64_t a = 0; a < d; ++a) {
        cx kia = k[i * d + a];
        if (kia == cx(0.0, 0.0)) continue;
        for (int64_t j = 0; j < d; ++j)
          for (int64_t b = 0; b < d; ++b) {
            cx v = kia * std::conj(k[j * d + b]);
            if (v == cx(0.0, 0.0)) continue;
            s[interleave(i, j, n) * d * d + interleave(a, b, n)] += v;
          }
      }
  }
  return s;
}

Tensor superop_to_pauli(const Tensor& s) {
  int n = qubits_of_dim4(s, "superop_to_pauli");
  Tensor w = pauli_change_full(n);
  return matmul(matmul(w, s), conjugated(permuted(w, {1, 0})));
}

Tensor vec_interleaved(const Tensor& op) {
  const int64_t d = op.dim(0);
  int n = 0;
  while (pow2(n) < d) ++n;
  if (pow2(n) != d || op.rank() != 2 || op.dim(1) != d)
    throw std::invalid_argument("vec_interleaved: square 2^n matrix required");
  Tensor v({d * d});
  for (int64_t i = 0; i < d; ++i)
    for (int64_t j = 0; j < d; ++j) v[interleave(i, j, n)] = op[i * d + j];
  return v;
}

Tensor choi_matrix(const Tensor& superop_computational) {
  int n = qubits_of_dim4(superop_computational, "choi_matrix");
  const int64_t d = pow2(n);
  Tensor c({d * d, d * d});
  for (int64_t i = 0; i < d; ++i)
    for (int64_t j = 0; j < d; ++j)
      for (int64_t a = 0; a < d; ++a)
        for (int64_t b = 0; b < d; ++b)
          c[(i * d + a) * d * d + (j * d + b)] =
              superop_computational[interleave(i, j, n) * d * d + interleave(a, b, n)];
  return c;
}

std::vector<Tensor> dense_kraus_operators(const Lpdo& channel) {
  check_size(channel.n, true);
  int64_t count = 1;
  for (const Tensor& s : channel.sites) count *= s.dim(4);
  if (count > (int64_t{1} << 20))
    throw std::invalid_argument("dense_kraus_operators: too many Kraus operators");

  std::vector<Tensor> kraus;
  kraus.reserve(static_cast<size_t>(count));
  std::vector<int64_t> kappa(static_cast<size_t>(channel.n), 0);
  for (int64_t idx = 0; idx < count; ++idx) {
    // Decode the multi-index, site 0 most significant.
    int64_t rem = idx;
    for (int j = channel.n - 1; j >= 0; --j) {
      int64_t ck = channel.sites[static_cast<size_t>(j)].dim(4);
      kappa[static_cast<size_t>(j)] = rem % ck;
      rem /= ck;
    }
    Tensor t({1, 1, 1});
    t[0] = 1.0;
    for (int j = 0; j < channel.n; ++j) {
      const Tensor& a = channel.sites[static_cast<size_t>(j)];
      const int64_t cl = a.dim(2), cr = a.dim(3), ck = a.dim(4);
      Tensor slice({2, 2, cl, cr});
      for (int64_t x = 0; x < 4 * cl * cr; ++x)
        slice[x] = a[x * ck + kappa[static_cast<size_t>(j)]];
      Tensor grown = tensordot(t, slice, {2}, {2});  // [R,C, b,a, cr]
      grown = permuted(grown, {0, 2, 1, 3, 4});      // [R,b,C,a,cr]
      t = reshaped(std::move(grown), {t.dim(0) * 2, t.dim(1) * 2, cr});
    }
    kraus.push_back(reshaped(std::move(t), {pow2(channel.n), pow2(channel.n)}));
  }
  return kraus;
}

Tensor dense_superoperator(const NoiseModelSpec& spec, Basis basis, bool allow_n6) {
  const int n = qubit_count(spec);
  check_size(n, allow_n6);
  Tensor s = std::visit(
      [&](const auto& sp) -> Tensor {
        using T = std::decay_t<decltype(sp)>;
        if constexpr (std::is_same_v<T, IdentityNoiseSpec>) {
          return identity_matrix(pow4(n));
        } else if constexpr (std::is_same_v<T, DepolBrickworkSpec>) {
          // Local 16x16 depolarizing factor: (1-p) id + (p/4) |vec I><vec I|.
          auto pair_superop = [&](double p) {
            Tensor d = scaled(identity_matrix(16), 1.0 - p);
            Tensor u = vec_interleaved(identity_matrix(4));
            for (int64_t r = 0; r < 16; ++r)
              for (int64_t c = 0; c < 16; ++c)
                d[r * 16 + c] += 0.25 * p * u[r] * std::conj(u[c]);
            return d;
          };
          auto layer = [&](double p, Parity parity) {
            Tensor m = identity_matrix(pow4(n));
            for (auto [c, t] : cnot_layer_pairs(n, parity)) {
              Tensor g = kron(identity_matrix(pow4(c)),
                              kron(pair_superop(p), identity_matrix(pow4(n - c - 2))));
              m = matmul(g, m);
            }
            return m;
          };
          return matmul(layer(0.5 * sp.p, Parity::Odd), layer(sp.p, Parity::Even));
        } else if constexpr (std::is_same_v<T, CoherentDepolSpec>) {
          std::vector<Tensor> rots;
          for (const auto& ang : sp.angles)
            rots.push_back(superop_of_unitary_1q(rotation_unitary(ang)));
          Tensor rot = kron_all(rots);
          Tensor inc = dense_superoperator(NoiseModelSpec{sp.base}, Basis::Computational, allow_n6);
          return matmul(inc, rot);
        } else {
          validate(sp);
          Tensor m = identity_matrix(pow4(n));
          for (const SplGenerator& g : sp.generators) {
            std::vector<uint8_t> letters(static_cast<size_t>(n), 0);
            std::vector<uint8_t> gl = parse_pauli_string(g.paulis);
            for (size_t k = 0; k < gl.size(); ++k)
              letters[static_cast<size_t>(g.site) + k] = gl[k];
            Tensor pk = superop_of_kraus({pauli_string_matrix(letters)});
            const double w = spl_omega(g.lambda);
            Tensor factor = scaled(identity_matrix(pow4(n)), w);
            accumulate(factor, pk, 1.0 - w);
            m = matmul(factor, m);
          }
          return m;
        }
      },
      spec);
  return basis == Basis::Pauli ? superop_to_pauli(s) : s;
}

Tensor dense_superoperator(const Lpdo& channel, Basis basis, bool allow_n6) {
  check_size(channel.n, allow_n6);
  Tensor s = superop_of_kraus(dense_kraus_operators(channel));
  return basis == Basis::Pauli ? superop_to_pauli(s) : s;
}

Tensor dense_superoperator(const SuperOpMpo& mpo, Basis basis, bool allow_n6) {
  check_size(mpo.n, allow_n6);
  Tensor t({1, 1, 1});
  t[0] = 1.0;
  for (const Tensor& s : mpo.sites) {
    Tensor grown = tensordot(t, s, {2}, {0});  // [R,C,o,i,b']
    grown = permuted(grown, {0, 2, 1, 3, 4});  // [R,o,C,i,b']
    t = reshaped(std::move(grown), {t.dim(0) * 4, t.dim(1) * 4, s.dim(3)});
  }
  Tensor m = reshaped(std::move(t), {pow4(mpo.n), pow4(mpo.n)});
  if (mpo.basis == basis) return m;
  Tensor w = pauli_change_full(mpo.n);
  if (basis == Basis::Pauli) return matmul(matmul(w, m), conjugated(permuted(w, {1, 0})));
  return matmul(matmul(conjugated(permuted(w, {1, 0})), m), w);
}

Tensor dense_state(const StateMpo& rho) {
  check_size(rho.n, true);
  Tensor t({1, 1, 1});
  t[0] = 1.0;
  for (const Tensor& s : rho.sites) {
    Tensor grown = tensordot(t, s, {2}, {0});  // [R,C,k,b,b']
    grown = permuted(grown, {0, 2, 1, 3, 4});
    t = reshaped(std::move(grown), {t.dim(0) * 2, t.dim(1) * 2, s.dim(3)});
  }
  return reshaped(std::move(t), {pow2(rho.n), pow2(rho.n)});
}

Tensor dense_vec(const VecMps& v) {
  check_size(v.n, true);
  Tensor t({1, 1});
  t[0] = 1.0;
  for (const Tensor& s : v.sites) {
    Tensor grown = tensordot(t, s, {1}, {0});  // [D,p,b']
    t = reshaped(std::move(grown), {t.dim(0) * 4, s.dim(2)});
  }
  return reshaped(std::move(t), {pow4(v.n)});
}

Tensor dense_lpdo_apply(const Lpdo& channel, const Tensor& rho, bool allow_n6) {
  check_size(channel.n, allow_n6);
  const int64_t d = pow2(channel.n);
  if (rho.rank() != 2 || rho.dim(0) != d || rho.dim(1) != d)
    throw std::invalid_argument("dense_lpdo_apply: state dimension mismatch");
  Tensor out({d, d});
  for (const Tensor& k : dense_kraus_operators(channel)) {
    Tensor kr = matmul(k, rho);
    Tensor krk = matmul(kr, conjugated(permuted(k, {1, 0})));
    accumulate(out, krk);
  }
  return out;
}

std::vector<double> dense_born_distribution(const NoiseModelSpec& spec,
                                            const std::vector<uint8_t>& alpha,
                                            const std::vector<uint8_t>& beta,
                                            bool allow_n6) {
  const int n = qubit_count(spec);
  check_size(n, allow_n6);
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
    throw std::invalid_argument("dense_born_distribution: setting length mismatch");

  std::vector<Tensor> sics;
  for (uint8_t a : alpha) sics.push_back(sic_state(a));
  Tensor rho = kron_all(sics);
  if (n >= 2) {
    Tensor u = cnot_layer_unitary(n, Parity::Even);
    rho = matmul(matmul(u, rho), conjugated(permuted(u, {1, 0})));
  }
  Tensor s = dense_superoperator(spec, Basis::Computational, allow_n6);
  Tensor v = tensordot(s, vec_interleaved(rho), {1}, {0});
  Tensor sigma = unvec_interleaved(v, n);

  const int64_t outcomes = pow2(n);
  std::vector<double> probs(static_cast<size_t>(outcomes));
  for (int64_t z = 0; z < outcomes; ++z) {
    std::vector<Tensor> effects;
    for (int j = 0; j < n; ++j) {
      int zeta = ((z >> (n - 1 - j)) & 1) ? -1 : +1;
      effects.push_back(effect_matrix(beta[static_cast<size_t>(j)], zeta));
    }
    Tensor e = kron_all(effects);
    cx tr = 0.0;
    for (int64_t i = 0; i < pow2(n); ++i)
      for (int64_t j = 0; j < pow2(n); ++j)
        tr += sigma[i * pow2(n) + j] * e[j * pow2(n) + i];
    probs[static_cast<size_t>(z)] = tr.real();
  }
  return probs;
}

Tensor dense_inverse(const Tensor& m) {
  SvdResult f = svd(m);
  if (f.s.empty() || f.s.back() <= 0.0 || f.s.front() / f.s.back() > 1e12)
    throw std::runtime_error("dense_inverse: matrix is singular or too ill-conditioned");
  return dense_matrix_inverse(m);
}

}  // namespace noisetn::oracle
