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

#include "noisetn/mpo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetn {

namespace {

int64_t middle_size(const Tensor& site) {
  int64_t p = 1;
  for (int ax = 1; ax < site.rank() - 1; ++ax) p *= site.dim(ax);
  return p;
}

// Matricize a site as (bond_left * middle, bond_right).
Tensor as_left_matrix(const Tensor& site) {
  return reshaped(site, {site.dim(0) * middle_size(site), site.dim(site.rank() - 1)});
}

// Matricize a site as (bond_left, middle * bond_right).
Tensor as_right_matrix(const Tensor& site) {
  return reshaped(site, {site.dim(0), middle_size(site) * site.dim(site.rank() - 1)});
}

std::vector<int64_t> with_bonds(const Tensor& site, int64_t bl, int64_t br) {
  std::vector<int64_t> s = site.shape();
  s.front() = bl;
  s.back() = br;
  return s;
}

}  // namespace

ProductEffect product_effect(const std::vector<uint8_t>& beta,
                             const std::vector<int8_t>& zeta) {
  if (beta.size() != zeta.size())
    throw std::invalid_argument("product_effect: beta/zeta length mismatch");
  ProductEffect e;
  e.factors.reserve(beta.size());
  for (size_t j = 0; j < beta.size(); ++j)
    e.factors.push_back(effect_matrix(beta[j], zeta[j]));
  return e;
}

void validate_chain(const std::vector<Tensor>& sites, int64_t middle_dims,
                    const char* what) {
  if (sites.empty()) throw std::invalid_argument(std::string(what) + ": empty chain");
  if (sites.front().dim(0) != 1 || sites.back().dim(sites.back().rank() - 1) != 1)
    throw std::invalid_argument(std::string(what) + ": boundary bonds must be 1");
  for (size_t j = 0; j < sites.size(); ++j) {
    const Tensor& s = sites[j];
    if (s.rank() != static_cast<int>(middle_dims) + 2)
      throw std::invalid_argument(std::string(what) + ": wrong site rank");
    if (j + 1 < sites.size() &&
        s.dim(s.rank() - 1) != sites[j + 1].dim(0))
      throw std::invalid_argument(std::string(what) + ": adjacent bonds mismatch at site " +
                                  std::to_string(j));
    if (!s.all_finite())
      throw std::invalid_argument(std::string(what) + ": non-finite entries at site " +
                                  std::to_string(j));
  }
}

void validate(const StateMpo& m) {
  validate_chain(m.sites, 2, "StateMpo");
  if (static_cast<int>(m.sites.size()) != m.n)
    throw std::invalid_argument("StateMpo: site count != n");
}

void validate(const VecMps& m) {
  validate_chain(m.sites, 1, "VecMps");
  if (static_cast<int>(m.sites.size()) != m.n)
    throw std::invalid_argument("VecMps: site count != n");
}

void validate(const SuperOpMpo& m) {
  validate_chain(m.sites, 2, "SuperOpMpo");
  if (static_cast<int>(m.sites.size()) != m.n)
    throw std::invalid_argument("SuperOpMpo: site count != n");
}

int max_bond(const std::vector<Tensor>& sites) {
  int64_t b = 1;
  for (const Tensor& s : sites) b = std::max(b, s.dim(s.rank() - 1));
  return static_cast<int>(b);
}

StateMpo product_state_mpo(const std::vector<Tensor>& local_ops) {
  StateMpo m;
  m.n = static_cast<int>(local_ops.size());
  for (const Tensor& op : local_ops) {
    if (op.rank() != 2 || op.dim(0) != 2 || op.dim(1) != 2)
      throw std::invalid_argument("product_state_mpo: 2x2 factors required");
    m.sites.push_back(reshaped(op, {1, 2, 2, 1}));
  }
  return m;
}

SuperOpMpo identity_superop(int n, Basis basis) {
  if (n < 1) throw std::invalid_argument("identity_superop: n >= 1 required");
  SuperOpMpo m;
  m.n = n;
  m.basis = basis;
  for (int j = 0; j < n; ++j) m.sites.push_back(reshaped(identity_matrix(4), {1, 4, 4, 1}));
  return m;
}

VecMps product_vec(const std::vector<Tensor>& local_vecs, Basis basis) {
  VecMps v;
  v.n = static_cast<int>(local_vecs.size());
  v.basis = basis;
  for (const Tensor& x : local_vecs) {
    if (x.size() != 4) throw std::invalid_argument("product_vec: length-4 factors required");
    v.sites.push_back(reshaped(x, {1, 4, 1}));
  }
  return v;
}

TruncationStats compress_chain(std::vector<Tensor>& sites, int chi_max, double cutoff) {
  TruncationStats stats;
  const int n = static_cast<int>(sites.size());

  // Left-canonical sweep.
  for (int j = 0; j + 1 < n; ++j) {
    QrResult f = qr(as_left_matrix(sites[static_cast<size_t>(j)]));
    int64_t k = f.q.dim(1);
    sites[static_cast<size_t>(j)] =
        reshaped(std::move(f.q), with_bonds(sites[static_cast<size_t>(j)],
                                            sites[static_cast<size_t>(j)].dim(0), k));
    Tensor next = as_right_matrix(sites[static_cast<size_t>(j + 1)]);
    Tensor merged = matmul(f.r, next);
    sites[static_cast<size_t>(j + 1)] = reshaped(
        std::move(merged), with_bonds(sites[static_cast<size_t>(j + 1)], k,
                                      sites[static_cast<size_t>(j + 1)]
                                          .dim(sites[static_cast<size_t>(j + 1)].rank() - 1)));
  }

  // Right-to-left truncation sweep.
  for (int j = n - 1; j > 0; --j) {
    Tensor m = as_right_matrix(sites[static_cast<size_t>(j)]);
    SvdResult f = svd(m);
    const int64_t full = static_cast<int64_t>(f.s.size());
    int64_t keep = full;
    if (cutoff > 0.0) {
      double acc = 0.0;
      while (keep > 1) {
        double w = f.s[static_cast<size_t>(keep - 1)] * f.s[static_cast<size_t>(keep - 1)];
        if (acc + w > cutoff) break;
        acc += w;
        --keep;
      }
    }
    if (chi_max > 0) keep = std::min<int64_t>(keep, chi_max);
    keep = std::max<int64_t>(keep, 1);
    for (int64_t r = keep; r < full; ++r)
      stats.discarded_weight += f.s[static_cast<size_t>(r)] * f.s[static_cast<size_t>(r)];

    // Kept right factor becomes the new site; U * S is absorbed leftwards.
    Tensor vh_keep({keep, m.dim(1)});
    for (int64_t r = 0; r < keep; ++r)
      for (int64_t c = 0; c < m.dim(1); ++c)
        vh_keep[r * m.dim(1) + c] = f.vh[r * m.dim(1) + c];
    sites[static_cast<size_t>(j)] =
        reshaped(std::move(vh_keep), with_bonds(sites[static_cast<size_t>(j)], keep,
                                                sites[static_cast<size_t>(j)]
                                                    .dim(sites[static_cast<size_t>(j)].rank() - 1)));

    Tensor us({m.dim(0), keep});
    for (int64_t r = 0; r < m.dim(0); ++r)
      for (int64_t c = 0; c < keep; ++c)
        us[r * keep + c] = f.u[r * full + c] * f.s[static_cast<size_t>(c)];
    Tensor prev = as_left_matrix(sites[static_cast<size_t>(j - 1)]);
    Tensor merged = matmul(prev, us);
    sites[static_cast<size_t>(j - 1)] = reshaped(
        std::move(merged),
        with_bonds(sites[static_cast<size_t>(j - 1)], sites[static_cast<size_t>(j - 1)].dim(0), keep));
  }

  stats.max_bond = max_bond(sites);
  return stats;
}

StateMpo svd_truncate(StateMpo m, int chi_max, double cutoff, TruncationStats* stats) {
  validate(m);
  TruncationStats s = compress_chain(m.sites, chi_max, cutoff);
  if (stats) *stats = s;
  return m;
}

SuperOpMpo svd_truncate(SuperOpMpo m, int chi_max, double cutoff, TruncationStats* stats) {
  validate(m);
  TruncationStats s = compress_chain(m.sites, chi_max, cutoff);
  if (stats) *stats = s;
  return m;
}

VecMps svd_truncate(VecMps m, int chi_max, double cutoff, TruncationStats* stats) {
  validate(m);
  TruncationStats s = compress_chain(m.sites, chi_max, cutoff);
  if (stats) *stats = s;
  return m;
}

cx chain_inner(const std::vector<Tensor>& a, const std::vector<Tensor>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("chain_inner: length mismatch");
  Tensor env = identity_matrix(1);  // [a_bond, b_bond]
  for (size_t j = 0; j < a.size(); ++j) {
    const Tensor& sa = a[j];
    const Tensor& sb = b[j];
    if (middle_size(sa) != middle_size(sb))
      throw std::invalid_argument("chain_inner: physical dimensions mismatch");
    // env' = sum_{p} A_p^H (env B_p)
    Tensor x = tensordot(env, reshaped(sb, {sb.dim(0), middle_size(sb), sb.dim(sb.rank() - 1)}),
                         {1}, {0});  // [aL, p, bR]
    Tensor am = reshaped(conjugated(sa), {sa.dim(0), middle_size(sa), sa.dim(sa.rank() - 1)});
    env = tensordot(am, x, {0, 1}, {0, 1});  // [aR, bR]
  }
  return env[0];
}

cx mpo_inner(const SuperOpMpo& a, const SuperOpMpo& b) {
  if (a.n != b.n) throw std::invalid_argument("mpo_inner: qubit count mismatch");
  if (a.basis != b.basis) throw std::invalid_argument("mpo_inner: basis mismatch");
  return chain_inner(a.sites, b.sites);
}

double mpo_norm2(const SuperOpMpo& a) { return chain_inner(a.sites, a.sites).real(); }

cx op_inner(const OperatorMpo& a, const OperatorMpo& b) {
  if (a.n != b.n) throw std::invalid_argument("op_inner: qubit count mismatch");
  return chain_inner(a.sites, b.sites);
}

cx vec_inner(const VecMps& a, const VecMps& b) {
  if (a.n != b.n) throw std::invalid_argument("vec_inner: qubit count mismatch");
  if (a.basis != b.basis) throw std::invalid_argument("vec_inner: basis mismatch");
  return chain_inner(a.sites, b.sites);
}

double vec_norm2(const VecMps& a) { return chain_inner(a.sites, a.sites).real(); }

double frobenius_error(const SuperOpMpo& a, const SuperOpMpo& b) {
  if (a.n != b.n) throw std::invalid_argument("frobenius_error: qubit count mismatch");
  if (a.basis != b.basis) throw std::invalid_argument("frobenius_error: basis mismatch");
  double na = mpo_norm2(a);
  double nb = mpo_norm2(b);
  double cross = chain_inner(a.sites, b.sites).real();
  double delta = (na + nb - 2.0 * cross) / std::pow(4.0, a.n);
  return std::max(delta, 0.0);
}

SuperOpMpo compose(const SuperOpMpo& after, const SuperOpMpo& before) {
  if (after.n != before.n) throw std::invalid_argument("compose: qubit count mismatch");
  if (after.basis != before.basis) throw std::invalid_argument("compose: basis mismatch");
  SuperOpMpo out;
  out.n = after.n;
  out.basis = after.basis;
  out.sites.reserve(static_cast<size_t>(out.n));
  for (int j = 0; j < out.n; ++j) {
    const Tensor& sa = after.sites[static_cast<size_t>(j)];
    const Tensor& sb = before.sites[static_cast<size_t>(j)];
    // [aL,o,aR, bL,i,bR] <- sum_m sa[aL,o,m,aR] sb[bL,m,i,bR]
    Tensor t = tensordot(sa, sb, {2}, {1});
    t = permuted(t, {0, 3, 1, 4, 2, 5});  // [aL,bL,o,i,aR,bR]
    out.sites.push_back(reshaped(std::move(t), {sa.dim(0) * sb.dim(0), 4, 4,
                                                sa.dim(3) * sb.dim(3)}));
  }
  return out;
}

VecMps apply_superop(const SuperOpMpo& op, const VecMps& v) {
  if (op.n != v.n) throw std::invalid_argument("apply_superop: qubit count mismatch");
  if (op.basis != v.basis) throw std::invalid_argument("apply_superop: basis mismatch");
  VecMps out;
  out.n = v.n;
  out.basis = v.basis;
  out.sites.reserve(static_cast<size_t>(v.n));
  for (int j = 0; j < v.n; ++j) {
    const Tensor& s = op.sites[static_cast<size_t>(j)];
    const Tensor& x = v.sites[static_cast<size_t>(j)];
    Tensor t = tensordot(s, x, {2}, {1});      // [sL,o,sR, vL,vR]
    t = permuted(t, {0, 3, 1, 2, 4});          // [sL,vL,o,sR,vR]
    out.sites.push_back(reshaped(std::move(t), {s.dim(0) * x.dim(0), 4,
                                                s.dim(3) * x.dim(2)}));
  }
  return out;
}

cx mpo_trace(const StateMpo& m) {
  Tensor env = identity_matrix(1);
  for (const Tensor& s : m.sites) {
    Tensor tr({s.dim(0), s.dim(3)});
    for (int64_t l = 0; l < s.dim(0); ++l)
      for (int64_t r = 0; r < s.dim(3); ++r) {
        cx acc = 0.0;
        for (int64_t k = 0; k < 2; ++k)
          acc += s[((l * 2 + k) * 2 + k) * s.dim(3) + r];
        tr[l * s.dim(3) + r] = acc;
      }
    env = matmul(env, tr);
  }
  return env[0];
}

double expectation(const StateMpo& rho, const ProductEffect& effect) {
  if (effect.n() != rho.n)
    throw std::invalid_argument("expectation: qubit count mismatch");
  Tensor env = identity_matrix(1);
  for (int j = 0; j < rho.n; ++j) {
    const Tensor& s = rho.sites[static_cast<size_t>(j)];
    const Tensor& pi = effect.factors[static_cast<size_t>(j)];
    // sum_{k,b} rho[l,k,b,r] * Pi[b,k]
    Tensor t = tensordot(s, pi, {1, 2}, {1, 0});  // [l, r]
    env = matmul(env, t);
  }
  return env[0].real();
}

VecMps to_vec(const StateMpo& rho, Basis basis) {
  VecMps v;
  v.n = rho.n;
  v.basis = Basis::Computational;
  v.sites.reserve(static_cast<size_t>(rho.n));
  for (const Tensor& s : rho.sites)
    v.sites.push_back(reshaped(s, {s.dim(0), 4, s.dim(3)}));
  return basis == Basis::Computational ? v : change_vec_basis(v, basis);
}

StateMpo to_state(const VecMps& v) {
  VecMps c = v.basis == Basis::Computational ? v : change_vec_basis(v, Basis::Computational);
  StateMpo rho;
  rho.n = c.n;
  rho.sites.reserve(static_cast<size_t>(c.n));
  for (const Tensor& s : c.sites)
    rho.sites.push_back(reshaped(s, {s.dim(0), 2, 2, s.dim(2)}));
  return rho;
}

VecMps change_vec_basis(const VecMps& v, Basis target) {
  if (v.basis == target) return v;
  const Tensor& w = pauli_basis_change();
  Tensor m = (target == Basis::Pauli) ? w : conjugated(permuted(w, {1, 0}));  // W or W^dag
  VecMps out;
  out.n = v.n;
  out.basis = target;
  out.sites.reserve(static_cast<size_t>(v.n));
  for (const Tensor& s : v.sites) {
    Tensor t = tensordot(m, s, {1}, {1});  // [p, bL, bR]
    out.sites.push_back(permuted(t, {1, 0, 2}));
  }
  return out;
}

Tensor trace_vector(Basis basis) {
  Tensor t({4});
  if (basis == Basis::Computational) {
    t[0] = 1.0;
    t[3] = 1.0;
  } else {
    t[0] = 1.4142135623730950488016887242097;  // Tr[sigma_I / sqrt(2)] = sqrt(2)
  }
  return t;
}

void apply_two_qubit_gate(StateMpo& rho, const Tensor& u, int site, int chi_max,
                          double cutoff) {
  if (u.rank() != 2 || u.dim(0) != 4 || u.dim(1) != 4)
    throw std::invalid_argument("apply_two_qubit_gate: 4x4 gate required");
  if (site < 0 || site + 1 >= rho.n)
    throw std::invalid_argument("apply_two_qubit_gate: site out of range");
  Tensor& sa = rho.sites[static_cast<size_t>(site)];
  Tensor& sb = rho.sites[static_cast<size_t>(site + 1)];
  const int64_t bl = sa.dim(0), br = sb.dim(3);

  Tensor theta = tensordot(sa, sb, {3}, {0});  // [bL,k1,b1,k2,b2,bR]
  Tensor u4 = reshaped(u, {2, 2, 2, 2});       // [k1',k2',k1,k2]
  theta = tensordot(u4, theta, {2, 3}, {1, 3});              // [k1',k2',bL,b1,b2,bR]
  theta = tensordot(conjugated(u4), theta, {2, 3}, {3, 4});  // [b1',b2',k1',k2',bL,bR]
  theta = permuted(theta, {4, 2, 0, 3, 1, 5});               // [bL,k1',b1',k2',b2',bR]

  Tensor m = reshaped(std::move(theta), {bl * 4, 4 * br});
  SvdResult f = svd(m);
  const int64_t full = static_cast<int64_t>(f.s.size());
  int64_t keep = full;
  if (cutoff > 0.0) {
    double acc = 0.0;
    while (keep > 1) {
      double w = f.s[static_cast<size_t>(keep - 1)] * f.s[static_cast<size_t>(keep - 1)];
      if (acc + w > cutoff) break;
      acc += w;
      --keep;
    }
  }
  if (chi_max > 0) keep = std::min<int64_t>(keep, chi_max);
  keep = std::max<int64_t>(keep, 1);

  Tensor left({bl * 4, keep});
  for (int64_t r = 0; r < bl * 4; ++r)
    for (int64_t c = 0; c < keep; ++c) left[r * keep + c] = f.u[r * full + c];
  Tensor right({keep, 4 * br});
  for (int64_t r = 0; r < keep; ++r)
    for (int64_t c = 0; c < 4 * br; ++c)
      right[r * 4 * br + c] = f.s[static_cast<size_t>(r)] * f.vh[r * 4 * br + c];

  sa = reshaped(std::move(left), {bl, 2, 2, keep});
  sb = reshaped(std::move(right), {keep, 2, 2, br});
}

}  // namespace noisetn
