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

#include "noisetn/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace noisetn {

namespace {

using EMatrix =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMatrix>;
using EConstMap = Eigen::Map<const EMatrix>;

int64_t shape_product(const std::vector<int64_t>& shape) {
  int64_t p = 1;
  for (int64_t d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive");
    p *= d;
  }
  return p;
}

}  // namespace

Tensor::Tensor(std::vector<int64_t> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_product(shape_))) {}

Tensor::Tensor(std::vector<int64_t> shape, std::vector<cx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != static_cast<int64_t>(data_.size()))
    throw std::invalid_argument("tensor data length does not match shape");
}

size_t Tensor::offset(std::initializer_list<int64_t> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    throw std::invalid_argument("index rank mismatch");
  int64_t off = 0;
  int axis = 0;
  for (int64_t i : idx) {
    if (i < 0 || i >= shape_[static_cast<size_t>(axis)])
      throw std::out_of_range("tensor index out of range");
    off = off * shape_[static_cast<size_t>(axis)] + i;
    ++axis;
  }
  return static_cast<size_t>(off);
}

bool Tensor::all_finite() const {
  for (const cx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
  os << ")";
  return os.str();
}

Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }

Tensor identity_matrix(int64_t d) {
  Tensor t({d, d});
  for (int64_t i = 0; i < d; ++i) t[i * d + i] = 1.0;
  return t;
}

Tensor conjugated(const Tensor& t) {
  Tensor out = t;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = std::conj(out[i]);
  return out;
}

Tensor scaled(const Tensor& t, cx factor) {
  Tensor out = t;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= factor;
  return out;
}

Tensor added(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("tensor shape mismatch in added(): " +
                                a.shape_str() + " vs " + b.shape_str());
  Tensor out = a;
  for (int64_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

void accumulate(Tensor& acc, const Tensor& t, cx factor) {
  if (acc.shape() != t.shape())
    throw std::invalid_argument("tensor shape mismatch in accumulate()");
  for (int64_t i = 0; i < t.size(); ++i) acc[i] += factor * t[i];
}

double norm2(const Tensor& t) {
  double s = 0.0;
  for (int64_t i = 0; i < t.size(); ++i) s += std::norm(t[i]);
  return s;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("tensor shape mismatch in max_abs_diff(): " +
                                a.shape_str() + " vs " + b.shape_str());
  double m = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Tensor reshaped(Tensor t, std::vector<int64_t> shape) {
  if (shape_product(shape) != t.size())
    throw std::invalid_argument("reshape changes total size");
  std::vector<cx> data(t.data(), t.data() + t.size());
  return Tensor(std::move(shape), std::move(data));
}

Tensor permuted(const Tensor& t, const std::vector<int>& axes) {
  const int r = t.rank();
  if (static_cast<int>(axes.size()) != r)
    throw std::invalid_argument("permutation rank mismatch");
  std::vector<int64_t> new_shape(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) new_shape[static_cast<size_t>(i)] = t.dim(axes[static_cast<size_t>(i)]);
  Tensor out(new_shape);

  // Strides of the source tensor.
  std::vector<int64_t> src_stride(static_cast<size_t>(r), 1);
  for (int i = r - 2; i >= 0; --i)
    src_stride[static_cast<size_t>(i)] = src_stride[static_cast<size_t>(i + 1)] * t.dim(i + 1);

  // Stride of each output axis in the source layout.
  std::vector<int64_t> out_stride(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) out_stride[static_cast<size_t>(i)] = src_stride[static_cast<size_t>(axes[static_cast<size_t>(i)])];

  std::vector<int64_t> idx(static_cast<size_t>(r), 0);
  const cx* src = t.data();
  cx* dst = out.data();
  const int64_t total = t.size();
  int64_t src_off = 0;
  for (int64_t c = 0; c < total; ++c) {
    dst[c] = src[src_off];
    for (int axis = r - 1; axis >= 0; --axis) {
      auto ua = static_cast<size_t>(axis);
      if (++idx[ua] < new_shape[ua]) {
        src_off += out_stride[ua];
        break;
      }
      idx[ua] = 0;
      src_off -= out_stride[ua] * (new_shape[ua] - 1);
    }
  }
  return out;
}

Tensor tensordot(const Tensor& a, const Tensor& b, const std::vector<int>& axes_a,
                 const std::vector<int>& axes_b) {
  if (axes_a.size() != axes_b.size())
    throw std::invalid_argument("tensordot: contracted axis count mismatch");
  const int ra = a.rank(), rb = b.rank();
  const int nc = static_cast<int>(axes_a.size());

  std::vector<bool> a_contracted(static_cast<size_t>(ra), false);
  std::vector<bool> b_contracted(static_cast<size_t>(rb), false);
  int64_t contracted_size = 1;
  for (int i = 0; i < nc; ++i) {
    int ia = axes_a[static_cast<size_t>(i)], ib = axes_b[static_cast<size_t>(i)];
    if (ia < 0 || ia >= ra || ib < 0 || ib >= rb)
      throw std::invalid_argument("tensordot: axis out of range");
    if (a.dim(ia) != b.dim(ib))
      throw std::invalid_argument("tensordot: contracted dimensions disagree (" +
                                  a.shape_str() + " vs " + b.shape_str() + ")");
    if (a_contracted[static_cast<size_t>(ia)] || b_contracted[static_cast<size_t>(ib)])
      throw std::invalid_argument("tensordot: repeated axis");
    a_contracted[static_cast<size_t>(ia)] = true;
    b_contracted[static_cast<size_t>(ib)] = true;
    contracted_size *= a.dim(ia);
  }

  std::vector<int> pa, pb;
  std::vector<int64_t> out_shape;
  int64_t free_a = 1, free_b = 1;
  for (int i = 0; i < ra; ++i)
    if (!a_contracted[static_cast<size_t>(i)]) {
      pa.push_back(i);
      out_shape.push_back(a.dim(i));
      free_a *= a.dim(i);
    }
  for (int i = 0; i < nc; ++i) pa.push_back(axes_a[static_cast<size_t>(i)]);
  for (int i = 0; i < nc; ++i) pb.push_back(axes_b[static_cast<size_t>(i)]);
  for (int i = 0; i < rb; ++i)
    if (!b_contracted[static_cast<size_t>(i)]) {
      pb.push_back(i);
      out_shape.push_back(b.dim(i));
      free_b *= b.dim(i);
    }

  Tensor am = permuted(a, pa);
  Tensor bm = permuted(b, pb);
  if (out_shape.empty()) out_shape.push_back(1);  // scalar as shape (1)

  Tensor out(out_shape);
  EConstMap ma(am.data(), free_a, contracted_size);
  EConstMap mb(bm.data(), contracted_size, free_b);
  EMap mo(out.data(), free_a, free_b);
  mo.noalias() = ma * mb;
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0))
    throw std::invalid_argument("matmul: incompatible shapes " + a.shape_str() +
                                " x " + b.shape_str());
  Tensor out({a.dim(0), b.dim(1)});
  EConstMap ma(a.data(), a.dim(0), a.dim(1));
  EConstMap mb(b.data(), b.dim(0), b.dim(1));
  EMap mo(out.data(), a.dim(0), b.dim(1));
  mo.noalias() = ma * mb;
  return out;
}

Tensor kron(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw std::invalid_argument("kron: rank-2 tensors required");
  const int64_t ar = a.dim(0), ac = a.dim(1), br = b.dim(0), bc = b.dim(1);
  Tensor out({ar * br, ac * bc});
  for (int64_t i = 0; i < ar; ++i)
    for (int64_t j = 0; j < ac; ++j) {
      cx f = a[i * ac + j];
      if (f == cx(0.0, 0.0)) continue;
      for (int64_t k = 0; k < br; ++k)
        for (int64_t l = 0; l < bc; ++l)
          out[(i * br + k) * (ac * bc) + (j * bc + l)] = f * b[k * bc + l];
    }
  return out;
}

SvdResult svd(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("svd: rank-2 tensor required");
  const int64_t rows = m.dim(0), cols = m.dim(1);
  EConstMap mm(m.data(), rows, cols);

  EMatrix u, vh;
  Eigen::VectorXd s;
  if (std::min(rows, cols) > 16) {
    Eigen::BDCSVD<EMatrix> dec(mm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = dec.matrixU();
    vh = dec.matrixV().adjoint();
    s = dec.singularValues();
  } else {
    Eigen::JacobiSVD<EMatrix> dec(mm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = dec.matrixU();
    vh = dec.matrixV().adjoint();
    s = dec.singularValues();
  }

  // Gauge fix: rotate each left singular vector so its largest-magnitude
  // entry is real positive.
  const int64_t k = s.size();
  for (int64_t j = 0; j < k; ++j) {
    int64_t imax = 0;
    double amax = -1.0;
    for (int64_t i = 0; i < rows; ++i) {
      double a = std::abs(u(i, j));
      if (a > amax + 1e-300) {
        amax = a;
        imax = i;
      }
    }
    if (amax > 0.0) {
      cx phase = u(imax, j) / amax;
      u.col(j) *= std::conj(phase);
      vh.row(j) *= phase;
    }
  }

  SvdResult out;
  out.u = Tensor({rows, k});
  out.vh = Tensor({k, cols});
  EMap(out.u.data(), rows, k) = u;
  EMap(out.vh.data(), k, cols) = vh;
  out.s.assign(s.data(), s.data() + k);
  return out;
}

QrResult qr(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("qr: rank-2 tensor required");
  const int64_t rows = m.dim(0), cols = m.dim(1);
  const int64_t k = std::min(rows, cols);
  EConstMap mm(m.data(), rows, cols);
  Eigen::HouseholderQR<EMatrix> dec(mm);
  EMatrix q = dec.householderQ() * EMatrix::Identity(rows, k);
  EMatrix r = dec.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int64_t j = 0; j < k; ++j) {
    double a = std::abs(r(j, j));
    if (a > 0.0) {
      cx phase = r(j, j) / a;
      r.row(j) *= std::conj(phase);
      q.col(j) *= phase;
    }
  }
  QrResult out;
  out.q = Tensor({rows, k});
  out.r = Tensor({k, cols});
  EMap(out.q.data(), rows, k) = q;
  EMap(out.r.data(), k, cols) = r;
  return out;
}

Tensor solve_hermitian(const Tensor& h, const Tensor& b, double ridge) {
  if (h.rank() != 2 || h.dim(0) != h.dim(1))
    throw std::invalid_argument("solve_hermitian: square matrix required");
  const int64_t d = h.dim(0);
  if (b.size() != d) throw std::invalid_argument("solve_hermitian: rhs size mismatch");
  EConstMap mh(h.data(), d, d);
  Eigen::Map<const Eigen::VectorXcd> vb(b.data(), d);
  EMatrix reg = mh;
  for (int64_t i = 0; i < d; ++i) reg(i, i) += ridge;
  Eigen::LDLT<EMatrix> dec(reg);
  Eigen::VectorXcd x = dec.solve(vb);
  Tensor out({d});
  Eigen::Map<Eigen::VectorXcd>(out.data(), d) = x;
  return out;
}

Tensor dense_matrix_inverse(const Tensor& m) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1))
    throw std::invalid_argument("matrix inverse: square matrix required");
  const int64_t d = m.dim(0);
  EConstMap mm(m.data(), d, d);
  Eigen::FullPivLU<EMatrix> lu(mm);
  if (!lu.isInvertible())
    throw std::runtime_error("matrix inverse: matrix is singular");
  Tensor out({d, d});
  EMap(out.data(), d, d) = lu.inverse();
  return out;
}

std::vector<double> hermitian_eigenvalues(const Tensor& m) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1))
    throw std::invalid_argument("hermitian_eigenvalues: square matrix required");
  const int64_t d = m.dim(0);
  EConstMap mm(m.data(), d, d);
  Eigen::SelfAdjointEigenSolver<EMatrix> dec(mm, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<size_t>(d));
  for (int64_t i = 0; i < d; ++i) out[static_cast<size_t>(i)] = dec.eigenvalues()(i);
  return out;
}

}  // namespace noisetn
