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

#ifndef NOISETN_TENSOR_HPP
#define NOISETN_TENSOR_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace noisetn {

using cx = std::complex<double>;

// Dense row-major complex tensor.
//
// Every network in the library (MPOs, LPDOs, vectorized states) is a chain of
// these. Shapes stay small -- physical legs of dimension 2 or 4, bond legs up
// to a few hundred -- and all heavy contractions are routed through Eigen
// matrix products by tensordot().
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);
  Tensor(std::vector<int64_t> shape, std::vector<cx> data);

  const std::vector<int64_t>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int axis) const { return shape_[static_cast<size_t>(axis)]; }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }

  cx* data() { return data_.data(); }
  const cx* data() const { return data_.data(); }

  cx& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  const cx& operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  // Multi-index access; convenience for construction and tests, not for hot
  // loops.
  cx& at(std::initializer_list<int64_t> idx) { return data_[offset(idx)]; }
  const cx& at(std::initializer_list<int64_t> idx) const {
    return data_[offset(idx)];
  }

  bool all_finite() const;
  std::string shape_str() const;

 private:
  size_t offset(std::initializer_list<int64_t> idx) const;

  std::vector<int64_t> shape_;
  std::vector<cx> data_;
};

// Shape/data constructors and elementwise helpers.
Tensor zeros(std::vector<int64_t> shape);
Tensor identity_matrix(int64_t d);
Tensor conjugated(const Tensor& t);
Tensor scaled(const Tensor& t, cx factor);
Tensor added(const Tensor& a, const Tensor& b);
void accumulate(Tensor& acc, const Tensor& t, cx factor = cx(1.0, 0.0));
double norm2(const Tensor& t);  // sum |t_i|^2
double max_abs_diff(const Tensor& a, const Tensor& b);

// Reinterprets the flat data with a new shape of equal total size.
Tensor reshaped(Tensor t, std::vector<int64_t> shape);

// Axis permutation: result index (i_{axes[0]}, i_{axes[1]}, ...) reads
// t(i_0, i_1, ...).
Tensor permuted(const Tensor& t, const std::vector<int>& axes);

// Contraction of `a` and `b` over the listed axis pairs. The result carries
// the free axes of `a` (in order) followed by the free axes of `b`.
Tensor tensordot(const Tensor& a, const Tensor& b, const std::vector<int>& axes_a,
                 const std::vector<int>& axes_b);

// Rank-2 matrix product (no permutation cost).
Tensor matmul(const Tensor& a, const Tensor& b);

// Kronecker product of two rank-2 tensors.
Tensor kron(const Tensor& a, const Tensor& b);

struct SvdResult {
  Tensor u;                // (rows, k)
  std::vector<double> s;   // k descending
  Tensor vh;               // (k, cols)
};

// Thin SVD of a rank-2 tensor with a deterministic gauge: the
// largest-magnitude entry of every left singular vector is made real and
// positive, so repeated runs (and serialized models) are bit-stable.
SvdResult svd(const Tensor& m);

// Thin QR of a rank-2 tensor; R's diagonal is made real non-negative.
struct QrResult {
  Tensor q;  // (rows, k)
  Tensor r;  // (k, cols)
};
QrResult qr(const Tensor& m);

// Solves (h + ridge*I) x = b for Hermitian positive semidefinite h (rank-2),
// with b rank-1.
Tensor solve_hermitian(const Tensor& h, const Tensor& b, double ridge);

// Matrix inverse of a rank-2 tensor (LU with full pivoting).
Tensor dense_matrix_inverse(const Tensor& m);

// Eigenvalues of a Hermitian rank-2 tensor, ascending.
std::vector<double> hermitian_eigenvalues(const Tensor& m);

}  // namespace noisetn

#endif  // NOISETN_TENSOR_HPP
