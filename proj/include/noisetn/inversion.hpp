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

#ifndef NOISETN_INVERSION_HPP
#define NOISETN_INVERSION_HPP

#include <vector>

#include "noisetn/mpo.hpp"

namespace noisetn {

// Residual Delta_phi = |Gamma Upsilon - 1|_F^2, by exact MPO inner products.
double inversion_residual(const SuperOpMpo& gamma, const SuperOpMpo& upsilon);

// Right-inverse approximation of Gamma at fixed bond dimension chi:
// alternating local solves of the quadratic subproblem (normal equations with
// a 1e-12 Tikhonov ridge), sweeping left-right-left per sweep. The residual
// after each half-sweep is appended to `history` when given; it is
// non-increasing by construction.
SuperOpMpo invert_sweep(const SuperOpMpo& gamma, int chi, int sweeps,
                        std::vector<double>* history = nullptr);

// Gradient descent with backtracking on Delta_phi over all site tensors;
// returns the best iterate seen (never worse than the input).
SuperOpMpo variational_polish(const SuperOpMpo& gamma, SuperOpMpo upsilon0,
                              int max_iters);

// Trace of a superoperator MPO viewed as a 4^n x 4^n matrix.
cx superop_trace(const SuperOpMpo& m);

}  // namespace noisetn

#endif  // NOISETN_INVERSION_HPP
