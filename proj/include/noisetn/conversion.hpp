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

#ifndef NOISETN_CONVERSION_HPP
#define NOISETN_CONVERSION_HPP

#include <string>

#include "noisetn/lpdo.hpp"
#include "noisetn/mpo.hpp"

namespace noisetn {

// LPDO -> superoperator MPO: contract the Kraus index between each site and
// its conjugate, merge the doubled virtual bonds. Output bond is chi_b^2, in
// the computational-vectorized basis.
SuperOpMpo lpdo_to_superop(const Lpdo& channel);

// Local change of basis on every physical leg, from the computational
// vectorization to normalized Pauli components (and back). Both are
// isometries, so Frobenius norms and distances are preserved.
SuperOpMpo to_pauli_basis(const SuperOpMpo& m);
SuperOpMpo to_computational_basis(const SuperOpMpo& m);

// Pauli transfer matrix coefficient c = Tr[P_out N[P_in]] / 2^n, read off as
// a single entry of the Pauli-basis MPO. Strings use letters I/X/Y/Z, site 0
// first ("XIZY").
double ptm_coefficient(const SuperOpMpo& m, const std::string& p_out,
                       const std::string& p_in);

// Convenience composition used wherever a trained channel meets Eq.-style
// figures of merit: lpdo_to_superop followed by the Pauli basis change.
SuperOpMpo lpdo_to_pauli_superop(const Lpdo& channel);

}  // namespace noisetn

#endif  // NOISETN_CONVERSION_HPP
