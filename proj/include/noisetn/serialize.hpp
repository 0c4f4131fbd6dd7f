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

#ifndef NOISETN_SERIALIZE_HPP
#define NOISETN_SERIALIZE_HPP

#include <string>
#include <variant>

#include "noisetn/lpdo.hpp"
#include "noisetn/mpo.hpp"

namespace noisetn {

// Tensor-network model container. Binary format, little-endian:
//
//   magic   "NTNM"            4 bytes
//   version u32               currently 1
//   kind    u8                0 = Lpdo, 1 = SuperOpMpo, 2 = StateMpo, 3 = VecMps
//   basis   u8                0 = computational, 1 = Pauli, 0xff = n/a
//   n       u32
//   per site: rank u8, dims u32[rank]
//   payload: per site, row-major complex entries as f64 (re, im) pairs
using AnyModel = std::variant<Lpdo, SuperOpMpo, StateMpo, VecMps>;

void save_model(const std::string& path, const AnyModel& model);
AnyModel load_model(const std::string& path);

// Typed loaders; throw when the file holds a different kind.
Lpdo load_lpdo(const std::string& path);
SuperOpMpo load_superop(const std::string& path);

}  // namespace noisetn

#endif  // NOISETN_SERIALIZE_HPP
