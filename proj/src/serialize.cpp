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

#include "noisetn/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace noisetn {

namespace {

constexpr char kMagic[4] = {'N', 'T', 'N', 'M'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u8(std::ostream& out, uint8_t v) {
  out.write(reinterpret_cast<const char*>(&v), 1);
}

void put_f64(std::ostream& out, double d) {
  uint64_t v = std::bit_cast<uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(path + ": truncated model file");
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

uint8_t get_u8(std::istream& in, const std::string& path) {
  char c;
  if (!in.read(&c, 1)) throw std::runtime_error(path + ": truncated model file");
  return static_cast<uint8_t>(c);
}

double get_f64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw std::runtime_error(path + ": truncated model file");
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return std::bit_cast<double>(v);
}

void write_sites(std::ostream& out, const std::vector<Tensor>& sites) {
  for (const Tensor& s : sites) {
    put_u8(out, static_cast<uint8_t>(s.rank()));
    for (int ax = 0; ax < s.rank(); ++ax) put_u32(out, static_cast<uint32_t>(s.dim(ax)));
  }
  for (const Tensor& s : sites)
    for (int64_t i = 0; i < s.size(); ++i) {
      put_f64(out, s[i].real());
      put_f64(out, s[i].imag());
    }
}

std::vector<Tensor> read_sites(std::istream& in, uint32_t n, const std::string& path) {
  std::vector<Tensor> sites;
  sites.reserve(n);
  for (uint32_t j = 0; j < n; ++j) {
    uint8_t rank = get_u8(in, path);
    std::vector<int64_t> shape;
    for (int ax = 0; ax < rank; ++ax) shape.push_back(get_u32(in, path));
    sites.emplace_back(std::move(shape));
  }
  for (Tensor& s : sites)
    for (int64_t i = 0; i < s.size(); ++i) {
      double re = get_f64(in, path);
      double im = get_f64(in, path);
      s[i] = cx(re, im);
    }
  return sites;
}

}  // namespace

void save_model(const std::string& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Lpdo>) {
          put_u8(out, 0);
          put_u8(out, 0xff);
          put_u32(out, static_cast<uint32_t>(m.n));
          write_sites(out, m.sites);
        } else if constexpr (std::is_same_v<T, SuperOpMpo>) {
          put_u8(out, 1);
          put_u8(out, static_cast<uint8_t>(m.basis));
          put_u32(out, static_cast<uint32_t>(m.n));
          write_sites(out, m.sites);
        } else if constexpr (std::is_same_v<T, StateMpo>) {
          put_u8(out, 2);
          put_u8(out, 0xff);
          put_u32(out, static_cast<uint32_t>(m.n));
          write_sites(out, m.sites);
        } else {
          put_u8(out, 3);
          put_u8(out, static_cast<uint8_t>(m.basis));
          put_u32(out, static_cast<uint32_t>(m.n));
          write_sites(out, m.sites);
        }
      },
      model);
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a noisetn model file");
  uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw std::runtime_error(path + ": unsupported model version " + std::to_string(version));
  uint8_t kind = get_u8(in, path);
  uint8_t basis = get_u8(in, path);
  uint32_t n = get_u32(in, path);
  std::vector<Tensor> sites = read_sites(in, n, path);

  switch (kind) {
    case 0: {
      Lpdo l;
      l.n = static_cast<int>(n);
      l.sites = std::move(sites);
      l.chi_b = 1;
      l.chi_kappa = 1;
      for (const Tensor& s : l.sites) {
        l.chi_b = std::max<int>(l.chi_b, static_cast<int>(s.dim(3)));
        l.chi_kappa = std::max<int>(l.chi_kappa, static_cast<int>(s.dim(4)));
      }
      validate(l);
      return l;
    }
    case 1: {
      SuperOpMpo m;
      m.n = static_cast<int>(n);
      m.basis = static_cast<Basis>(basis);
      m.sites = std::move(sites);
      validate(m);
      return m;
    }
    case 2: {
      StateMpo m;
      m.n = static_cast<int>(n);
      m.sites = std::move(sites);
      validate(m);
      return m;
    }
    case 3: {
      VecMps m;
      m.n = static_cast<int>(n);
      m.basis = static_cast<Basis>(basis);
      m.sites = std::move(sites);
      validate(m);
      return m;
    }
    default:
      throw std::runtime_error(path + ": unknown model kind " + std::to_string(kind));
  }
}

Lpdo load_lpdo(const std::string& path) {
  AnyModel m = load_model(path);
  if (auto* l = std::get_if<Lpdo>(&m)) return std::move(*l);
  throw std::runtime_error(path + ": model file does not hold an LPDO");
}

SuperOpMpo load_superop(const std::string& path) {
  AnyModel m = load_model(path);
  if (auto* s = std::get_if<SuperOpMpo>(&m)) return std::move(*s);
  throw std::runtime_error(path + ": model file does not hold a superoperator MPO");
}

}  // namespace noisetn
