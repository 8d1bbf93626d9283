// Copyright 2026 The qtsvd Authors
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

#pragma once

#include "qtsvd/error.hpp"
#include "qtsvd/qtensor.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace qtsvd {

// Binary tensor fixture, all fields little-endian:
//
//   u64  magic   "QTENSOR1" (the eight ASCII bytes, in file order)
//   u64  L       tensor order, >= 3
//   u64  dims[L]
//   f64  w[prod dims], x[...], y[...], z[...]   planes in QTensor linear order

inline constexpr std::array<char, 8> kTensorMagic{'Q', 'T', 'E', 'N', 'S', 'O', 'R', '1'};

namespace detail {

template <typename T>
T to_little_endian(T v) {
    static_assert(sizeof(T) == 8);
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        bits = __builtin_bswap64(bits);
        std::memcpy(&v, &bits, 8);
        return v;
    }
}

template <typename T>
void write_le(std::ostream& os, T v) {
    v = to_little_endian(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw IoError("tensor fixture: unexpected end of data");
    return to_little_endian(v);
}

} // namespace detail

inline void write_tensor(std::ostream& os, const QTensor& a) {
    os.write(kTensorMagic.data(), kTensorMagic.size());
    detail::write_le<std::uint64_t>(os, a.order());
    for (auto d : a.dims()) detail::write_le<std::uint64_t>(os, d);
    for (double v : a.raw()) detail::write_le(os, v);
    if (!os) throw IoError("tensor fixture: write failed");
}

inline QTensor read_tensor(std::istream& is) {
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kTensorMagic) throw IoError("tensor fixture: bad magic");
    const auto order = detail::read_le<std::uint64_t>(is);
    if (order < 3 || order > 64) throw IoError("tensor fixture: unsupported order " + std::to_string(order));
    Dims dims(order);
    for (auto& d : dims) {
        d = detail::read_le<std::uint64_t>(is);
        if (d == 0) throw IoError("tensor fixture: zero-length mode");
    }
    QTensor a(dims);
    for (double& v : a.raw()) v = detail::read_le<double>(is);
    return a;
}

inline void save_tensor(const std::filesystem::path& path, const QTensor& a) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_tensor(os, a);
}

inline QTensor load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    return read_tensor(is);
}

} // namespace qtsvd
