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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace qtsvd {

/// A sequence of 8-bit RGB frames of equal size. Pixels are interleaved
/// R, G, B in row-major order: channel c of pixel (row, col) is at
/// 3 * (row * width + col) + c.
struct FrameStack {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::vector<std::uint8_t>> frames;

    [[nodiscard]] std::size_t frame_count() const { return frames.size(); }
    [[nodiscard]] std::size_t frame_bytes() const { return 3 * height * width; }

    std::uint8_t& at(std::size_t f, std::size_t row, std::size_t col, int channel) {
        return frames[f][3 * (row * width + col) + static_cast<std::size_t>(channel)];
    }
    [[nodiscard]] std::uint8_t at(std::size_t f, std::size_t row, std::size_t col, int channel) const {
        return frames[f][3 * (row * width + col) + static_cast<std::size_t>(channel)];
    }

    friend bool operator==(const FrameStack&, const FrameStack&) = default;
};

inline FrameStack make_frames(std::size_t height, std::size_t width, std::size_t count) {
    FrameStack fs;
    fs.height = height;
    fs.width = width;
    fs.frames.assign(count, std::vector<std::uint8_t>(3 * height * width, 0));
    return fs;
}

/// Keeps the last `count` frames (all of them when count is 0 or too large).
inline FrameStack select_last(FrameStack fs, std::size_t count) {
    if (count != 0 && count < fs.frames.size()) fs.frames.erase(fs.frames.begin(), fs.frames.end() - static_cast<std::ptrdiff_t>(count));
    return fs;
}

/// Pure quaternion tensor H x W x F with R, G, B as the i, j, k parts.
inline QTensor encode(const FrameStack& fs) {
    if (fs.frames.empty() || fs.height == 0 || fs.width == 0) throw ShapeError("encode: empty frame stack");
    for (std::size_t f = 0; f < fs.frames.size(); ++f) {
        if (fs.frames[f].size() != fs.frame_bytes()) throw ShapeError("encode: frame " + std::to_string(f) + " has the wrong size");
    }
    QTensor q({fs.height, fs.width, fs.frame_count()});
    for (std::size_t f = 0; f < fs.frame_count(); ++f) {
        for (int c = 0; c < 3; ++c) {
            auto plane = q.slice_plane(f, c + 1);
            for (std::size_t r = 0; r < fs.height; ++r)
                for (std::size_t col = 0; col < fs.width; ++col)
                    plane(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = fs.at(f, r, col, c);
        }
    }
    return q;
}

/// Clamp to [0, 255], then round half up.
inline std::uint8_t quantize(double v) {
    if (!(v > 0.0)) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

/// Frames from the i, j, k parts of an order-3 tensor; the real part is dropped.
inline FrameStack decode(const QTensor& q) {
    if (q.order() != 3) throw ShapeError("decode: expected an order-3 tensor, got " + dims_string(q.dims()));
    FrameStack fs = make_frames(q.dim(0), q.dim(1), q.dim(2));
    for (std::size_t f = 0; f < fs.frame_count(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const auto plane = q.slice_plane(f, c + 1);
            for (std::size_t r = 0; r < fs.height; ++r)
                for (std::size_t col = 0; col < fs.width; ++col)
                    fs.at(f, r, col, c) = quantize(plane(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)));
        }
    }
    return fs;
}

struct PsnrReport {
    /// dB per frame; +infinity for identical frames.
    std::vector<double> per_frame;
    /// Arithmetic mean of per_frame (+infinity if any frame is identical).
    double average = 0.0;
};

/// Per-frame PSNR with MSE taken jointly over the three channels and MAX = 255.
inline PsnrReport psnr(const FrameStack& reference, const FrameStack& test) {
    if (reference.height != test.height || reference.width != test.width || reference.frame_count() != test.frame_count()) {
        throw ShapeError("psnr: frame stacks differ in size");
    }
    PsnrReport rep;
    double sum = 0.0;
    for (std::size_t f = 0; f < reference.frame_count(); ++f) {
        const auto& a = reference.frames[f];
        const auto& b = test.frames[f];
        if (a.size() != b.size()) throw ShapeError("psnr: frame " + std::to_string(f) + " differs in size");
        std::uint64_t sq = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
            sq += static_cast<std::uint64_t>(d * d);
        }
        double value = std::numeric_limits<double>::infinity();
        if (sq != 0) {
            const double mse = static_cast<double>(sq) / static_cast<double>(a.size());
            value = 10.0 * std::log10(255.0 * 255.0 / mse);
        }
        rep.per_frame.push_back(value);
        sum += value;
    }
    rep.average = rep.per_frame.empty() ? 0.0 : sum / static_cast<double>(rep.per_frame.size());
    return rep;
}

/// Formats a PSNR value, writing "inf" for identical frames.
inline std::string format_db(double v, int precision = 4) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

/// CSV with columns frame_index, psnr_db.
inline void write_psnr_csv(const std::filesystem::path& path, const PsnrReport& rep) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "frame_index,psnr_db\n";
    for (std::size_t f = 0; f < rep.per_frame.size(); ++f) os << f << ',' << format_db(rep.per_frame[f], 6) << '\n';
    if (!os) throw IoError("write failed: " + path.string());
}

/// Deterministic synthetic color clip: drifting colored blobs over a slowly
/// changing gradient, plus mild texture noise.
inline FrameStack synthetic_clip(std::size_t height, std::size_t width, std::size_t count, std::uint64_t seed = 1) {
    FrameStack fs = make_frames(height, width, count);
    std::mt19937_64 rng(seed);
    struct Blob {
        double cy, cx, vy, vx, radius;
        double rgb[3];
    };
    std::vector<Blob> blobs;
    for (int b = 0; b < 4; ++b) {
        auto uni = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        Blob blob{uni() * static_cast<double>(height), uni() * static_cast<double>(width), (uni() - 0.5) * 2.0, (uni() - 0.5) * 2.0,
                  0.15 * static_cast<double>(std::min(height, width)) * (1.0 + uni()), {255.0 * uni(), 255.0 * uni(), 255.0 * uni()}};
        blobs.push_back(blob);
    }
    std::vector<double> texture(height * width * 3);
    for (auto& t : texture) t = static_cast<double>(rng() % 17) - 8.0;

    for (std::size_t f = 0; f < count; ++f) {
        const double time = static_cast<double>(f);
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                const double y = static_cast<double>(r) / static_cast<double>(height);
                const double x = static_cast<double>(c) / static_cast<double>(width);
                double rgb[3] = {60.0 + 80.0 * x, 50.0 + 70.0 * y, 90.0 + 40.0 * std::sin(std::numbers::pi * (x + y + 0.05 * time))};
                for (const auto& b : blobs) {
                    const double dy = static_cast<double>(r) - (b.cy + b.vy * time);
                    const double dx = static_cast<double>(c) - (b.cx + b.vx * time);
                    const double weight = std::exp(-(dy * dy + dx * dx) / (2.0 * b.radius * b.radius));
                    for (int ch = 0; ch < 3; ++ch) rgb[ch] = (1.0 - weight) * rgb[ch] + weight * b.rgb[ch];
                }
                for (int ch = 0; ch < 3; ++ch) fs.at(f, r, c, ch) = quantize(rgb[ch] + texture[3 * (r * width + c) + static_cast<std::size_t>(ch)]);
            }
        }
    }
    return fs;
}

} // namespace qtsvd
