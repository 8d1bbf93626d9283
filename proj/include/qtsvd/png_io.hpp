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

// PNG frame directories. Requires libpng.

#include "qtsvd/error.hpp"
#include "qtsvd/media.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace qtsvd {

struct RgbImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> rgb;  // row-major, interleaved R, G, B
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] inline void png_error_handler(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text) *text = msg;
    png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

} // namespace detail

/// Reads any PNG and converts it to 8-bit RGB (alpha dropped, gray expanded).
inline RgbImage read_png(const std::filesystem::path& path) {
    detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) throw IoError("cannot open " + path.string());
    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, detail::png_error_handler, detail::png_warning_handler);
    if (!png) throw IoError("libpng: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    RgbImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("cannot decode " + path.string() + ": " + message);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    const auto color = png_get_color_type(png, info);
    const auto depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    if (png_get_rowbytes(png, info) != 3 * img.width) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG layout in " + path.string());
    }
    img.rgb.resize(3 * img.width * img.height);
    rows.resize(img.height);
    for (std::size_t r = 0; r < img.height; ++r) rows[r] = img.rgb.data() + 3 * img.width * r;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline void write_png(const std::filesystem::path& path, const RgbImage& img) {
    detail::FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, detail::png_error_handler, detail::png_warning_handler);
    if (!png) throw IoError("libpng: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("cannot encode " + path.string() + ": " + message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < img.height; ++r) rows[r] = const_cast<png_bytep>(img.rgb.data() + 3 * img.width * r);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// PNG files directly inside `dir`, in lexicographic order of file name.
inline std::vector<std::filesystem::path> list_png_frames(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    return out;
}

/// Loads the PNG frames of `dir`; keeps only the last `last` frames when last > 0.
inline FrameStack load_frames(const std::filesystem::path& dir, std::size_t last = 0) {
    auto files = list_png_frames(dir);
    if (files.empty()) throw IoError("no PNG frames in " + dir.string());
    if (last != 0 && last < files.size()) files.erase(files.begin(), files.end() - static_cast<std::ptrdiff_t>(last));
    FrameStack fs;
    for (const auto& f : files) {
        RgbImage img = read_png(f);
        if (fs.frames.empty()) {
            fs.height = img.height;
            fs.width = img.width;
        } else if (img.height != fs.height || img.width != fs.width) {
            throw ShapeError("frame " + f.filename().string() + " is " + std::to_string(img.width) + "x" + std::to_string(img.height) + ", expected " +
                             std::to_string(fs.width) + "x" + std::to_string(fs.height));
        }
        fs.frames.push_back(std::move(img.rgb));
    }
    return fs;
}

/// Writes frame_0000.png, frame_0001.png, ... into `dir` (created if needed).
inline void save_frames(const std::filesystem::path& dir, const FrameStack& fs) {
    std::filesystem::create_directories(dir);
    for (std::size_t f = 0; f < fs.frame_count(); ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.png", f);
        write_png(dir / name, RgbImage{fs.height, fs.width, fs.frames[f]});
    }
}

} // namespace qtsvd
