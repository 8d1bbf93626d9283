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

// Color-video low-rank experiment: encode frames as a pure quaternion tensor,
// decompose once under a chosen transform, truncate at several ranks and
// score the decoded reconstructions by PSNR.

#include "qtsvd/error.hpp"
#include "qtsvd/media.hpp"
#include "qtsvd/png_io.hpp"
#include "qtsvd/tensor_io.hpp"
#include "qtsvd/tqt.hpp"
#include "qtsvd/transforms.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace qtsvd {

struct RunConfig {
    /// PNG frame directory, tensor fixture file, or "synthetic:HxWxF".
    std::string input;
    /// Keep the last `frames` frames; 0 keeps all.
    std::size_t frames = 0;
    TransformKind transform = TransformKind::qdct;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> ranks{5, 10, 20};
    /// Output directory; nothing is written when empty.
    std::filesystem::path out;
    bool write_frames = true;
    unsigned threads = 0;
    double rank_tolerance = 1e-10;
};

struct RankResult {
    std::size_t rank = 0;
    PsnrReport psnr;
    /// ||A - A_s||_F^2 before quantization.
    double squared_error = 0.0;
    /// sum_{k>s} sigma_k^2.
    double tail_energy = 0.0;
    bool optimal = false;
};

struct ExperimentReport {
    TransformKind transform = TransformKind::qdct;
    Dims dims;
    double squared_norm = 0.0;
    std::vector<double> sigma;
    std::size_t tqt_rank = 0;
    std::vector<RankResult> rows;
};

/// Loads the frames named by cfg.input (see RunConfig::input).
inline FrameStack load_input(const RunConfig& cfg) {
    const std::string prefix = "synthetic:";
    if (cfg.input.rfind(prefix, 0) == 0) {
        std::size_t h = 0, w = 0, f = 0;
        char tail = 0;
        if (std::sscanf(cfg.input.c_str() + prefix.size(), "%zux%zux%zu%c", &h, &w, &f, &tail) != 3 || h == 0 || w == 0 || f == 0) {
            throw ConfigError("bad synthetic input '" + cfg.input + "', expected synthetic:HxWxF");
        }
        return select_last(synthetic_clip(h, w, f, cfg.seed.value_or(1)), cfg.frames);
    }
    const std::filesystem::path path(cfg.input);
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) return load_frames(path, cfg.frames);
    if (std::filesystem::is_regular_file(path, ec)) {
        QTensor t = load_tensor(path);
        if (t.order() != 3) throw IoError("tensor input must have order 3, got " + dims_string(t.dims()));
        return select_last(decode(t), cfg.frames);
    }
    throw IoError("input not found: " + cfg.input);
}

inline void validate_config(const RunConfig& cfg, const FrameStack& frames) {
    const std::size_t kmax = std::min(frames.height, frames.width);
    if (cfg.ranks.empty()) throw ConfigError("rank list is empty");
    for (auto s : cfg.ranks)
        if (s < 1 || s > kmax) throw ConfigError("rank " + std::to_string(s) + " outside [1, " + std::to_string(kmax) + "]");
    if (cfg.transform == TransformKind::random && !cfg.seed) throw ConfigError("transform 'random' needs a seed");
}

namespace detail {

inline TransformSet build_transforms(const RunConfig& cfg, const QTensor& a) {
    return make_transforms(cfg.transform, a, cfg.seed.value_or(0));
}

inline std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

inline void write_summary(const std::filesystem::path& dir, const std::vector<ExperimentReport>& reports) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "summary.csv");
    std::ofstream md(dir / "summary.md");
    if (!csv || !md) throw IoError("cannot write summary in " + dir.string());
    csv << "transform,s,avg_psnr_db,squared_error,tail_energy,optimal\n";
    for (const auto& r : reports)
        for (const auto& row : r.rows)
            csv << to_string(r.transform) << ',' << row.rank << ',' << format_db(row.psnr.average, 6) << ',' << sci(row.squared_error) << ','
                << sci(row.tail_energy) << ',' << (row.optimal ? 1 : 0) << '\n';

    md << "| transform |";
    const auto& ranks = reports.front().rows;
    for (const auto& row : ranks) md << " s=" << row.rank << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < ranks.size(); ++i) md << "---|";
    md << '\n';
    for (const auto& r : reports) {
        md << "| " << to_string(r.transform) << " |";
        for (const auto& row : r.rows) md << ' ' << format_db(row.psnr.average, 3) << " |";
        md << '\n';
    }
    if (!csv || !md) throw IoError("write failed in " + dir.string());
}

} // namespace detail

/// Decomposes the encoded frames once and evaluates every rank in cfg.ranks.
/// Writes reconstructed frames and CSVs under cfg.out / <transform> when
/// cfg.out is set.
inline ExperimentReport run_experiment(const FrameStack& frames, const RunConfig& cfg) {
    validate_config(cfg, frames);
    const QTensor a = encode(frames);
    const TransformSet ts = detail::build_transforms(cfg, a);
    TqtOptions opts;
    opts.threads = cfg.threads;
    opts.rank_tolerance = cfg.rank_tolerance;
    opts.spatial_factors = false;
    const TqtSvd svd = tqt_svd(a, ts, opts);

    ExperimentReport rep;
    rep.transform = cfg.transform;
    rep.dims = a.dims();
    rep.squared_norm = a.frobenius_norm() * a.frobenius_norm();
    rep.sigma = svd.sigma;
    rep.tqt_rank = svd.rank;

    const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path{} : cfg.out / std::string(to_string(cfg.transform));
    for (auto s : cfg.ranks) {
        Truncation tr = truncate(svd, s);
        RankResult row;
        row.rank = s;
        const double err = (a - tr.approx).frobenius_norm();
        row.squared_error = err * err;
        row.tail_energy = tail_energy(svd, s);
        row.optimal = tr.optimal;
        const FrameStack recon = decode(tr.approx);
        row.psnr = psnr(frames, recon);
        if (!dir.empty()) {
            const auto sdir = dir / ("s=" + std::to_string(s));
            std::filesystem::create_directories(sdir);
            if (cfg.write_frames) save_frames(sdir, recon);
            write_psnr_csv(sdir / "psnr.csv", row.psnr);
        }
        rep.rows.push_back(std::move(row));
    }
    if (!dir.empty()) detail::write_summary(dir, {rep});
    return rep;
}

/// Runs every transform family in `kinds` and writes a combined summary
/// under cfg.out.
inline std::vector<ExperimentReport> run_table(const FrameStack& frames, RunConfig cfg, const std::vector<TransformKind>& kinds) {
    std::vector<ExperimentReport> out;
    for (auto k : kinds) {
        cfg.transform = k;
        out.push_back(run_experiment(frames, cfg));
    }
    if (!cfg.out.empty() && !out.empty()) detail::write_summary(cfg.out, out);
    return out;
}

struct Spectrum {
    std::vector<double> sigma;
    /// tail[k] = sum_{j > k} sigma_j^2 with 1-based k = 0..K.
    std::vector<double> tail;
    /// Hat-domain singular values per frontal slice.
    std::vector<std::vector<double>> slice_values;
};

/// Singular values of the encoded frames under cfg.transform. Writes
/// spectrum.csv (k, sigma, tail_sum, configured) and spectrum_slices.csv
/// (slice, k, value) into cfg.out when set.
inline Spectrum dump_spectrum(const FrameStack& frames, const RunConfig& cfg) {
    validate_config(cfg, frames);
    const QTensor a = encode(frames);
    const TransformSet ts = detail::build_transforms(cfg, a);
    TqtOptions opts;
    opts.threads = cfg.threads;
    opts.rank_tolerance = cfg.rank_tolerance;
    opts.spatial_factors = false;
    const TqtSvd svd = tqt_svd(a, ts, opts);

    Spectrum sp;
    sp.sigma = svd.sigma;
    for (std::size_t k = 0; k <= svd.k_max(); ++k) sp.tail.push_back(tail_energy(svd, k));
    sp.slice_values = svd.slice_values;

    if (!cfg.out.empty()) {
        std::filesystem::create_directories(cfg.out);
        std::ofstream os(cfg.out / "spectrum.csv");
        std::ofstream ss(cfg.out / "spectrum_slices.csv");
        if (!os || !ss) throw IoError("cannot write spectrum in " + cfg.out.string());
        os << "k,sigma,tail_sum,configured\n";
        for (std::size_t k = 0; k <= svd.k_max(); ++k) {
            const bool configured = std::find(cfg.ranks.begin(), cfg.ranks.end(), k) != cfg.ranks.end();
            os << k << ',' << (k == 0 ? std::string("") : detail::sci(sp.sigma[k - 1])) << ',' << detail::sci(sp.tail[k]) << ','
               << (configured ? 1 : 0) << '\n';
        }
        ss << "slice,k,value\n";
        for (std::size_t t = 0; t < sp.slice_values.size(); ++t)
            for (std::size_t k = 0; k < sp.slice_values[t].size(); ++k) ss << t << ',' << k + 1 << ',' << detail::sci(sp.slice_values[t][k]) << '\n';
        if (!os || !ss) throw IoError("write failed in " + cfg.out.string());
    }
    return sp;
}

} // namespace qtsvd
