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

// qtsvd: color-video low-rank approximation with the transform-based
// quaternion tensor SVD.
//
//   qtsvd run      --input DIR --frames 32 --transform qdct --ranks 5,10,20 --out DIR
//   qtsvd spectrum --input DIR --transform data-driven --ranks 5,10,20 --out DIR
//   qtsvd table    --input DIR --ranks 5,10,20 --seed 7 --out DIR
//   qtsvd synth    --shape 32x32x8 --out DIR
//
// Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 numerical failure.

#include "qtsvd/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

void print_report(const qtsvd::ExperimentReport& rep) {
    std::cout << "transform " << qtsvd::to_string(rep.transform) << ", tensor " << qtsvd::dims_string(rep.dims) << ", TQt-rank " << rep.tqt_rank
              << '\n';
    std::cout << "  s   avg PSNR (dB)   squared error      tail energy\n";
    for (const auto& row : rep.rows) {
        std::printf("%3zu %15s %15.6e %16.6e%s\n", row.rank, qtsvd::format_db(row.psnr.average, 3).c_str(), row.squared_error, row.tail_energy,
                    row.optimal ? "" : "  (transform not scaled-orthogonal: not guaranteed optimal)");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transform-based quaternion tensor SVD for color video"};
    app.set_config("--config", "", "flat key=value file; command-line options override it");
    app.require_subcommand(1);

    qtsvd::RunConfig cfg;
    std::string transform = "qdct";
    std::uint64_t seed = 0;
    bool no_frames = false;

    app.add_option("--input", cfg.input, "PNG frame directory, tensor fixture, or synthetic:HxWxF");
    app.add_option("--frames", cfg.frames, "use the last N frames (0 = all)");
    app.add_option("--transform", transform, "identity | random | qdft | qdct | data-driven");
    app.add_option("--ranks", cfg.ranks, "comma-separated target ranks")->delimiter(',');
    auto* seed_opt = app.add_option("--seed", seed, "seed for the random transform and synthetic input");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--threads", cfg.threads, "worker threads for per-slice SVDs (0 = all cores)");
    app.add_option("--rank-tol", cfg.rank_tolerance, "relative tolerance for counting nonzero tubes");
    app.add_flag("--no-frames", no_frames, "do not write reconstructed PNG frames");

    auto* run = app.add_subcommand("run", "truncate at every rank and report PSNR")->fallthrough();
    auto* spectrum = app.add_subcommand("spectrum", "write singular values and tail sums")->fallthrough();
    auto* table = app.add_subcommand("table", "run random, qdft, qdct and data-driven transforms")->fallthrough();
    auto* synth = app.add_subcommand("synth", "write a synthetic color clip as PNG frames")->fallthrough();
    std::string shape = "32x32x8";
    std::string tensor_out;
    synth->add_option("--shape", shape, "HxWxF");
    synth->add_option("--tensor", tensor_out, "also write the encoded tensor fixture to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (seed_opt->count() > 0) cfg.seed = seed;
        cfg.write_frames = !no_frames;
        auto kind = qtsvd::parse_transform_kind(transform);
        if (!kind) throw qtsvd::ConfigError("unknown transform '" + transform + "'");
        cfg.transform = *kind;

        if (synth->parsed()) {
            if (cfg.out.empty()) throw qtsvd::ConfigError("synth needs --out");
            qtsvd::RunConfig sc;
            sc.input = "synthetic:" + shape;
            sc.seed = cfg.seed;
            const auto frames = qtsvd::load_input(sc);
            qtsvd::save_frames(cfg.out, frames);
            if (!tensor_out.empty()) qtsvd::save_tensor(tensor_out, qtsvd::encode(frames));
            std::cout << "wrote " << frames.frame_count() << " frames of " << frames.width << "x" << frames.height << " to " << cfg.out.string()
                      << '\n';
            return kExitOk;
        }

        if (cfg.input.empty()) throw qtsvd::ConfigError("--input is required");
        const auto frames = qtsvd::load_input(cfg);

        if (run->parsed()) {
            print_report(qtsvd::run_experiment(frames, cfg));
        } else if (table->parsed()) {
            if (!cfg.seed) cfg.seed = 0;
            const auto reports = qtsvd::run_table(
                frames, cfg, {qtsvd::TransformKind::random, qtsvd::TransformKind::qdft, qtsvd::TransformKind::qdct, qtsvd::TransformKind::data_driven});
            for (const auto& r : reports) print_report(r);
        } else if (spectrum->parsed()) {
            const auto sp = qtsvd::dump_spectrum(frames, cfg);
            std::cout << "k,sigma,tail_sum\n";
            for (std::size_t k = 1; k <= sp.sigma.size(); ++k) std::printf("%zu,%.10e,%.10e\n", k, sp.sigma[k - 1], sp.tail[k]);
        }
    } catch (const qtsvd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qtsvd::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const qtsvd::ShapeError& e) {
        // shapes come from the input files at this level
        std::cerr << "input error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const qtsvd::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
