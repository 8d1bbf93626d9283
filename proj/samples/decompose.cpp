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

// Decomposes a random order-4 quaternion tensor under the quaternion DFT and
// prints the tube singular values together with the truncation errors.

#include "qtsvd/qtsvd.hpp"

#include <cstdio>
#include <random>

int main() {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    qtsvd::QTensor a({6, 5, 4, 3});
    for (double& v : a.raw()) v = normal(rng);

    const auto ts = qtsvd::make_transforms(qtsvd::TransformKind::qdft, a);
    const auto svd = qtsvd::tqt_svd(a, ts);
    std::printf("TQt-rank %zu\n", svd.rank);
    for (std::size_t s = 1; s <= svd.k_max(); ++s) {
        const auto tr = qtsvd::truncate(svd, s);
        const double err = (a - tr.approx).frobenius_norm();
        std::printf("s=%zu sigma=%.6f  ||A-A_s||^2=%.6f  tail=%.6f\n", s, svd.sigma[s - 1], err * err, qtsvd::tail_energy(svd, s));
    }
}
