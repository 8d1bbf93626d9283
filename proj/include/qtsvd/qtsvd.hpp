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

// Core library: quaternion matrices, quaternion tensors, transforms and the
// transform-based tensor SVD. Frame I/O lives in media.hpp / png_io.hpp and
// the experiment driver in experiment.hpp.

#include "qtsvd/error.hpp"
#include "qtsvd/qmatrix.hpp"
#include "qtsvd/qsvd.hpp"
#include "qtsvd/qtensor.hpp"
#include "qtsvd/quaternion.hpp"
#include "qtsvd/tensor_io.hpp"
#include "qtsvd/tqt.hpp"
#include "qtsvd/transforms.hpp"
