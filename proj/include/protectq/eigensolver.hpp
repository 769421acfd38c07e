// Copyright 2026 The protectq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "protectq/matrix.hpp"

namespace protectq {

// Above this dimension the iterative sparse path is used.
inline constexpr Index kDenseSolveMaxDim = 2000;

struct EigsOptions {
  int k = 5;
  double tol = 1e-10;   // residual tolerance relative to the spectral scale
  int maxIter = 320;    // Krylov dimension cap for the sparse path
  // Use the shift-invert path below kDenseSolveMaxDim too; pays off for
  // banded multi-mode problems where a full dense solve is overkill.
  bool preferSparse = false;
};

struct EigsResult {
  Eigen::VectorXd values;   // ascending, size k
  Eigen::MatrixXcd vectors; // dim x k, orthonormal, gauge-fixed
  double maxResidual = 0.0; // ||H x - lambda x|| bound achieved (sparse path)
  int iterations = 0;
};

// Lowest-k eigenpairs of a Hermitian matrix. Dense full diagonalization up
// to kDenseSolveMaxDim, shift-invert Lanczos above. Deterministic: identical
// input yields bitwise-identical output.
EigsResult eigsLowest(const ComplexMatrix& h, const EigsOptions& opt = {});

EigsResult eigsLowestDense(const DenseMatrix& h, int k);
EigsResult eigsLowestSparse(const SparseCMatrix& h, const EigsOptions& opt);

// Phase convention: the largest-magnitude component of each column is made
// real and positive (first index wins ties).
void gaugeFix(Eigen::MatrixXcd& states);

}  // namespace protectq
