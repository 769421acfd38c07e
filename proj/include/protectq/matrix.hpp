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

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "protectq/errors.hpp"

namespace protectq {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using SparseCMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// Square matrices above this dimension are stored sparse.
inline constexpr Index kSparseStorageMinDim = 1025;

// Square complex matrix with dimension-selected storage. Operator assembly
// works in triplet form; materialization picks dense below
// kSparseStorageMinDim and compressed sparse at or above it.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  static ComplexMatrix fromDense(DenseMatrix m);
  static ComplexMatrix fromTriplets(Index dim, const std::vector<Triplet>& ts,
                                    bool forceSparse = false);
  static ComplexMatrix identity(Index dim);

  Index dim() const { return dim_; }
  bool isSparse() const { return sparse_; }

  const DenseMatrix& dense() const;
  const SparseCMatrix& sparse() const;
  DenseMatrix toDense() const;

  // y = M x
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

  cplx coeff(Index i, Index j) const;

  // max_ij |M - M^dagger|; cheap sanity check used by the unit tests and the
  // solver entry points.
  double hermiticityDefect() const;

  // <a|M|b>
  cplx expectation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;

  ComplexMatrix scaled(cplx factor) const;
  ComplexMatrix plus(const ComplexMatrix& other) const;

  Index nonZeros() const;

 private:
  Index dim_ = 0;
  bool sparse_ = false;
  DenseMatrix dense_;
  SparseCMatrix sparse_m_;
};

// Kronecker product, a-major ordering: index = i_a * dim(b) + i_b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DenseMatrix tensorDense(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace protectq
