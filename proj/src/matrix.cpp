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

#include "protectq/matrix.hpp"

#include <cmath>

namespace protectq {

ComplexMatrix ComplexMatrix::fromDense(DenseMatrix m) {
  if (m.rows() != m.cols())
    throw InvalidArgumentError("ComplexMatrix: matrix must be square");
  ComplexMatrix out;
  out.dim_ = m.rows();
  out.sparse_ = false;
  out.dense_ = std::move(m);
  return out;
}

ComplexMatrix ComplexMatrix::fromTriplets(Index dim,
                                          const std::vector<Triplet>& ts,
                                          bool forceSparse) {
  if (dim <= 0) throw InvalidArgumentError("ComplexMatrix: dimension must be positive");
  ComplexMatrix out;
  out.dim_ = dim;
  if (forceSparse || dim >= kSparseStorageMinDim) {
    out.sparse_ = true;
    out.sparse_m_.resize(dim, dim);
    out.sparse_m_.setFromTriplets(ts.begin(), ts.end());
    out.sparse_m_.makeCompressed();
  } else {
    out.sparse_ = false;
    out.dense_ = DenseMatrix::Zero(dim, dim);
    for (const auto& t : ts) out.dense_(t.row(), t.col()) += t.value();
  }
  return out;
}

ComplexMatrix ComplexMatrix::identity(Index dim) {
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) ts.emplace_back(i, i, cplx(1.0, 0.0));
  return fromTriplets(dim, ts);
}

const DenseMatrix& ComplexMatrix::dense() const {
  if (sparse_) throw BasisMismatchError("ComplexMatrix: stored sparse, dense view requested");
  return dense_;
}

const SparseCMatrix& ComplexMatrix::sparse() const {
  if (!sparse_) throw BasisMismatchError("ComplexMatrix: stored dense, sparse view requested");
  return sparse_m_;
}

DenseMatrix ComplexMatrix::toDense() const {
  if (!sparse_) return dense_;
  return DenseMatrix(sparse_m_);
}

Eigen::VectorXcd ComplexMatrix::apply(const Eigen::VectorXcd& x) const {
  if (x.size() != dim_)
    throw BasisMismatchError("ComplexMatrix::apply: vector length does not match dimension");
  if (sparse_) return sparse_m_ * x;
  return dense_ * x;
}

cplx ComplexMatrix::coeff(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
    throw InvalidArgumentError("ComplexMatrix::coeff: index out of range");
  if (sparse_) return sparse_m_.coeff(i, j);
  return dense_(i, j);
}

double ComplexMatrix::hermiticityDefect() const {
  if (sparse_) {
    SparseCMatrix d = SparseCMatrix(sparse_m_.adjoint()) - sparse_m_;
    double maxAbs = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
      for (SparseCMatrix::InnerIterator it(d, k); it; ++it)
        maxAbs = std::max(maxAbs, std::abs(it.value()));
    return maxAbs;
  }
  return (dense_ - dense_.adjoint()).cwiseAbs().maxCoeff();
}

cplx ComplexMatrix::expectation(const Eigen::VectorXcd& a,
                                const Eigen::VectorXcd& b) const {
  if (a.size() != dim_ || b.size() != dim_)
    throw BasisMismatchError("ComplexMatrix::expectation: vector length mismatch");
  return a.dot(apply(b));
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
  ComplexMatrix out = *this;
  if (sparse_)
    out.sparse_m_ = sparse_m_ * factor;
  else
    out.dense_ = dense_ * factor;
  return out;
}

ComplexMatrix ComplexMatrix::plus(const ComplexMatrix& other) const {
  if (other.dim_ != dim_)
    throw BasisMismatchError("ComplexMatrix::plus: dimension mismatch");
  ComplexMatrix out = *this;
  if (sparse_ != other.sparse_) {
    DenseMatrix sum = toDense() + other.toDense();
    return fromDense(std::move(sum));
  }
  if (sparse_)
    out.sparse_m_ = sparse_m_ + other.sparse_m_;
  else
    out.dense_ = dense_ + other.dense_;
  return out;
}

Index ComplexMatrix::nonZeros() const {
  if (sparse_) return sparse_m_.nonZeros();
  return dim_ * dim_;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index da = a.dim(), db = b.dim();
  if (da == 0 || db == 0)
    throw InvalidArgumentError("tensor: empty operand");
  std::vector<Triplet> ts;
  auto forEachNonZero = [](const ComplexMatrix& m, auto&& fn) {
    if (m.isSparse()) {
      const auto& s = m.sparse();
      for (int k = 0; k < s.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(s, k); it; ++it)
          fn(it.row(), it.col(), it.value());
    } else {
      const auto& d = m.dense();
      for (Index j = 0; j < d.cols(); ++j)
        for (Index i = 0; i < d.rows(); ++i)
          if (d(i, j) != cplx(0.0, 0.0)) fn(i, j, d(i, j));
    }
  };
  ts.reserve(static_cast<size_t>(a.nonZeros()) * static_cast<size_t>(b.nonZeros()) /
             4 + 16);
  forEachNonZero(a, [&](Index ia, Index ja, cplx va) {
    forEachNonZero(b, [&](Index ib, Index jb, cplx vb) {
      ts.emplace_back(ia * db + ib, ja * db + jb, va * vb);
    });
  });
  return ComplexMatrix::fromTriplets(da * db, ts);
}

DenseMatrix tensorDense(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace protectq
