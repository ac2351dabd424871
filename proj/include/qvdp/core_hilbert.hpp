// Copyright 2026 The qvdp Authors
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

#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "qvdp/error.hpp"

namespace qvdp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Number of retained Fock levels |0>..|dim-1>.
class FockDim {
 public:
  static constexpr int kMin = 3;

  explicit FockDim(int dim) : dim_(dim) {
    if (dim < kMin) {
      throw ConfigError("FockDim: need at least " + std::to_string(kMin) + " levels, got " +
                        std::to_string(dim));
    }
  }

  int value() const { return dim_; }
  int liouville_size() const { return dim_ * dim_; }

  friend bool operator==(FockDim, FockDim) = default;
  friend auto operator<=>(FockDim, FockDim) = default;

 private:
  int dim_;
};

/// Dense single-mode operator on a truncated Fock space. Immutable once built.
class Operator {
 public:
  Operator(FockDim dim, Matrix entries) : dim_(dim), m_(std::move(entries)) {
    if (m_.rows() != dim.value() || m_.cols() != dim.value()) {
      throw DimensionMismatch("Operator: matrix is " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()) + ", expected " +
                              std::to_string(dim.value()));
    }
  }

  FockDim dim() const { return dim_; }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Operator adjoint() const { return {dim_, m_.adjoint()}; }

 private:
  FockDim dim_;
  Matrix m_;
};

namespace detail {
inline void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": operands have dims " +
                            std::to_string(a.dim().value()) + " and " +
                            std::to_string(b.dim().value()));
  }
}
}  // namespace detail

inline Operator identity(FockDim dim) {
  return {dim, Matrix::Identity(dim.value(), dim.value())};
}

/// Ladder operator with a[n, n+1] = sqrt(n+1).
inline Operator annihilation(FockDim dim) {
  const int d = dim.value();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return {dim, std::move(a)};
}

inline Operator creation(FockDim dim) { return annihilation(dim).adjoint(); }

/// a^dag a, built directly as diag(0..dim-1) so the entries are exact integers.
inline Operator number_operator(FockDim dim) {
  const int d = dim.value();
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return {dim, std::move(n)};
}

/// sum_i scalars[i] * ops[i]
inline Operator linear_combination(std::span<const Operator> ops, std::span<const Complex> scalars) {
  if (ops.empty()) throw ConfigError("linear_combination: no operands");
  if (ops.size() != scalars.size()) {
    throw DimensionMismatch("linear_combination: " + std::to_string(ops.size()) +
                            " operators but " + std::to_string(scalars.size()) + " scalars");
  }
  Matrix acc = Matrix::Zero(ops[0].dim().value(), ops[0].dim().value());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    detail::require_same_dim(ops[0], ops[i], "linear_combination");
    acc += scalars[i] * ops[i].matrix();
  }
  return {ops[0].dim(), std::move(acc)};
}

/// ops[0] * ops[1] * ... in the order given.
inline Operator product(std::span<const Operator> ops) {
  if (ops.empty()) throw ConfigError("product: no operands");
  Matrix acc = ops[0].matrix();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    detail::require_same_dim(ops[0], ops[i], "product");
    acc = acc * ops[i].matrix();
  }
  return {ops[0].dim(), std::move(acc)};
}

inline Operator operator+(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "operator+");
  return {a.dim(), a.matrix() + b.matrix()};
}

inline Operator operator-(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "operator-");
  return {a.dim(), a.matrix() - b.matrix()};
}

inline Operator operator*(const Operator& a, const Operator& b) {
  detail::require_same_dim(a, b, "operator*");
  return {a.dim(), a.matrix() * b.matrix()};
}

inline Operator operator*(Complex s, const Operator& a) { return {a.dim(), s * a.matrix()}; }

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Largest entrywise deviation |A - A^dag|.
inline double hermiticity_error(const Operator& op) {
  return (op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Operator& op, double tol = 1e-12) {
  return hermiticity_error(op) <= tol;
}

}  // namespace qvdp
