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

#include <Eigen/Eigenvalues>

#include <string>

#include "qvdp/core_hilbert.hpp"

namespace qvdp {

struct DensityCheck {
  double hermiticity = 0.0;   // max |rho - rho^dag|
  double trace_error = 0.0;   // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

struct DensityTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double negativity = 1e-8;
};

/// Hermitian, unit-trace, positive semidefinite matrix in the truncated Fock basis.
class DensityMatrix {
 public:
  /// Checks the physical-state invariants and throws ConfigError if any fails.
  static DensityMatrix validated(Matrix entries, DensityTolerance tol = {}) {
    if (entries.rows() != entries.cols()) throw DimensionMismatch("DensityMatrix: not square");
    const FockDim dim(static_cast<int>(entries.rows()));
    DensityMatrix rho(dim, std::move(entries));
    const DensityCheck c = rho.check();
    if (c.hermiticity > tol.hermiticity || c.trace_error > tol.trace ||
        c.min_eigenvalue < -tol.negativity) {
      throw ConfigError("DensityMatrix: invalid state (hermiticity " +
                        std::to_string(c.hermiticity) + ", trace error " +
                        std::to_string(c.trace_error) + ", min eigenvalue " +
                        std::to_string(c.min_eigenvalue) + ")");
    }
    return rho;
  }

  FockDim dim() const { return dim_; }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int m, int n) const { return m_(m, n); }
  double population(int n) const { return m_(n, n).real(); }
  double trace() const { return m_.trace().real(); }

  DensityCheck check() const {
    DensityCheck c;
    c.hermiticity = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(m_.trace() - Complex(1.0, 0.0));
    const Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
  }

 private:
  DensityMatrix(FockDim dim, Matrix m) : dim_(dim), m_(std::move(m)) {}

  friend DensityMatrix fock_state(FockDim, int);

  FockDim dim_;
  Matrix m_;
};

inline DensityMatrix fock_state(FockDim dim, int n) {
  if (n < 0 || n >= dim.value()) throw std::out_of_range("fock_state: level out of range");
  Matrix m = Matrix::Zero(dim.value(), dim.value());
  m(n, n) = 1.0;
  return DensityMatrix(dim, std::move(m));
}

}  // namespace qvdp
