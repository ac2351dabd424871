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

#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "qvdp/core_hilbert.hpp"
#include "qvdp/density_matrix.hpp"

namespace qvdp {
namespace {

TEST(FockDim, RejectsTooSmall) {
  EXPECT_THROW(FockDim(2), ConfigError);
  EXPECT_THROW(FockDim(-1), ConfigError);
  EXPECT_EQ(FockDim(3).value(), 3);
  EXPECT_EQ(FockDim(7).liouville_size(), 49);
}

TEST(Ladder, MatrixElements) {
  const FockDim d(6);
  const Matrix a = annihilation(d).matrix();
  for (int n = 0; n + 1 < 6; ++n) EXPECT_DOUBLE_EQ(a(n, n + 1).real(), std::sqrt(n + 1.0));
  EXPECT_EQ(a.diagonal().norm(), 0.0);
  EXPECT_TRUE(creation(d).matrix().isApprox(a.adjoint()));
}

TEST(Ladder, CommutatorIsIdentityExceptTruncatedCorner) {
  const FockDim d(8);
  const Matrix c = commutator(annihilation(d), creation(d)).matrix();
  for (int n = 0; n < 7; ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 1e-14);
  EXPECT_NEAR(c(7, 7).real(), -7.0, 1e-14);
}

TEST(Ladder, NumberOperatorExactDiagonal) {
  const FockDim d(10);
  const Matrix n = number_operator(d).matrix();
  const Matrix ada = (creation(d) * annihilation(d)).matrix();
  for (int k = 0; k < 10; ++k) EXPECT_EQ(n(k, k).real(), static_cast<double>(k));
  // a^dag a agrees except at the truncation edge.
  EXPECT_LT((n - ada).topLeftCorner(9, 9).norm(), 1e-13);
  EXPECT_TRUE(is_hermitian(number_operator(d)));
}

TEST(Operator, LinearCombinationAndProduct) {
  const FockDim d(5);
  const std::array<Operator, 2> ops = {annihilation(d), creation(d)};
  const std::array<Complex, 2> c = {Complex(2.0), Complex(0.0, 1.0)};
  const Operator lc = linear_combination(ops, c);
  EXPECT_TRUE(lc.matrix().isApprox(2.0 * ops[0].matrix() + kI * ops[1].matrix()));
  const Operator pr = product(ops);
  EXPECT_TRUE(pr.matrix().isApprox(ops[0].matrix() * ops[1].matrix()));
}

TEST(Operator, DimensionMismatchThrows) {
  const std::array<Operator, 2> ops = {annihilation(FockDim(4)), annihilation(FockDim(5))};
  const std::array<Complex, 2> c = {Complex(1.0), Complex(1.0)};
  EXPECT_THROW(linear_combination(ops, c), DimensionMismatch);
  EXPECT_THROW(product(ops), DimensionMismatch);
  EXPECT_THROW(ops[0] + ops[1], DimensionMismatch);
  const std::array<Complex, 1> short_c = {Complex(1.0)};
  EXPECT_THROW(linear_combination(ops, short_c), DimensionMismatch);
}

TEST(Operator, Hermiticity) {
  const FockDim d(5);
  EXPECT_TRUE(is_hermitian(annihilation(d) + creation(d)));
  EXPECT_FALSE(is_hermitian(annihilation(d)));
  EXPECT_GT(hermiticity_error(annihilation(d)), 1.0);
}

TEST(DensityMatrix, FockStateValid) {
  const DensityMatrix rho = fock_state(FockDim(4), 2);
  EXPECT_EQ(rho.population(2), 1.0);
  EXPECT_EQ(rho.trace(), 1.0);
  const DensityCheck c = rho.check();
  EXPECT_EQ(c.hermiticity, 0.0);
  EXPECT_NEAR(c.min_eigenvalue, 0.0, 1e-14);
}

TEST(DensityMatrix, RejectsInvalid) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 0.5;
  EXPECT_THROW(DensityMatrix::validated(m), ConfigError);  // trace
  m(1, 1) = 0.5;
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix::validated(m), ConfigError);  // not Hermitian
  m(1, 0) = 0.3;
  EXPECT_NO_THROW(DensityMatrix::validated(m));
  m(0, 1) = m(1, 0) = 0.8;
  EXPECT_THROW(DensityMatrix::validated(m), ConfigError);  // negative eigenvalue
  EXPECT_THROW(DensityMatrix::validated(Matrix::Identity(2, 3)), DimensionMismatch);
}

}  // namespace
}  // namespace qvdp
