// Copyright 2026 The qgd Authors
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

#include <numbers>
#include <random>

#include "support.hpp"

namespace qgd {
namespace {

using testing::kron_embed;
using testing::max_diff;
using testing::random_unitary;
using testing::rotation_2x2;
using testing::to_dense;

TEST(ComplexMatrixTest, ProductMatchesSchoolbook) {
  std::mt19937_64 rng(1);
  for (std::size_t d : {1u, 2u, 4u, 8u}) {
    const ComplexMatrix a = random_unitary(d, rng), b = random_unitary(d, rng);
    EXPECT_LT(max_diff(testing::dense_mul(to_dense(a), to_dense(b)), a * b), 1e-13);
  }
}

TEST(ComplexMatrixTest, DaggerTraceAndUnitarity) {
  std::mt19937_64 rng(2);
  const ComplexMatrix u = random_unitary(8, rng);
  EXPECT_TRUE(u.is_unitary(1e-12));
  EXPECT_LT(max_abs_diff(u * u.dagger(), ComplexMatrix::identity(8)), 1e-12);
  EXPECT_LT(std::abs(ComplexMatrix::identity(8).trace() - cplx(8.0)), 1e-15);
  EXPECT_LT(std::abs(trace(u.dagger()) - std::conj(u.trace())), 1e-13);

  ComplexMatrix m(2, {1.0, 1.0, 0.0, 1.0});
  EXPECT_FALSE(m.is_unitary());
}

TEST(ComplexMatrixTest, DimensionMismatchThrows) {
  const auto a = ComplexMatrix::identity(2), b = ComplexMatrix::identity(4);
  EXPECT_THROW(a * b, std::invalid_argument);
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(max_abs_diff(a, b), std::invalid_argument);
  EXPECT_THROW(ComplexMatrix(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(qubit_count(3), std::invalid_argument);
}

TEST(RotationTest, MatchesClosedForm) {
  for (double t : {0.0, 0.3, -1.7, std::numbers::pi, 5.0}) {
    for (auto axis : {RotationAxis::X, RotationAxis::Z}) {
      const auto r = rotation_gate(axis, t);
      EXPECT_LT(max_diff(rotation_2x2(axis, t), r), 1e-15);
      EXPECT_TRUE(r.is_unitary());
    }
  }
  // A^2 = I gives R(2 pi) = -I.
  EXPECT_LT(max_abs_diff(rotation_gate(RotationAxis::X, 2 * std::numbers::pi), cplx(-1.0) * ComplexMatrix::identity(2)),
            1e-15);
  EXPECT_THROW(rotation_gate(RotationAxis::Z, std::nan("")), std::invalid_argument);
  EXPECT_THROW(rotation_gate(RotationAxis::Z, INFINITY), std::invalid_argument);
  EXPECT_EQ(parse_axis("X"), RotationAxis::X);
  EXPECT_THROW(parse_axis("y"), std::invalid_argument);
}

TEST(EmbedTest, SingleQubitMatchesKronecker) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    for (int q = 0; q < n; ++q) {
      const ComplexMatrix g = random_unitary(2, rng);
      const int t[] = {q};
      EXPECT_LT(max_diff(kron_embed(to_dense(g), q, n), embed(g, t, n)), 1e-14) << "n=" << n << " q=" << q;
    }
  }
}

TEST(EmbedTest, TwoQubitOrderMatters) {
  // CNOT with control listed first: |10> -> |11> for targets {0, 1}.
  ComplexMatrix cnot(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
  const auto m01 = embed(cnot, {0, 1}, 2);
  const auto m10 = embed(cnot, {1, 0}, 2);
  EXPECT_EQ(m01(3, 2), cplx(1.0));
  EXPECT_EQ(m10(3, 1), cplx(1.0));
  // Three qubits, gate on (2, 0): permutation of a Kronecker construction.
  const auto m = embed(cnot, {2, 0}, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    const int b0 = i >> 2 & 1, b1 = i >> 1 & 1, b2 = i & 1;
    const std::size_t j = (static_cast<std::size_t>(b2 ? !b0 : b0) << 2) | (b1 << 1) | b2;
    EXPECT_EQ(m(j, i), cplx(1.0)) << i;
  }
  EXPECT_THROW(embed(cnot, {0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(embed(cnot, {0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(embed(cnot, {0}, 2), std::invalid_argument);
}

TEST(LocalKernelTest, ApplyLeftRightMatchEmbeddedProducts) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    const ComplexMatrix m = random_unitary(std::size_t{1} << n, rng);
    for (int q = 0; q < n; ++q) {
      const ComplexMatrix g = random_unitary(2, rng);
      const Gate2 g2{g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
      const auto full = kron_embed(to_dense(g), q, n);
      ComplexMatrix l = m, r = m;
      apply_left(l, n, q, g2);
      apply_right(r, n, q, g2);
      EXPECT_LT(max_diff(testing::dense_mul(full, to_dense(m)), l), 1e-13);
      EXPECT_LT(max_diff(testing::dense_mul(to_dense(m), full), r), 1e-13);
    }
  }
}

TEST(LocalKernelTest, QubitBlockGivesTraceOfEmbeddedProduct) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 4; ++n) {
    const ComplexMatrix m = random_unitary(std::size_t{1} << n, rng);
    for (int q = 0; q < n; ++q) {
      const Gate2 g = rotation_entries(RotationAxis::X, 0.77);
      const cplx brute = testing::dense_trace(testing::dense_mul(kron_embed(rotation_2x2(RotationAxis::X, 0.77), q, n),
                                                                 to_dense(m)));
      EXPECT_LT(std::abs(trace_with_block(g, qubit_block(m, n, q)) - brute), 1e-13);
    }
  }
}

TEST(NamedGateTest, ControlledZFamily) {
  const auto cz = named_gate("cz"), ccz = named_gate("CCZ"), cccz = named_gate("cccz");
  EXPECT_EQ(cz.dim(), 4u);
  EXPECT_EQ(ccz.dim(), 8u);
  EXPECT_EQ(cccz.dim(), 16u);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(cccz(i, i), cplx(i == 15 ? -1.0 : 1.0));
  EXPECT_EQ(named_gate("i", 8), ComplexMatrix::identity(8));
  EXPECT_THROW(named_gate("toffoli"), std::invalid_argument);
  // CZ is the Kronecker-built oracle.
  EXPECT_EQ(max_diff(testing::cz_dense(0, 1, 2), cz), 0.0);
}

TEST(MatrixJsonTest, RoundTripIsExact) {
  std::mt19937_64 rng(6);
  const ComplexMatrix u = random_unitary(4, rng);
  const nlohmann::json j = u;
  const auto back = nlohmann::json::parse(j.dump()).get<ComplexMatrix>();
  EXPECT_EQ(back, u);
  EXPECT_THROW((nlohmann::json{{"dim", 2}, {"entries", {{1, 0}, {0, 0}, {0, 0}}}}.get<ComplexMatrix>()),
               std::invalid_argument);
}

}  // namespace
}  // namespace qgd
