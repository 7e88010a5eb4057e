// Copyright 2026 The qrcsim Authors
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

#include "qrc/readout.hpp"

#include "qrc/random.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <vector>

namespace qrc {
namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

Vector random_vector(Eigen::Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

TEST(Fit, ExactInterpolation) {
    const Matrix x = random_matrix(50, 4, 1);
    const Vector y = 0.3 + (x * vec({1.0, -2.0, 0.5, 3.0})).array();
    const auto w = fit(x, y);
    EXPECT_LE(residual_sum_squares(w, x, y), 1e-9);
    EXPECT_NEAR(w.bias, 0.3, 1e-10);
}

TEST(Fit, DuplicatedOnesColumn) {
    const Matrix x = Matrix::Ones(30, 2);
    const Vector y = Vector::Constant(30, 2.5);
    const auto w = fit(x, y);
    const Vector p = predict(w, x);
    EXPECT_LT((p.array() - 2.5).abs().maxCoeff(), 1e-10);
}

TEST(Fit, MatchesNormalEquationOracle) {
    const Matrix x = random_matrix(200, 10, 2);
    const Vector y = random_vector(200, 3);
    Matrix xb(200, 11);
    xb << Matrix::Ones(200, 1), x;
    const Vector w_oracle = (xb.transpose() * xb).llt().solve(xb.transpose() * y);
    const double rss_oracle = (xb * w_oracle - y).squaredNorm();
    const auto w = fit(x, y);
    EXPECT_NEAR(residual_sum_squares(w, x, y), rss_oracle, 1e-8);
    EXPECT_NEAR(w.bias, w_oracle(0), 1e-8);
    EXPECT_LT((w.weights - w_oracle.tail(10)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Fit, RidgeMatchesPenalizedOracle) {
    const Matrix x = random_matrix(80, 5, 4);
    const Vector y = random_vector(80, 5);
    const double ridge = 0.7;
    Matrix xb(80, 6);
    xb << Matrix::Ones(80, 1), x;
    Matrix g = xb.transpose() * xb;
    g.diagonal().tail(5).array() += ridge;
    const Vector w_oracle = g.llt().solve(xb.transpose() * y);
    const auto w = fit(x, y, ridge);
    EXPECT_NEAR(w.bias, w_oracle(0), 1e-10);
    EXPECT_LT((w.weights - w_oracle.tail(5)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fit, Errors) {
    EXPECT_THROW(fit(Matrix(0, 2), Vector(0)), std::invalid_argument);
    EXPECT_THROW(fit(Matrix::Ones(3, 2), Vector::Ones(4)), std::invalid_argument);
    Matrix bad = Matrix::Ones(3, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(fit(bad, Vector::Ones(3)), std::invalid_argument);
    Vector bad_y = Vector::Ones(3);
    bad_y(0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(fit(Matrix::Ones(3, 2), bad_y), std::invalid_argument);
    EXPECT_THROW(fit(Matrix::Ones(3, 2), Vector::Ones(3), -1.0), std::invalid_argument);
}

TEST(Fit, ColumnScalingInvariance) {
    Matrix x = random_matrix(100, 6, 6);
    const Vector y = random_vector(100, 7);
    const Vector p = predict(fit(x, y), x);
    x.col(2) *= 37.0;
    x.col(4) *= 1e-3;
    EXPECT_LT((predict(fit(x, y), x) - p).cwiseAbs().maxCoeff(), 1e-9);
    // Uniform 2^N scaling of every column.
    x *= 1.0 / 32.0;
    EXPECT_LT((predict(fit(x, y), x) - p).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Fit, AugmentationNeverIncreasesResidual) {
    const Matrix x = random_matrix(60, 12, 8);
    const Vector y = random_vector(60, 9);
    double previous = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 1; k <= 12; ++k) {
        const Matrix xk = x.leftCols(k);
        const double rss = residual_sum_squares(fit(xk, y), xk, y);
        EXPECT_LE(rss, previous + 1e-12);
        previous = rss;
    }
}

TEST(Fit, DuplicatedBlockKeepsResidual) {
    const Matrix x = random_matrix(100, 8, 10);
    const Vector y = random_vector(100, 11);
    Matrix xx(100, 16);
    xx << x, x;
    const double a = residual_sum_squares(fit(x, y), x, y);
    const double b = residual_sum_squares(fit(xx, y), xx, y);
    EXPECT_LT(std::abs(a - b), 1e-9);
    EXPECT_EQ(LinearReadout(xx).rank(), 9);
}

TEST(LinearReadout, SharedFactorizationMatchesFit) {
    const Matrix x = random_matrix(70, 5, 12);
    const LinearReadout r(x);
    for (std::uint64_t s = 0; s < 3; ++s) {
        const Vector y = random_vector(70, 20 + s);
        const auto a = r.solve(y), b = fit(x, y);
        EXPECT_DOUBLE_EQ(a.bias, b.bias);
        EXPECT_EQ(a.weights, b.weights);
    }
}

TEST(Predict, Basics) {
    ReadoutWeights w;
    w.bias = 1.5;
    w.weights = Vector::Zero(3);
    EXPECT_EQ(predict(w, Matrix::Ones(4, 3)), Vector::Constant(4, 1.5));
    w.bias = 0.0;
    w.weights = vec({1.0});
    const Matrix col = random_matrix(5, 1, 13);
    EXPECT_EQ(predict(w, col), col.col(0));
    EXPECT_THROW(predict(w, Matrix::Ones(4, 2)), std::invalid_argument);
}

TEST(ReadoutWeights, JsonRoundTrip) {
    const auto w = fit(random_matrix(20, 3, 14), random_vector(20, 15));
    const auto back = ReadoutWeights::from_json(w.to_json());
    EXPECT_EQ(back.bias, w.bias);
    EXPECT_EQ(back.weights, w.weights);
}

TEST(Nmse, Examples) {
    const Vector t = random_vector(10, 16);
    EXPECT_EQ(nmse(t, t), 0.0);
    EXPECT_DOUBLE_EQ(nmse(Vector::Zero(10), t), 1.0);
    EXPECT_DOUBLE_EQ(nmse(vec({0.0, 2.0}), vec({1.0, 1.0})), 1.0);
    EXPECT_THROW(nmse(Vector::Ones(3), Vector::Zero(3)), std::invalid_argument);
    EXPECT_THROW(nmse(Vector::Ones(3), Vector::Ones(2)), std::invalid_argument);
}

TEST(MemoryFunction, Examples) {
    const Vector t = random_vector(50, 17);
    EXPECT_NEAR(memory_function(t, t), 1.0, 1e-14);
    EXPECT_NEAR(memory_function(-t, t), 1.0, 1e-14);
    EXPECT_EQ(memory_function(Vector::Constant(50, 0.3), t), 0.0);
    EXPECT_THROW(memory_function(vec({1.0}), vec({1.0})), std::invalid_argument);
    // Squared Pearson correlation oracle.
    const Vector p = t + 0.5 * random_vector(50, 18);
    const Vector pc = p.array() - p.mean(), tc = t.array() - t.mean();
    const double r = pc.dot(tc) / (pc.norm() * tc.norm());
    EXPECT_NEAR(memory_function(p, t), r * r, 1e-14);
}

TEST(MemoryFunction, AlwaysInUnitInterval) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const double mf = memory_function(random_vector(5, s), random_vector(5, s + 1000));
        EXPECT_GE(mf, 0.0);
        EXPECT_LE(mf, 1.0);
    }
}

TEST(MemoryCapacity, Examples) {
    std::vector<double> mf(memory_delays, 0.0);
    EXPECT_EQ(memory_capacity(mf), 0.0);
    mf[0] = 1.0;
    EXPECT_EQ(memory_capacity(mf), 1.0);
    std::fill(mf.begin(), mf.end(), 1.0);
    EXPECT_EQ(memory_capacity(mf), 151.0);
    mf[3] = 1.2;
    EXPECT_THROW(memory_capacity(mf), std::invalid_argument);
    mf.pop_back();
    EXPECT_THROW(memory_capacity(mf), std::invalid_argument);
}

}  // namespace
}  // namespace qrc
