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

#include "qrc/esn.hpp"

#include "qrc/random.hpp"
#include "qrc/tasks.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qrc {
namespace {

TEST(EchoStateNetwork, WeightRanges) {
    const EchoStateNetwork esn({50, 0.9, 0.01, 3});
    Eigen::EigenSolver<Matrix> es(esn.weights(), false);
    EXPECT_NEAR(es.eigenvalues().cwiseAbs().maxCoeff(), 0.9, 1e-10);
    EXPECT_LE(esn.input_weights().cwiseAbs().maxCoeff(), 0.01);
    EXPECT_NEAR(spectral_radius(esn.weights()), 0.9, 1e-10);
}

TEST(EchoStateNetwork, ZeroInputStaysAtZero) {
    const EchoStateNetwork esn({20, 0.9, 0.5, 1});
    const std::vector<double> zeros(100, 0.0);
    EXPECT_EQ(esn.run(zeros).cwiseAbs().maxCoeff(), 0.0);
}

TEST(EchoStateNetwork, MatchesTanhRecurrence) {
    const EchoStateNetwork esn({8, 1.1, 0.3, 2});
    const auto u = generate_input(30, 4);
    const Matrix x = esn.run(u);
    Vector state = Vector::Zero(8);
    for (std::size_t k = 0; k < u.size(); ++k) {
        state = (esn.weights() * state + esn.input_weights() * u[k]).array().tanh();
        EXPECT_LT((x.row(static_cast<Eigen::Index>(k)).transpose() - state).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(EchoStateNetwork, StatesInOpenUnitInterval) {
    const EchoStateNetwork esn({30, 1.5, 1.0, 5});
    const Matrix x = esn.run(generate_input(500, 6));
    EXPECT_LT(x.cwiseAbs().maxCoeff(), 1.0);
}

TEST(EchoStateNetwork, EchoStateProperty) {
    const EchoStateNetwork esn({100, 0.9, 0.01, 7});
    const auto u = generate_input(2000, 8);
    Rng rng(9);
    Vector start(100);
    for (Eigen::Index i = 0; i < 100; ++i) start(i) = rng.uniform(-1.0, 1.0);
    const Matrix a = esn.run(u);
    const Matrix b = esn.run(u, start);
    EXPECT_LT((a.bottomRows(1) - b.bottomRows(1)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(EchoStateNetwork, Validation) {
    EXPECT_THROW(EchoStateNetwork({0, 0.9, 0.01, 0}), std::invalid_argument);
    EXPECT_THROW(EchoStateNetwork({5, -0.1, 0.01, 0}), std::invalid_argument);
    const EchoStateNetwork esn({5, 0.9, 0.01, 0});
    EXPECT_THROW(esn.run(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(esn.run(std::vector<double>{0.1}, Vector::Zero(4)), std::invalid_argument);
}

TEST(EsnRun, ColumnsAndDeterminism) {
    const auto u = generate_input(50, 1);
    const auto a = esn_run({4, 0.9, 0.1, 11}, u);
    EXPECT_EQ(a.columns.front(), "esn_n1");
    EXPECT_EQ(a.columns.back(), "esn_n4");
    EXPECT_EQ(a.values, esn_run({4, 0.9, 0.1, 11}, u).values);
    EXPECT_NE(a.values, esn_run({4, 0.9, 0.1, 12}, u).values);
}

}  // namespace
}  // namespace qrc
