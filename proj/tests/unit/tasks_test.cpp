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

#include "qrc/tasks.hpp"

#include "qrc/random.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <numeric>

namespace qrc {
namespace {

// Direct transcription of the recurrences with explicit sums.
std::vector<double> narma_oracle(int order, const std::vector<double>& u) {
    const std::size_t n = u.size();
    std::vector<double> y(n, 0.0);
    auto yy = [&](long k) { return k >= 0 ? y[static_cast<std::size_t>(k)] : 0.0; };
    auto s = [&](long k) { return k >= 0 ? 0.2 * u[static_cast<std::size_t>(k)] : 0.0; };
    for (long k = 0; k < static_cast<long>(n); ++k) {
        if (order == 2) {
            y[static_cast<std::size_t>(k)] = 0.4 * yy(k - 1) + 0.4 * yy(k - 1) * yy(k - 2) + 0.6 * std::pow(s(k), 3) + 0.1;
        } else {
            double sum = 0.0;
            for (long j = 0; j < order; ++j) sum += yy(k - 1 - j);
            y[static_cast<std::size_t>(k)] = 0.3 * yy(k - 1) + 0.05 * yy(k - 1) * sum + 1.5 * s(k - order + 1) * s(k) + 0.1;
        }
    }
    return y;
}

EnsembleConfig nested(int order, int n, double tau, int v, std::uint64_t seed) {
    EnsembleConfig e;
    for (int c = 0; c < order; ++c) {
        QRSystemConfig s;
        s.n_qubits = n;
        s.tau = tau;
        s.virtual_nodes = v;
        s.coupling_seed = derive_seed(seed, {static_cast<std::uint64_t>(c)});
        e.systems.push_back(s);
    }
    return e;
}

TEST(GenerateInput, RangeDeterminismMean) {
    const auto a = generate_input(100000, 5);
    EXPECT_EQ(a, generate_input(100000, 5));
    EXPECT_NE(a, generate_input(100000, 6));
    for (double x : a) {
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / 1e5;
    EXPECT_GE(mean, 0.49);
    EXPECT_LE(mean, 0.51);
    EXPECT_THROW(generate_input(0, 1), std::invalid_argument);
}

TEST(Narma, SecondOrderFirstSteps) {
    const std::vector<double> zeros(3, 0.0);
    const Vector y = narma_targets(NarmaSpec::of_order(2), zeros);
    EXPECT_DOUBLE_EQ(y(0), 0.1);
    EXPECT_DOUBLE_EQ(y(1), 0.14);
}

TEST(Narma, SecondOrderFixedPoint) {
    const std::vector<double> zeros(500, 0.0);
    const Vector y = narma_targets(NarmaSpec::of_order(2), zeros);
    EXPECT_NEAR(y(499), (0.6 - std::sqrt(0.2)) / 0.8, 1e-10);
}

TEST(Narma, MatchesDirectRecurrence) {
    const auto u = generate_input(3000, 9);
    for (int order : narma_orders) {
        const Vector y = narma_targets(NarmaSpec::of_order(order), u);
        const auto oracle = narma_oracle(order, u);
        for (std::size_t k = 0; k < u.size(); ++k) ASSERT_NEAR(y(static_cast<Eigen::Index>(k)), oracle[k], 1e-12) << order;
    }
}

TEST(Narma, TenthOrderBounded) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Vector y = narma_targets(NarmaSpec::of_order(10), generate_input(6000, seed));
        EXPECT_TRUE(y.allFinite());
        EXPECT_LT(y.cwiseAbs().maxCoeff(), 1.0);
    }
}

TEST(Narma, DivergenceAndErrors) {
    NarmaSpec unstable = NarmaSpec::of_order(10);
    unstable.beta = 2.0;
    EXPECT_THROW(narma_targets(unstable, generate_input(2000, 1)), divergence_error);
    EXPECT_THROW(NarmaSpec::of_order(3), std::invalid_argument);
    EXPECT_THROW(narma_targets(NarmaSpec::of_order(5), std::vector<double>{0.5, 1.5}), std::domain_error);
}

TEST(DelayTargets, ShiftAndMask) {
    const auto u = generate_input(10, 2);
    const Vector d0 = delay_targets(u, 0);
    const Vector d1 = delay_targets(u, 1);
    for (int k = 0; k < 10; ++k) EXPECT_EQ(d0(k), u[static_cast<std::size_t>(k)]);
    EXPECT_TRUE(std::isnan(d1(0)));
    for (int k = 1; k < 10; ++k) EXPECT_EQ(d1(k), u[static_cast<std::size_t>(k - 1)]);
    EXPECT_THROW(delay_targets(u, 151), std::invalid_argument);
    EXPECT_THROW(delay_targets(u, -1), std::invalid_argument);
}

TEST(EvaluateFeatures, PerfectMemory) {
    const PhaseProtocol p;
    const auto u = generate_input(p.total(), 3);
    Matrix x = Matrix::Zero(p.total(), memory_delays);
    for (int k = 0; k < p.total(); ++k)
        for (int d = 0; d <= std::min(k, memory_delays - 1); ++d) x(k, d) = u[static_cast<std::size_t>(k - d)];
    const auto r = evaluate_features(x, u, TaskKind::memory_capacity, p);
    EXPECT_GT(r.memory_capacity, 150.5);
    EXPECT_LE(r.memory_capacity, 151.0);
}

TEST(EvaluateFeatures, MemorylessFeatures) {
    const PhaseProtocol p;
    const auto u = generate_input(p.total(), 4);
    Matrix x(p.total(), 3);
    for (int k = 0; k < p.total(); ++k) {
        const double v = u[static_cast<std::size_t>(k)];
        x.row(k) << v, v * v, std::sin(3.0 * v);
    }
    const auto r = evaluate_features(x, u, TaskKind::memory_capacity, p);
    EXPECT_NEAR(r.memory_function[0], 1.0, 1e-9);
    for (int d = 1; d < memory_delays; ++d) EXPECT_LT(r.memory_function[static_cast<std::size_t>(d)], 0.05) << d;
}

TEST(EvaluateFeatures, ShortWashoutFitsOnlyValidRows) {
    const PhaseProtocol p{10, 400, 200};
    const auto u = generate_input(p.total(), 12);
    Matrix x = Matrix::Zero(p.total(), 20);
    for (int k = 0; k < p.total(); ++k)
        for (int d = 0; d < 20 && d <= k; ++d) x(k, d) = u[static_cast<std::size_t>(k - d)];
    const auto r = evaluate_features(x, u, TaskKind::memory_capacity, p);
    for (int d = 0; d < 20; ++d) EXPECT_NEAR(r.memory_function[static_cast<std::size_t>(d)], 1.0, 1e-9) << d;
    EXPECT_THROW(evaluate_features(x, u, TaskKind::memory_capacity, PhaseProtocol{0, 100, 500}), std::invalid_argument);
}

TEST(EvaluateFeatures, MultitaskMatchesSeparateFits) {
    const PhaseProtocol p{300, 500, 300};
    const auto u = generate_input(p.total(), 5);
    const auto fm = run_ensemble(nested(2, 3, 1.0, 2, 5), u);
    const auto r = evaluate_features(fm.values, u, TaskKind::narma_suite, p);
    for (int order : narma_orders) {
        const Vector y = narma_targets(NarmaSpec::of_order(order), u);
        const Matrix train = fm.values.middleRows(p.train_begin(), p.train);
        const auto w = fit(train, y.segment(p.train_begin(), p.train));
        const double e = nmse(predict(w, fm.values.middleRows(p.eval_begin(), p.eval)), y.segment(p.eval_begin(), p.eval));
        EXPECT_DOUBLE_EQ(r.nmse.at(order), e);
        EXPECT_GE(r.nmse.at(order), 0.0);
    }
}

TEST(EvaluateFeatures, WarnsOnSmallTrainingWindow) {
    const PhaseProtocol p{0, 5, 5};
    const auto u = generate_input(p.total(), 6);
    const auto r = evaluate_features(Matrix::Random(p.total(), 6), u, TaskKind::narma_suite, p);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_THROW(evaluate_features(Matrix::Random(5, 2), u, TaskKind::narma_suite, p), std::invalid_argument);
}

TEST(RunTrial, TrainingResidualNonIncreasingInOrder) {
    const PhaseProtocol p{300, 400, 300};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        std::map<int, double> prev_narma;
        std::vector<double> prev_delay(memory_delays, INFINITY);
        for (int order = 1; order <= 4; ++order) {
            const auto e = nested(order, 3, 1.0, 3, seed);
            const auto narma = run_trial(e, TaskKind::narma_suite, p, 100 + seed);
            const auto mc = run_trial(e, TaskKind::memory_capacity, p, 100 + seed);
            for (const auto& [n, rss] : narma.narma_train_rss) {
                if (prev_narma.count(n)) EXPECT_LE(rss, prev_narma[n] + 1e-8);
                prev_narma[n] = rss;
            }
            for (int d = 0; d < memory_delays; ++d) {
                EXPECT_LE(mc.delay_train_rss[static_cast<std::size_t>(d)], prev_delay[static_cast<std::size_t>(d)] + 1e-8);
                prev_delay[static_cast<std::size_t>(d)] = mc.delay_train_rss[static_cast<std::size_t>(d)];
            }
        }
    }
}

TEST(RunTrial, WashoutInsensitivity) {
    // Both runs score the same train and eval inputs; the longer run sees 2000 extra washout steps first.
    const auto e = nested(1, 5, 1.0, 5, 77);
    const auto base = generate_input(6000, 8);
    auto longer = generate_input(2000, 9);
    longer.insert(longer.end(), base.begin(), base.end());
    const Matrix fa = run_ensemble(e, base).values;
    const Matrix fb = run_ensemble(e, longer).values;
    const auto a = evaluate_features(fa, base, TaskKind::memory_capacity, PhaseProtocol{2000, 2000, 2000});
    const auto b = evaluate_features(fb, longer, TaskKind::memory_capacity, PhaseProtocol{4000, 2000, 2000});
    EXPECT_LT(std::abs(a.memory_capacity - b.memory_capacity) / a.memory_capacity, 0.01);
}

TEST(RunTrial, NarmaDifficultyOrdering) {
    int ordered = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = run_trial(nested(1, 5, 2.0, 25, 300 + seed), TaskKind::narma_suite, PhaseProtocol{}, 400 + seed);
        if (r.nmse.at(2) < r.nmse.at(20)) ++ordered;
    }
    EXPECT_GE(ordered, 4);
}

TEST(RunTrial, MetadataAndSerialization) {
    const PhaseProtocol p{200, 300, 200};
    const auto e = nested(2, 2, 1.0, 1, 3);
    const auto r = run_trial(e, TaskKind::memory_capacity, p, 42);
    EXPECT_EQ(r.input_seed, 42u);
    EXPECT_EQ(r.coupling_seeds.size(), 2u);
    EXPECT_EQ(r.ensemble_digest, ensemble_digest(e));
    EXPECT_EQ(r.ensemble_digest.size(), 16u);
    EXPECT_EQ(r.total_nodes, 4);
    EXPECT_GE(r.memory_capacity, 0.0);
    EXPECT_LE(r.memory_capacity, 151.0);
    const auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j.at("task"), "mc");
    EXPECT_EQ(j.at("memory_function").size(), 151u);
    const auto m = r.metrics();
    EXPECT_EQ(m.size(), 303u);
    EXPECT_EQ(m.back().first, "mc");
    EXPECT_EQ(m.front().first, "mf_d0");

    auto other = e;
    other.systems[1].coupling_seed += 1;
    EXPECT_NE(ensemble_digest(other), r.ensemble_digest);
}

TEST(ImprovementRatio, Examples) {
    EXPECT_EQ(improvement_ratio(3.0, 3.0, MetricKind::mc), 1.0);
    EXPECT_EQ(improvement_ratio(10.0, 20.0, MetricKind::mc), 2.0);
    EXPECT_NEAR(improvement_ratio(0.1, 0.015, MetricKind::nmse), 0.15, 1e-15);
    EXPECT_THROW(improvement_ratio(0.0, 1.0, MetricKind::nmse), std::invalid_argument);
}

TEST(TaskKind, Parsing) {
    EXPECT_EQ(parse_task_kind("narma"), TaskKind::narma_suite);
    EXPECT_EQ(parse_task_kind("mc"), TaskKind::memory_capacity);
    EXPECT_THROW(parse_task_kind("chaos"), std::invalid_argument);
}

}  // namespace
}  // namespace qrc
