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

#pragma once

#include "qrc/readout.hpp"
#include "qrc/reservoir.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qrc {

/// Raised when a target recurrence leaves the stable range.
class divergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NARMA orders evaluated together in the multitask suite.
inline constexpr std::array<int, 5> narma_orders{2, 5, 10, 15, 20};

/// Input range [0, 1] is mapped to [0, input_scale] before entering the recurrence.
struct NarmaSpec {
    int order = 10;
    double alpha = 0.3;
    double beta = 0.05;
    double gamma = 1.5;
    double delta = 0.1;
    double input_scale = 0.2;
    double divergence_bound = 1e3;

    static NarmaSpec of_order(int order);
};

/// Washout / train / evaluation split, in input steps.
struct PhaseProtocol {
    int washout = 2000;
    int train = 2000;
    int eval = 2000;

    int total() const { return washout + train + eval; }
    int train_begin() const { return washout; }
    int eval_begin() const { return washout + train; }
    void validate() const;
};

enum class TaskKind { narma_suite, memory_capacity };

TaskKind parse_task_kind(std::string_view name);
std::string_view task_kind_name(TaskKind kind);

struct TaskResult {
    TaskKind kind = TaskKind::narma_suite;
    /// Evaluation-window NMSE keyed by NARMA order.
    std::map<int, double> nmse;
    /// Training-window residual sum of squares keyed by NARMA order.
    std::map<int, double> narma_train_rss;
    /// MF_d for d = 0..150 (memory task only).
    std::vector<double> memory_function;
    std::vector<double> delay_train_rss;
    double memory_capacity = 0.0;

    // Metadata.
    std::string ensemble_digest;
    std::vector<std::uint64_t> coupling_seeds;
    std::uint64_t input_seed = 0;
    PhaseProtocol protocol;
    int total_nodes = 0;
    std::vector<std::string> warnings;

    std::string to_json() const;
    /// Flat (metric, value) pairs in a fixed order: nmse_narma{n}, train_rss_narma{n},
    /// mf_d{d}, train_rss_d{d}, mc.
    std::vector<std::pair<std::string, double>> metrics() const;
};

/// I.i.d. uniform [0, 1) draws.
std::vector<double> generate_input(int length, std::uint64_t seed);

/// y_k is the target for feature row k (the row harvested after injecting u_k).
/// Pre-history values are zero. Throws divergence_error past the bound.
Vector narma_targets(const NarmaSpec& spec, std::span<const double> inputs);

/// targets[k] = inputs[k - d]; rows k < d are NaN and must be excluded.
Vector delay_targets(std::span<const double> inputs, int delay);

/// Fits every readout of `kind` on the training window and scores the
/// evaluation window. `features` row k must pair with inputs[k].
TaskResult evaluate_features(const Matrix& features, std::span<const double> inputs, TaskKind kind,
                             const PhaseProtocol& protocol, double ridge = 0.0);

/// Same as evaluate_features for several task kinds sharing one factorization.
std::vector<TaskResult> evaluate_tasks(const Matrix& features, std::span<const double> inputs,
                                       std::span<const TaskKind> kinds, const PhaseProtocol& protocol,
                                       double ridge = 0.0);

/// Generates the input from `input_seed`, runs the ensemble and evaluates it.
TaskResult run_trial(const EnsembleConfig& ensemble, TaskKind kind, const PhaseProtocol& protocol,
                     std::uint64_t input_seed, int workers = 1, double ridge = 0.0);

/// Stable hex digest of an ensemble's configuration.
std::string ensemble_digest(const EnsembleConfig& ensemble);

enum class MetricKind { mc, nmse };

/// value / baseline. For mc a ratio above 1 is an improvement; for nmse, below 1.
double improvement_ratio(double baseline, double value, MetricKind kind);

}  // namespace qrc
