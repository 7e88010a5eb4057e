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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace qrc {

NarmaSpec NarmaSpec::of_order(int order) {
    if (std::find(narma_orders.begin(), narma_orders.end(), order) == narma_orders.end()) {
        throw std::invalid_argument("NARMA order must be one of 2, 5, 10, 15, 20");
    }
    NarmaSpec spec;
    spec.order = order;
    return spec;
}

void PhaseProtocol::validate() const {
    if (washout < 0 || train < 1 || eval < 2) {
        throw std::invalid_argument("protocol needs washout >= 0, train >= 1, eval >= 2");
    }
}

TaskKind parse_task_kind(std::string_view name) {
    if (name == "narma" || name == "narma_suite") return TaskKind::narma_suite;
    if (name == "mc" || name == "memory_capacity") return TaskKind::memory_capacity;
    throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

std::string_view task_kind_name(TaskKind kind) {
    return kind == TaskKind::narma_suite ? "narma" : "mc";
}

std::vector<double> generate_input(int length, std::uint64_t seed) {
    if (length <= 0) throw std::invalid_argument("input length must be positive");
    Rng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(length));
    for (double& x : u) x = rng.uniform();
    return u;
}

Vector narma_targets(const NarmaSpec& spec, std::span<const double> inputs) {
    if (spec.order < 2) throw std::invalid_argument("NARMA order must be >= 2");
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Vector s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double u = inputs[static_cast<std::size_t>(k)];
        if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("NARMA inputs must lie in [0, 1]");
        s(k) = spec.input_scale * u;
    }
    Vector y = Vector::Zero(n);
    auto y_at = [&](Eigen::Index k) { return k >= 0 ? y(k) : 0.0; };
    auto s_at = [&](Eigen::Index k) { return k >= 0 ? s(k) : 0.0; };
    const Eigen::Index order = spec.order;
    double window = 0.0;  // sum_{j=0}^{n-1} y_{k-1-j}
    for (Eigen::Index k = 0; k < n; ++k) {
        double next;
        if (order == 2) {
            next = 0.4 * y_at(k - 1) + 0.4 * y_at(k - 1) * y_at(k - 2) + 0.6 * s(k) * s(k) * s(k) + 0.1;
        } else {
            next = spec.alpha * y_at(k - 1) + spec.beta * y_at(k - 1) * window +
                   spec.gamma * s_at(k - order + 1) * s(k) + spec.delta;
        }
        if (!std::isfinite(next) || std::abs(next) > spec.divergence_bound) {
            throw divergence_error("NARMA" + std::to_string(spec.order) + " diverged at step " +
                                   std::to_string(k));
        }
        y(k) = next;
        window += next - y_at(k - order);
    }
    return y;
}

Vector delay_targets(std::span<const double> inputs, int delay) {
    if (delay < 0 || delay >= memory_delays) throw std::invalid_argument("delay must lie in [0, 150]");
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Vector t(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        t(k) = k >= delay ? inputs[static_cast<std::size_t>(k - delay)]
                          : std::numeric_limits<double>::quiet_NaN();
    }
    return t;
}

namespace {

void evaluate_one(TaskResult& result, const Matrix& features, std::span<const double> inputs,
                  const PhaseProtocol& protocol, const LinearReadout& readout, double ridge) {
    const auto train_x = features.middleRows(protocol.train_begin(), protocol.train);
    const auto eval_x = features.middleRows(protocol.eval_begin(), protocol.eval);

    if (result.kind == TaskKind::narma_suite) {
        for (int order : narma_orders) {
            const Vector y = narma_targets(NarmaSpec::of_order(order), inputs);
            const Vector train_y = y.segment(protocol.train_begin(), protocol.train);
            const ReadoutWeights w = readout.solve(train_y);
            result.narma_train_rss[order] = residual_sum_squares(w, train_x, train_y);
            result.nmse[order] = nmse(predict(w, eval_x), y.segment(protocol.eval_begin(), protocol.eval));
        }
        return;
    }

    result.memory_function.resize(memory_delays);
    result.delay_train_rss.resize(memory_delays);
    for (int d = 0; d < memory_delays; ++d) {
        const Vector y = delay_targets(inputs, d);
        // Rows k < d have no target; only a washout shorter than d needs its own fit.
        const int begin = std::max(protocol.train_begin(), d);
        const int count = protocol.train_begin() + protocol.train - begin;
        if (count < 1 || protocol.eval_begin() < d) throw std::invalid_argument("washout too short for delay");
        std::optional<LinearReadout> local;
        if (begin != protocol.train_begin()) local.emplace(features.middleRows(begin, count), ridge);
        const LinearReadout& r = local ? *local : readout;
        const auto x = features.middleRows(begin, count);
        const Vector train_y = y.segment(begin, count);
        const ReadoutWeights w = r.solve(train_y);
        result.delay_train_rss[static_cast<std::size_t>(d)] = residual_sum_squares(w, x, train_y);
        result.memory_function[static_cast<std::size_t>(d)] =
            memory_function(predict(w, eval_x), y.segment(protocol.eval_begin(), protocol.eval));
    }
    result.memory_capacity = memory_capacity(result.memory_function);
}

}  // namespace

std::vector<TaskResult> evaluate_tasks(const Matrix& features, std::span<const double> inputs,
                                       std::span<const TaskKind> kinds, const PhaseProtocol& protocol,
                                       double ridge) {
    protocol.validate();
    if (static_cast<Eigen::Index>(inputs.size()) != features.rows()) {
        throw std::invalid_argument("feature rows differ from input length");
    }
    if (features.rows() < protocol.total()) throw std::invalid_argument("run shorter than the protocol");

    const LinearReadout readout(features.middleRows(protocol.train_begin(), protocol.train), ridge);
    std::vector<TaskResult> out;
    for (TaskKind kind : kinds) {
        TaskResult result;
        result.kind = kind;
        result.protocol = protocol;
        result.total_nodes = static_cast<int>(features.cols());
        if (protocol.train < features.cols() + 1) {
            result.warnings.push_back("training window (" + std::to_string(protocol.train) +
                                      " rows) does not exceed node count + 1 (" +
                                      std::to_string(features.cols() + 1) + ")");
        }
        evaluate_one(result, features, inputs, protocol, readout, ridge);
        out.push_back(std::move(result));
    }
    return out;
}

TaskResult evaluate_features(const Matrix& features, std::span<const double> inputs, TaskKind kind,
                             const PhaseProtocol& protocol, double ridge) {
    const TaskKind kinds[] = {kind};
    return std::move(evaluate_tasks(features, inputs, kinds, protocol, ridge).front());
}

std::string ensemble_digest(const EnsembleConfig& ensemble) {
    std::uint64_t h = mix64(ensemble.systems.size());
    for (const auto& s : ensemble.systems) {
        h = derive_seed(h, {static_cast<std::uint64_t>(s.n_qubits), double_bits(s.tau),
                            static_cast<std::uint64_t>(s.virtual_nodes), double_bits(s.coupling_scale),
                            double_bits(s.field), s.coupling_seed,
                            static_cast<std::uint64_t>(s.input_qubit)});
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TaskResult run_trial(const EnsembleConfig& ensemble, TaskKind kind, const PhaseProtocol& protocol,
                     std::uint64_t input_seed, int workers, double ridge) {
    protocol.validate();
    const std::vector<double> inputs = generate_input(protocol.total(), input_seed);
    const FeatureMatrix features = run_ensemble(ensemble, inputs, InitialStatePolicy::mixed(), workers);
    TaskResult result = evaluate_features(features.values, inputs, kind, protocol, ridge);
    result.ensemble_digest = ensemble_digest(ensemble);
    result.input_seed = input_seed;
    for (const auto& s : ensemble.systems) result.coupling_seeds.push_back(s.coupling_seed);
    return result;
}

std::vector<std::pair<std::string, double>> TaskResult::metrics() const {
    std::vector<std::pair<std::string, double>> out;
    if (kind == TaskKind::narma_suite) {
        for (const auto& [order, v] : nmse) out.emplace_back("nmse_narma" + std::to_string(order), v);
        for (const auto& [order, v] : narma_train_rss)
            out.emplace_back("train_rss_narma" + std::to_string(order), v);
    } else {
        for (std::size_t d = 0; d < memory_function.size(); ++d)
            out.emplace_back("mf_d" + std::to_string(d), memory_function[d]);
        for (std::size_t d = 0; d < delay_train_rss.size(); ++d)
            out.emplace_back("train_rss_d" + std::to_string(d), delay_train_rss[d]);
        out.emplace_back("mc", memory_capacity);
    }
    return out;
}

std::string TaskResult::to_json() const {
    nlohmann::ordered_json j;
    j["task"] = task_kind_name(kind);
    if (kind == TaskKind::narma_suite) {
        for (const auto& [order, v] : nmse) j["nmse"]["narma" + std::to_string(order)] = v;
        for (const auto& [order, v] : narma_train_rss) j["train_rss"]["narma" + std::to_string(order)] = v;
    } else {
        j["memory_function"] = memory_function;
        j["train_rss"] = delay_train_rss;
        j["memory_capacity"] = memory_capacity;
    }
    j["ensemble_digest"] = ensemble_digest;
    j["coupling_seeds"] = coupling_seeds;
    j["input_seed"] = input_seed;
    j["protocol"] = {{"washout", protocol.washout}, {"train", protocol.train}, {"eval", protocol.eval}};
    j["total_nodes"] = total_nodes;
    j["warnings"] = warnings;
    return j.dump();
}

double improvement_ratio(double baseline, double value, MetricKind) {
    if (!(baseline > 0.0)) throw std::invalid_argument("improvement ratio needs a positive baseline");
    return value / baseline;
}

}  // namespace qrc
