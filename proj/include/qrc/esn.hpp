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

#include "qrc/reservoir.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace qrc {

struct ESNConfig {
    int n_nodes = 100;
    double spectral_radius = 0.9;
    double input_scale = 0.01;  ///< sigma: input weights ~ U[-sigma, sigma]
    std::uint64_t weight_seed = 0;

    void validate() const;
};

/// Classical tanh echo state network, x_k = tanh(W x_{k-1} + w_in u_k).
class EchoStateNetwork {
public:
    explicit EchoStateNetwork(const ESNConfig& config);

    const ESNConfig& config() const { return config_; }
    const Matrix& weights() const { return weights_; }
    const Vector& input_weights() const { return input_weights_; }

    /// One row per input. The state starts at `initial` (zero when absent).
    Matrix run(std::span<const double> inputs, const std::optional<Vector>& initial = {}) const;

private:
    ESNConfig config_;
    Matrix weights_;
    Vector input_weights_;
};

/// Largest |eigenvalue| of a square real matrix.
double spectral_radius(const Matrix& m);

/// Runs a freshly drawn network from the zero state; columns are esn_n{i}, 1-based.
FeatureMatrix esn_run(const ESNConfig& config, std::span<const double> inputs);

}  // namespace qrc
