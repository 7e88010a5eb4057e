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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrc {

void ESNConfig::validate() const {
    if (n_nodes < 1) throw std::invalid_argument("ESN needs at least one node");
    if (!(spectral_radius >= 0.0)) throw std::invalid_argument("spectral radius must be nonnegative");
    if (!(input_scale >= 0.0)) throw std::invalid_argument("input scale must be nonnegative");
}

double spectral_radius(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

EchoStateNetwork::EchoStateNetwork(const ESNConfig& config) : config_(config) {
    config_.validate();
    const int n = config_.n_nodes;
    Rng rng(config_.weight_seed);
    // A draw with zero spectral radius cannot be rescaled; redraw (measure-zero event).
    for (;;) {
        weights_.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) weights_(i, j) = rng.uniform(-1.0, 1.0);
        const double radius = spectral_radius(weights_);
        if (radius > 1e-12) {
            weights_ *= config_.spectral_radius / radius;
            break;
        }
    }
    input_weights_.resize(n);
    for (int i = 0; i < n; ++i) input_weights_(i) = rng.uniform(-config_.input_scale, config_.input_scale);
}

Matrix EchoStateNetwork::run(std::span<const double> inputs, const std::optional<Vector>& initial) const {
    if (inputs.empty()) throw std::invalid_argument("ESN input sequence is empty");
    const Eigen::Index n = config_.n_nodes;
    Vector x = initial ? *initial : Vector::Zero(n);
    if (x.size() != n) throw std::invalid_argument("initial ESN state has wrong size");
    Matrix out(static_cast<Eigen::Index>(inputs.size()), n);
    Vector pre(n);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        pre.noalias() = weights_ * x;
        pre += input_weights_ * inputs[k];
        x = pre.array().tanh().matrix();
        out.row(static_cast<Eigen::Index>(k)) = x.transpose();
    }
    return out;
}

FeatureMatrix esn_run(const ESNConfig& config, std::span<const double> inputs) {
    if (inputs.empty()) throw std::invalid_argument("input sequence is empty");
    EchoStateNetwork net(config);
    FeatureMatrix out;
    out.values = net.run(inputs);
    for (int i = 1; i <= config.n_nodes; ++i) out.columns.push_back("esn_n" + std::to_string(i));
    return out;
}

}  // namespace qrc
