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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrc {

namespace {

Matrix with_bias(const Matrix& features) {
    Matrix x(features.rows(), features.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(features.cols()) = features;
    return x;
}

void check_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + " contain non-finite entries");
}

}  // namespace

std::string ReadoutWeights::to_json() const {
    nlohmann::json j;
    j["bias"] = bias;
    j["weights"] = std::vector<double>(weights.data(), weights.data() + weights.size());
    return j.dump();
}

ReadoutWeights ReadoutWeights::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto w = j.at("weights").get<std::vector<double>>();
    ReadoutWeights out;
    out.bias = j.at("bias").get<double>();
    out.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    return out;
}

LinearReadout::LinearReadout(const Matrix& features, double ridge)
    : rows_(features.rows()), cols_(features.cols()), ridge_(ridge) {
    if (features.rows() == 0) throw std::invalid_argument("readout fit needs at least one row");
    if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be nonnegative");
    check_finite(features, "features");
    const Matrix x = with_bias(features);
    if (ridge_ == 0.0) {
        svd_.compute(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd_.setThreshold(pinv_cutoff);
    } else {
        design_t_ = x.transpose();
        Matrix gram = design_t_ * x;
        gram.diagonal().tail(cols_).array() += ridge_;
        normal_.compute(gram);
    }
}

Eigen::Index LinearReadout::rank() const {
    if (ridge_ != 0.0) throw std::logic_error("rank is only tracked for the pseudoinverse path");
    return svd_.rank();
}

ReadoutWeights LinearReadout::solve(const Vector& targets) const {
    if (targets.size() != rows_) throw std::invalid_argument("target length differs from feature rows");
    if (!targets.allFinite()) throw std::invalid_argument("targets contain non-finite entries");
    Vector w = ridge_ == 0.0 ? Vector(svd_.solve(targets)) : Vector(normal_.solve(design_t_ * targets));
    ReadoutWeights out;
    out.bias = w(0);
    out.weights = w.tail(cols_);
    return out;
}

ReadoutWeights fit(const Matrix& features, const Vector& targets, double ridge) {
    if (targets.size() != features.rows()) throw std::invalid_argument("target length differs from feature rows");
    return LinearReadout(features, ridge).solve(targets);
}

Vector predict(const ReadoutWeights& w, const Matrix& features) {
    if (features.cols() != w.weights.size()) throw std::invalid_argument("feature column count differs from weights");
    Vector y = features * w.weights;
    y.array() += w.bias;
    return y;
}

double residual_sum_squares(const ReadoutWeights& w, const Matrix& features, const Vector& targets) {
    if (targets.size() != features.rows()) throw std::invalid_argument("target length differs from feature rows");
    return (predict(w, features) - targets).squaredNorm();
}

double nmse(const Vector& predictions, const Vector& targets) {
    if (predictions.size() != targets.size()) throw std::invalid_argument("nmse: length mismatch");
    const double denom = targets.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("nmse: target vector is all zero");
    return (targets - predictions).squaredNorm() / denom;
}

double memory_function(const Vector& predictions, const Vector& targets) {
    if (predictions.size() != targets.size()) throw std::invalid_argument("memory_function: length mismatch");
    if (targets.size() < 2) throw std::invalid_argument("memory_function needs at least two samples");
    const double n = static_cast<double>(targets.size());
    const Vector p = predictions.array() - predictions.mean();
    const Vector t = targets.array() - targets.mean();
    const double var_p = p.squaredNorm() / n;
    const double var_t = t.squaredNorm() / n;
    if (var_p < 1e-14 || var_t < 1e-14) return 0.0;
    const double cov = p.dot(t) / n;
    return std::clamp(cov * cov / (var_p * var_t), 0.0, 1.0);
}

double memory_capacity(std::span<const double> mf_values) {
    if (mf_values.size() != static_cast<std::size_t>(memory_delays)) {
        throw std::invalid_argument("memory capacity needs exactly 151 memory-function values");
    }
    double sum = 0.0;
    for (double v : mf_values) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("memory-function value outside [0, 1]");
        sum += v;
    }
    return sum;
}

}  // namespace qrc
