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

#include "qrc/qcore.hpp"

#include <Eigen/SVD>

#include <span>
#include <string>
#include <vector>

namespace qrc {

/// Number of delays d = 0..150 summed into the memory capacity.
inline constexpr int memory_delays = 151;

/// Relative singular-value cutoff of the pseudoinverse.
inline constexpr double pinv_cutoff = 1e-10;

struct ReadoutWeights {
    double bias = 0.0;
    Vector weights;

    std::string to_json() const;
    static ReadoutWeights from_json(const std::string& text);
};

/// Linear least-squares readout with a bias column prepended internally.
///
/// ridge == 0: minimum-norm solution through the SVD pseudoinverse (singular
/// values below pinv_cutoff * s_max are dropped), so rank-deficient designs
/// from synchronized reservoirs are fine. ridge > 0: Tikhonov solution with
/// the bias left unpenalized. One factorization serves any number of targets.
class LinearReadout {
public:
    LinearReadout(const Matrix& features, double ridge = 0.0);

    ReadoutWeights solve(const Vector& targets) const;
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    /// Numerical rank of the design with bias (ridge == 0 only).
    Eigen::Index rank() const;

private:
    Eigen::Index rows_, cols_;
    double ridge_;
    Eigen::BDCSVD<Matrix> svd_;
    Matrix design_t_;                  // ridge path: X^T with bias row
    Eigen::LDLT<Matrix> normal_;       // ridge path
};

ReadoutWeights fit(const Matrix& features, const Vector& targets, double ridge = 0.0);

Vector predict(const ReadoutWeights& w, const Matrix& features);

/// Sum of squared residuals of `w` on (features, targets).
double residual_sum_squares(const ReadoutWeights& w, const Matrix& features, const Vector& targets);

/// sum (target - prediction)^2 / sum target^2.
double nmse(const Vector& predictions, const Vector& targets);

/// Squared Pearson correlation, clamped to [0, 1]; 0 when either variance is < 1e-14.
double memory_function(const Vector& predictions, const Vector& targets);

/// Sum of exactly 151 values, each in [0, 1].
double memory_capacity(std::span<const double> mf_values);

}  // namespace qrc
