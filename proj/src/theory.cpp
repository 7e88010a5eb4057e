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

#include "qrc/theory.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace qrc {

void RegressionInstance::validate() const {
    if (design.size() == 0) throw std::invalid_argument("design matrix is empty");
    if (design.rows() != target.size()) throw std::invalid_argument("design rows differ from target length");
    if (design.rows() < design.cols()) throw std::invalid_argument("design has more columns than rows");
}

Matrix column_space_basis(const Matrix& x) {
    if (x.size() == 0) throw std::invalid_argument("projector of an empty matrix");
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU);
    svd.setThreshold(rank_cutoff);
    return svd.matrixU().leftCols(svd.rank());
}

Matrix projector(const Matrix& x) {
    const Matrix u = column_space_basis(x);
    return u * u.transpose();
}

double residual_sq(const RegressionInstance& instance) {
    instance.validate();
    const Matrix u = column_space_basis(instance.design);
    const Vector r = instance.target - u * (u.transpose() * instance.target);
    return r.squaredNorm();
}

double projector_gain(const Matrix& base_design, const Matrix& combined_design) {
    if (base_design.rows() != combined_design.rows()) throw std::invalid_argument("row mismatch");
    const Matrix ub = column_space_basis(base_design);
    const Matrix uc = column_space_basis(combined_design);
    // On span(combined): Q = I - M M^T with M = Uc^T Ub.
    const Matrix m = uc.transpose() * ub;
    Matrix q = -m * m.transpose();
    q.diagonal().array() += 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
    return std::clamp(es.eigenvalues().maxCoeff(), 0.0, 1.0);
}

CombinationBounds combination_bounds(const RegressionInstance& a, const Matrix& b_design) {
    a.validate();
    if (b_design.rows() != a.design.rows()) throw std::invalid_argument("row counts of A and B differ");
    Matrix ab(a.design.rows(), a.design.cols() + b_design.cols());
    ab << a.design, b_design;

    CombinationBounds out;
    out.residual_a = residual_sq(a);
    out.residual_b = residual_sq({b_design, a.target});
    out.residual_combined = residual_sq({ab, a.target});
    out.lambda_a = projector_gain(a.design, ab);
    out.lambda_b = projector_gain(b_design, ab);
    out.target_norm_sq = a.target.squaredNorm();
    out.residual_upper = std::min(out.residual_a, out.residual_b);
    out.residual_lower = std::max({0.0, out.residual_a - out.lambda_a * out.target_norm_sq,
                                   out.residual_b - out.lambda_b * out.target_norm_sq});
    return out;
}

std::string_view partner_choice_name(PartnerChoice choice) {
    switch (choice) {
        case PartnerChoice::b: return "B";
        case PartnerChoice::c: return "C";
        case PartnerChoice::undecidable: return "undecidable";
    }
    return "undecidable";
}

PartnerDecision select_partner(const RegressionInstance& a, const Matrix& b_design,
                               const Matrix& c_design) {
    if (b_design.cols() != c_design.cols()) throw std::invalid_argument("B and C must have equal node counts");
    PartnerDecision out;
    out.with_b = combination_bounds(a, b_design);
    out.with_c = combination_bounds(a, c_design);
    if (out.with_b.residual_upper < out.with_c.residual_lower) {
        out.choice = PartnerChoice::b;
    } else if (out.with_c.residual_upper < out.with_b.residual_lower) {
        out.choice = PartnerChoice::c;
    }
    return out;
}

}  // namespace qrc
