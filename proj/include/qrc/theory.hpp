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

// Training-residual algebra for combining reservoirs.
//
// For designs A and B on the same T rows, P_X is the orthogonal projector onto
// span(X) and r_X^2 = ||(I - P_X) y||^2. Appending columns never increases the
// residual, and the reduction from adding B to A is bounded by
// lambda_max(P_{A+B} - P_A) ||y||^2. Column spaces are taken through an SVD with
// a relative cutoff, so rank-deficient designs are allowed.

#include "qrc/qcore.hpp"

#include <string_view>

namespace qrc {

inline constexpr double rank_cutoff = 1e-10;

struct RegressionInstance {
    Matrix design;  ///< T x N
    Vector target;  ///< length T

    void validate() const;
};

/// Orthonormal basis (T x rank) of the column space.
Matrix column_space_basis(const Matrix& x);

/// Explicit T x T projector onto the column space.
Matrix projector(const Matrix& x);

/// ||(I - P_X) y||^2.
double residual_sq(const RegressionInstance& instance);

/// lambda_max(P_combined - P_base) where span(base) is inside span(combined).
/// Evaluated on the rank(combined)-dimensional subspace, not on T x T matrices.
double projector_gain(const Matrix& base_design, const Matrix& combined_design);

struct CombinationBounds {
    double residual_a = 0.0;         ///< r_A^2
    double residual_b = 0.0;         ///< r_B^2
    double residual_combined = 0.0;  ///< exact r_{A+B}^2
    double lambda_a = 0.0;           ///< lambda_max(Q_{A,A+B})
    double lambda_b = 0.0;           ///< lambda_max(Q_{B,A+B})
    double target_norm_sq = 0.0;     ///< ||y||^2
    double residual_lower = 0.0;
    double residual_upper = 0.0;

    bool contains(double value, double tol = 0.0) const {
        return value >= residual_lower - tol && value <= residual_upper + tol;
    }
};

/// Bracket max{0, r_A^2 - lambda_a ||y||^2, r_B^2 - lambda_b ||y||^2}
///   <= r_{A+B}^2 <= min{r_A^2, r_B^2}.
CombinationBounds combination_bounds(const RegressionInstance& a, const Matrix& b_design);

enum class PartnerChoice { b, c, undecidable };

std::string_view partner_choice_name(PartnerChoice choice);

struct PartnerDecision {
    PartnerChoice choice = PartnerChoice::undecidable;
    CombinationBounds with_b;  ///< bracket for A+B
    CombinationBounds with_c;  ///< bracket for A+C
};

/// Picks B when the upper bound of A+B lies strictly below the lower bound of
/// A+C (and symmetrically for C); otherwise the brackets overlap and only
/// fitting both combinations can decide. B and C must have equal column counts.
PartnerDecision select_partner(const RegressionInstance& a, const Matrix& b_design,
                               const Matrix& c_design);

}  // namespace qrc
