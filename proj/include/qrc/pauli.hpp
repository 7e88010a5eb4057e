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

// Pauli-vector ("hidden node") representation of small registers.
//
// A Pauli product is addressed by a base-4 index with one digit per qubit,
// qubit 0 most significant. Digit d = 2a + b encodes sigma_{ab}:
//   0 = I (sigma_00), 1 = Z (sigma_01), 2 = X (sigma_10), 3 = Y (sigma_11).
// Coefficients are r_i = Tr[P_i rho] / 2^N, so rho = sum_i r_i P_i.
//
// This path costs 4^N x 4^N and only exists to cross-check the dense
// density-matrix simulator for N <= 3.

#include "qrc/qcore.hpp"

#include <functional>

namespace qrc {

inline constexpr int max_ptm_qubits = 3;

enum class Pauli : int { I = 0, Z = 1, X = 2, Y = 3 };

/// 2x2 matrix of a single Pauli.
CMatrix pauli_matrix(Pauli p);

/// Tensor product addressed by `index` in [0, 4^N).
CMatrix pauli_product(int n_qubits, Eigen::Index index);

/// Index of the product with Pauli `p` on `qubit` and identity elsewhere.
Eigen::Index single_pauli_index(int n_qubits, int qubit, Pauli p);

/// r_i = Tr[P_i rho] / 2^N for every i.
Vector pauli_vector(const CMatrix& rho, int n_qubits);

/// rho = sum_i r_i P_i.
CMatrix from_pauli_vector(const Vector& r, int n_qubits);

/// Linear map on operators of an N-qubit register.
using Channel = std::function<CMatrix(const CMatrix&)>;

/// Real 4^N x 4^N matrix W with r' = W r.
struct PauliTransferMatrix {
    int n_qubits = 0;
    Matrix entries;

    Vector apply(const Vector& r) const { return entries * r; }
    /// Composition: (*this) after `first`.
    PauliTransferMatrix after(const PauliTransferMatrix& first) const {
        return {n_qubits, entries * first.entries};
    }
};

/// W_ji = Tr{P_j W[P_i]} / 2^N. Rejects N > 3.
PauliTransferMatrix channel_to_ptm(const Channel& channel, int n_qubits);

PauliTransferMatrix unitary_ptm(const Propagator& u, int n_qubits);

/// Transfer matrix of the input-injection channel S_u.
PauliTransferMatrix injection_ptm(double u, int qubit, int n_qubits);

}  // namespace qrc
