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

#include "qrc/pauli.hpp"

#include <stdexcept>
#include <vector>

namespace qrc {

namespace {

Eigen::Index pauli_count(int n_qubits) { return Eigen::Index{1} << (2 * n_qubits); }

void check_ptm_size(int n_qubits) {
    if (n_qubits < 1 || n_qubits > max_ptm_qubits) {
        throw std::invalid_argument("Pauli-vector oracle supports 1..3 qubits only");
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

CMatrix pauli_matrix(Pauli p) {
    CMatrix m(2, 2);
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, complex(0, -1), complex(0, 1), 0; break;
    }
    return m;
}

CMatrix pauli_product(int n_qubits, Eigen::Index index) {
    check_ptm_size(n_qubits);
    if (index < 0 || index >= pauli_count(n_qubits)) throw std::out_of_range("Pauli index");
    CMatrix out = CMatrix::Ones(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        const int digit = static_cast<int>((index >> (2 * (n_qubits - 1 - q))) & 3);
        out = kron(out, pauli_matrix(static_cast<Pauli>(digit)));
    }
    return out;
}

Eigen::Index single_pauli_index(int n_qubits, int qubit, Pauli p) {
    return static_cast<Eigen::Index>(p) << (2 * (n_qubits - 1 - qubit));
}

Vector pauli_vector(const CMatrix& rho, int n_qubits) {
    check_ptm_size(n_qubits);
    const Eigen::Index count = pauli_count(n_qubits);
    const double norm = static_cast<double>(hilbert_dim(n_qubits));
    Vector r(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        r(i) = (pauli_product(n_qubits, i) * rho).trace().real() / norm;
    }
    return r;
}

CMatrix from_pauli_vector(const Vector& r, int n_qubits) {
    check_ptm_size(n_qubits);
    const Eigen::Index d = hilbert_dim(n_qubits);
    if (r.size() != pauli_count(n_qubits)) throw std::invalid_argument("Pauli vector length");
    CMatrix rho = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < r.size(); ++i) rho += r(i) * pauli_product(n_qubits, i);
    return rho;
}

PauliTransferMatrix channel_to_ptm(const Channel& channel, int n_qubits) {
    check_ptm_size(n_qubits);
    const Eigen::Index count = pauli_count(n_qubits);
    const double norm = static_cast<double>(hilbert_dim(n_qubits));
    std::vector<CMatrix> basis;
    basis.reserve(count);
    for (Eigen::Index i = 0; i < count; ++i) basis.push_back(pauli_product(n_qubits, i));
    Matrix w(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const CMatrix image = channel(basis[i]);
        for (Eigen::Index j = 0; j < count; ++j) {
            w(j, i) = (basis[j] * image).trace().real() / norm;
        }
    }
    return {n_qubits, std::move(w)};
}

PauliTransferMatrix unitary_ptm(const Propagator& u, int n_qubits) {
    const CMatrix& m = u.matrix;
    return channel_to_ptm([&m](const CMatrix& p) -> CMatrix { return m * p * m.adjoint(); },
                          n_qubits);
}

PauliTransferMatrix injection_ptm(double u, int qubit, int n_qubits) {
    return channel_to_ptm(
        [=](const CMatrix& p) -> CMatrix {
            CMatrix out = p;
            inject_input_inplace(out, n_qubits, u, qubit);
            return out;
        },
        n_qubits);
}

}  // namespace qrc
