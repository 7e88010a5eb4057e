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

#include "qrc/qcore.hpp"

#include "qrc/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrc {

namespace {

int qubits_for_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) {
        throw std::invalid_argument("density matrix dimension " + std::to_string(dim) +
                                    " is not a power of two");
    }
    return n;
}

void check_qubit(int qubit, int n_qubits) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside register of " +
                                std::to_string(n_qubits));
    }
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(CMatrix m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("density matrix must be square and nonempty");
    }
    const int n = qubits_for_dim(m.rows());
    DensityMatrix rho(std::move(m), n);
    if (rho.hermiticity_error() > tol) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - complex{1.0, 0.0}) > tol) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    if (rho.min_eigenvalue() < -tol) throw std::invalid_argument("density matrix is not PSD");
    return rho;
}

DensityMatrix DensityMatrix::unchecked(CMatrix m) {
    const int n = qubits_for_dim(m.rows());
    return DensityMatrix(std::move(m), n);
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const Eigen::Index d = hilbert_dim(n_qubits);
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d), n_qubits);
}

DensityMatrix DensityMatrix::basis_state(int n_qubits, Eigen::Index index) {
    const Eigen::Index d = hilbert_dim(n_qubits);
    if (index < 0 || index >= d) throw std::out_of_range("basis index outside register");
    CMatrix m = CMatrix::Zero(d, d);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m), n_qubits);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("zero state vector");
    const Eigen::VectorXcd v = psi / norm;
    return unchecked(v * v.adjoint());
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return m_.cwiseAbs2().sum();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::hermiticity_error() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix embed_single_qubit(const CMatrix& op, int qubit, int n_qubits) {
    check_qubit(qubit, n_qubits);
    const Eigen::Index d = hilbert_dim(n_qubits);
    const Eigen::Index mask = qubit_mask(n_qubits, qubit);
    CMatrix out = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        const int ia = (a & mask) ? 1 : 0;
        for (int jb = 0; jb < 2; ++jb) {
            const Eigen::Index b = jb ? (a | mask) : (a & ~mask);
            out(a, b) = op(ia, jb);
        }
    }
    return out;
}

IsingHamiltonian ising_from_couplings(const Matrix& couplings, double field) {
    const int n = static_cast<int>(couplings.rows());
    if (n < 1 || n > max_qubits || couplings.cols() != n) {
        throw std::invalid_argument("coupling matrix must be square with 1..10 qubits");
    }
    if ((couplings - couplings.transpose()).cwiseAbs().maxCoeff() > 0.0 ||
        couplings.diagonal().cwiseAbs().maxCoeff() > 0.0) {
        throw std::invalid_argument("couplings must be symmetric with zero diagonal");
    }
    const Eigen::Index d = hilbert_dim(n);
    std::vector<CMatrix> xs, zs;
    for (int q = 0; q < n; ++q) {
        xs.push_back(embed_single_qubit(pauli_x(), q, n));
        zs.push_back(embed_single_qubit(pauli_z(), q, n));
    }
    CMatrix h = CMatrix::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) h += couplings(i, j) * (xs[i] * xs[j]);
        h += field * zs[i];
    }
    return IsingHamiltonian{n, couplings, field, std::move(h)};
}

IsingHamiltonian build_ising_hamiltonian(int n_qubits, double coupling_scale, double field,
                                         std::uint64_t rng_seed) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
        throw std::invalid_argument("n_qubits must lie in [1, 10], got " + std::to_string(n_qubits));
    }
    if (!(coupling_scale > 0.0)) throw std::invalid_argument("coupling_scale must be positive");
    Rng rng(rng_seed);
    Matrix j = Matrix::Zero(n_qubits, n_qubits);
    for (int a = 0; a < n_qubits; ++a) {
        for (int b = a + 1; b < n_qubits; ++b) {
            j(a, b) = j(b, a) = rng.uniform(-0.5 * coupling_scale, 0.5 * coupling_scale);
        }
    }
    return ising_from_couplings(j, field);
}

HermitianEigensystem eigensystem(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Propagator propagator(const HermitianEigensystem& eig, double duration) {
    if (duration < 0.0) throw std::invalid_argument("propagator duration must be nonnegative");
    const Eigen::VectorXcd phases =
        (eig.eigenvalues.cast<complex>() * complex{0.0, -duration}).array().exp().matrix();
    CMatrix u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
    return {std::move(u), duration};
}

Propagator propagator(const IsingHamiltonian& h, double duration) {
    return propagator(eigensystem(h.matrix), duration);
}

DensityMatrix evolve(const DensityMatrix& rho, const Propagator& u) {
    if (u.matrix.rows() != rho.dim() || u.matrix.cols() != rho.dim()) {
        throw std::invalid_argument("propagator and density matrix dimensions differ");
    }
    CMatrix out = u.matrix * rho.matrix() * u.matrix.adjoint();
    return DensityMatrix::unchecked(std::move(out));
}

CMatrix partial_trace_qubit(const CMatrix& rho, int n_qubits, int qubit) {
    check_qubit(qubit, n_qubits);
    const Eigen::Index mask = qubit_mask(n_qubits, qubit);
    const Eigen::Index low = mask - 1;
    const Eigen::Index dr = hilbert_dim(n_qubits - 1);
    CMatrix out(dr, dr);
    // Reduced index r maps to full index with a zero inserted at the target bit.
    auto expand = [&](Eigen::Index r) { return ((r & ~low) << 1) | (r & low); };
    for (Eigen::Index r = 0; r < dr; ++r) {
        const Eigen::Index a0 = expand(r);
        for (Eigen::Index c = 0; c < dr; ++c) {
            const Eigen::Index b0 = expand(c);
            out(r, c) = rho(a0, b0) + rho(a0 | mask, b0 | mask);
        }
    }
    return out;
}

namespace {

template <typename M>
void inject_impl(M& rho, int n_qubits, double u, int qubit) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("input u must lie in [0, 1]");
    check_qubit(qubit, n_qubits);
    const Eigen::Index d = hilbert_dim(n_qubits);
    if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("matrix size mismatch");
    const Eigen::Index mask = qubit_mask(n_qubits, qubit);
    // rho_u = diag(1 - u, u); its off-diagonals vanish, so only same-bit blocks survive.
    const double p0 = 1.0 - u;
    const double p1 = u;
    for (Eigen::Index b = 0; b < d; ++b) {
        if (b & mask) continue;
        for (Eigen::Index a = 0; a < d; ++a) {
            if (a & mask) continue;
            const auto reduced = rho(a, b) + rho(a | mask, b | mask);
            rho(a, b) = p0 * reduced;
            rho(a | mask, b | mask) = p1 * reduced;
            rho(a, b | mask) = 0.0;
            rho(a | mask, b) = 0.0;
        }
    }
}

}  // namespace

void inject_input_inplace(CMatrix& rho, int n_qubits, double u, int qubit) {
    inject_impl(rho, n_qubits, u, qubit);
}

void inject_input_inplace(Matrix& rho_part, int n_qubits, double u, int qubit) {
    inject_impl(rho_part, n_qubits, u, qubit);
}

DensityMatrix inject_input(const DensityMatrix& rho, double u, int qubit) {
    CMatrix m = rho.matrix();
    inject_input_inplace(m, rho.n_qubits(), u, qubit);
    return DensityMatrix::unchecked(std::move(m));
}

double expect_z(const DensityMatrix& rho, int qubit) {
    check_qubit(qubit, rho.n_qubits());
    const Eigen::Index mask = qubit_mask(rho.n_qubits(), qubit);
    double acc = 0.0;
    for (Eigen::Index a = 0; a < rho.dim(); ++a) {
        const double p = rho.matrix()(a, a).real();
        acc += (a & mask) ? -p : p;
    }
    return acc;
}

}  // namespace qrc
