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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace qrc {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest register the dense simulator accepts.
inline constexpr int max_qubits = 10;

/// Number of basis states of an n-qubit register.
constexpr Eigen::Index hilbert_dim(int n_qubits) { return Eigen::Index{1} << n_qubits; }

/// Bit mask selecting `qubit` inside a computational-basis index. Qubit 0 is the
/// leftmost tensor factor, i.e. the most significant bit.
constexpr Eigen::Index qubit_mask(int n_qubits, int qubit) {
    return Eigen::Index{1} << (n_qubits - 1 - qubit);
}

/// Density operator of an N-qubit register (2^N x 2^N, Hermitian, PSD, unit trace).
///
/// Construction through `from_matrix` validates the physical invariants;
/// `unchecked` is for hot paths whose output is physical by construction.
class DensityMatrix {
public:
    static DensityMatrix from_matrix(CMatrix m, double tol = 1e-10);
    static DensityMatrix unchecked(CMatrix m);
    static DensityMatrix maximally_mixed(int n_qubits);
    /// Pure computational-basis state |index><index|.
    static DensityMatrix basis_state(int n_qubits, Eigen::Index index);
    /// Pure state |psi><psi|; psi is normalized first.
    static DensityMatrix pure(const Eigen::VectorXcd& psi);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }

    complex trace() const { return m_.trace(); }
    double purity() const;
    double min_eigenvalue() const;
    double hermiticity_error() const;

private:
    DensityMatrix(CMatrix m, int n_qubits) : m_(std::move(m)), n_qubits_(n_qubits) {}
    CMatrix m_;
    int n_qubits_;
};

/// Fully connected transverse-field Ising Hamiltonian
/// H = sum_{i<j} J_ij X_i X_j + h sum_i Z_i  (units of Delta).
struct IsingHamiltonian {
    int n_qubits = 0;
    Matrix couplings;  ///< symmetric, zero diagonal
    double field = 0.0;
    CMatrix matrix;
};

/// Unitary exp(-i H t).
struct Propagator {
    CMatrix matrix;
    double duration = 0.0;
};

/// Eigendecomposition H = V diag(lambda) V^dagger, reusable across durations.
struct HermitianEigensystem {
    Vector eigenvalues;
    CMatrix eigenvectors;
};

/// Draws J_ij ~ U[-J/2, J/2] for i < j in row-major pair order from `rng_seed`.
IsingHamiltonian build_ising_hamiltonian(int n_qubits, double coupling_scale, double field,
                                         std::uint64_t rng_seed);

/// Hamiltonian from explicit couplings (symmetric, zero diagonal).
IsingHamiltonian ising_from_couplings(const Matrix& couplings, double field);

/// Single-qubit operator `op` (2x2) acting on `qubit`, identity elsewhere.
CMatrix embed_single_qubit(const CMatrix& op, int qubit, int n_qubits);

HermitianEigensystem eigensystem(const CMatrix& hermitian);

Propagator propagator(const IsingHamiltonian& h, double duration);
Propagator propagator(const HermitianEigensystem& eig, double duration);

/// rho -> U rho U^dagger.
DensityMatrix evolve(const DensityMatrix& rho, const Propagator& u);

/// Reset `qubit` to (I + (1 - 2u) Z)/2 while keeping the reduced state of the others.
DensityMatrix inject_input(const DensityMatrix& rho, double u, int qubit = 0);

/// In-place variant on a raw density matrix; no validation beyond the range of u.
void inject_input_inplace(CMatrix& rho, int n_qubits, double u, int qubit);
/// The channel is real-linear, so it can act on the real and imaginary parts separately.
void inject_input_inplace(Matrix& rho_part, int n_qubits, double u, int qubit);

/// Tr(Z_qubit rho).
double expect_z(const DensityMatrix& rho, int qubit);

/// Partial trace over a single qubit; returns the (N-1)-qubit reduced matrix.
CMatrix partial_trace_qubit(const CMatrix& rho, int n_qubits, int qubit);

}  // namespace qrc
