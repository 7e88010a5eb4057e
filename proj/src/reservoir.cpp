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

#include "qrc/reservoir.hpp"

#include "qrc/parallel.hpp"
#include "qrc/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace qrc {

void QRSystemConfig::validate() const {
    if (n_qubits < 1 || n_qubits > max_qubits) throw std::invalid_argument("n_qubits must lie in [1, 10]");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
    if (virtual_nodes < 1) throw std::invalid_argument("virtual_nodes must be >= 1");
    if (!(coupling_scale >= 0.0)) throw std::invalid_argument("coupling_scale must be nonnegative");
    if (!std::isfinite(field)) throw std::invalid_argument("field must be finite");
    if (input_qubit < 0 || input_qubit >= n_qubits) throw std::invalid_argument("input_qubit outside register");
}

std::string feature_column_name(int system, int virtual_node, int qubit) {
    return "s" + std::to_string(system) + "_v" + std::to_string(virtual_node) + "_q" +
           std::to_string(qubit);
}

FeatureMatrix FeatureMatrix::hconcat(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    if (a.rows() != b.rows()) throw std::invalid_argument("feature matrices differ in row count");
    FeatureMatrix out;
    out.values.resize(a.rows(), a.cols() + b.cols());
    out.values << a.values, b.values;
    out.columns = a.columns;
    out.columns.insert(out.columns.end(), b.columns.begin(), b.columns.end());
    return out;
}

FeatureMatrix FeatureMatrix::first_columns(Eigen::Index count) const {
    if (count < 0 || count > cols()) throw std::out_of_range("column count");
    return {values.leftCols(count),
            std::vector<std::string>(columns.begin(), columns.begin() + count)};
}

FeatureMatrix FeatureMatrix::row_range(Eigen::Index begin, Eigen::Index count) const {
    if (begin < 0 || count < 0 || begin + count > rows()) throw std::out_of_range("row range");
    return {values.middleRows(begin, count), columns};
}

DensityMatrix random_pure_state(int n_qubits, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd psi(hilbert_dim(n_qubits));
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = complex(rng.normal(), rng.normal());
    return DensityMatrix::pure(psi);
}

namespace {

// Packed layout of a Hermitian matrix A + iB:
//   [A_00 .. A_{d-1,d-1}, A_ij (i<j, row-major), B_ij (i<j, row-major)].
Eigen::Index packed_size(Eigen::Index d) { return d * d; }

}  // namespace

QuantumReservoir::QuantumReservoir(const QRSystemConfig& config)
    : config_(config),
      hamiltonian_(config.coupling_scale > 0.0
                       ? build_ising_hamiltonian(config.n_qubits, config.coupling_scale,
                                                 config.field, config.coupling_seed)
                       : ising_from_couplings(Matrix::Zero(config.n_qubits, config.n_qubits),
                                              config.field)) {
    config_.validate();
    const int n = config_.n_qubits;
    const int v_count = config_.virtual_nodes;
    const Eigen::Index d = hilbert_dim(n);

    if (hamiltonian_.matrix.imag().cwiseAbs().maxCoeff() != 0.0) {
        throw std::logic_error("eigenbasis engine requires a real Hamiltonian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian_.matrix.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("Hamiltonian eigensolver failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();

    HermitianEigensystem complex_eig{eigenvalues_, eigenvectors_.cast<complex>()};
    sub_propagator_ = propagator(complex_eig, config_.tau / v_count);

    // Z_l in the eigenbasis: W^T diag(z) W.
    std::vector<Matrix> z_eig(n);
    for (int l = 0; l < n; ++l) {
        Vector z(d);
        const Eigen::Index mask = qubit_mask(n, l);
        for (Eigen::Index a = 0; a < d; ++a) z(a) = (a & mask) ? -1.0 : 1.0;
        z_eig[l] = eigenvectors_.transpose() * z.asDiagonal() * eigenvectors_;
    }

    // <Z_l>(t) = sum_i Z~_ii A_ii + 2 sum_{i<j} Z~_ij (A_ij cos w_ij t + B_ij sin w_ij t),
    // with w_ij = lambda_i - lambda_j and A + iB the eigenbasis state right after injection.
    const Eigen::Index pairs = d * (d - 1) / 2;
    readout_.resize(static_cast<Eigen::Index>(v_count) * n, packed_size(d));
    for (int v = 1; v <= v_count; ++v) {
        const double t = (v == v_count) ? config_.tau : config_.tau * v / v_count;
        for (int l = 0; l < n; ++l) {
            auto row = readout_.row(static_cast<Eigen::Index>(v - 1) * n + l);
            const Matrix& zt = z_eig[l];
            for (Eigen::Index i = 0; i < d; ++i) row(i) = zt(i, i);
            Eigen::Index p = 0;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (Eigen::Index j = i + 1; j < d; ++j, ++p) {
                    const double w = (eigenvalues_(i) - eigenvalues_(j)) * t;
                    row(d + p) = 2.0 * zt(i, j) * std::cos(w);
                    row(d + pairs + p) = 2.0 * zt(i, j) * std::sin(w);
                }
            }
        }
    }

    cos_full_.resize(d, d);
    sin_full_.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double w = (eigenvalues_(i) - eigenvalues_(j)) * config_.tau;
            cos_full_(i, j) = std::cos(w);
            sin_full_(i, j) = std::sin(w);
        }
    }

    work_re_.resize(d, d);
    work_im_.resize(d, d);
    tmp_.resize(d, d);
    packed_.resize(packed_size(d));
    reset(InitialStatePolicy::mixed());
}

DensityMatrix QuantumReservoir::state() const {
    CMatrix m(state_re_.rows(), state_re_.cols());
    m.real() = eigenvectors_ * state_re_ * eigenvectors_.transpose();
    m.imag() = eigenvectors_ * state_im_ * eigenvectors_.transpose();
    return DensityMatrix::unchecked(std::move(m));
}

void QuantumReservoir::set_state(const DensityMatrix& rho) {
    if (rho.n_qubits() != config_.n_qubits) throw std::invalid_argument("state has wrong qubit count");
    state_re_ = eigenvectors_.transpose() * rho.matrix().real() * eigenvectors_;
    state_im_ = eigenvectors_.transpose() * rho.matrix().imag() * eigenvectors_;
}

void QuantumReservoir::reset(const InitialStatePolicy& policy) {
    switch (policy.kind) {
        case InitialStatePolicy::Kind::maximally_mixed:
            set_state(DensityMatrix::maximally_mixed(config_.n_qubits));
            break;
        case InitialStatePolicy::Kind::random_pure:
            set_state(random_pure_state(config_.n_qubits, policy.seed));
            break;
        case InitialStatePolicy::Kind::explicit_state:
            if (!policy.state) throw std::invalid_argument("explicit initial state missing");
            set_state(*policy.state);
            break;
    }
}

void QuantumReservoir::step_into(double u, double* out) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("input u must lie in [0, 1]");
    const Matrix& w = eigenvectors_;
    const Eigen::Index d = w.rows();

    // To the computational basis, inject, and back.
    tmp_.noalias() = w * state_re_;
    work_re_.noalias() = tmp_ * w.transpose();
    tmp_.noalias() = w * state_im_;
    work_im_.noalias() = tmp_ * w.transpose();
    inject_input_inplace(work_re_, config_.n_qubits, u, config_.input_qubit);
    inject_input_inplace(work_im_, config_.n_qubits, u, config_.input_qubit);
    tmp_.noalias() = w.transpose() * work_re_;
    state_re_.noalias() = tmp_ * w;
    tmp_.noalias() = w.transpose() * work_im_;
    state_im_.noalias() = tmp_ * w;

    const Eigen::Index pairs = d * (d - 1) / 2;
    for (Eigen::Index i = 0; i < d; ++i) packed_(i) = state_re_(i, i);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j, ++p) {
            packed_(d + p) = state_re_(i, j);
            packed_(d + pairs + p) = state_im_(i, j);
        }
    }
    Eigen::Map<Vector>(out, readout_.rows()).noalias() = readout_ * packed_;

    // Free evolution over the whole interval: rho_ij <- rho_ij exp(-i w_ij tau).
    work_re_ = state_re_.cwiseProduct(cos_full_) + state_im_.cwiseProduct(sin_full_);
    state_im_ = state_im_.cwiseProduct(cos_full_) - state_re_.cwiseProduct(sin_full_);
    state_re_.swap(work_re_);
}

std::vector<double> QuantumReservoir::step(double u) {
    std::vector<double> out(static_cast<std::size_t>(node_count()));
    step_into(u, out.data());
    return out;
}

Matrix QuantumReservoir::run(std::span<const double> inputs) {
    // Row-major scratch so each step writes one contiguous row.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
        static_cast<Eigen::Index>(inputs.size()), node_count());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        step_into(inputs[k], rows.row(static_cast<Eigen::Index>(k)).data());
    }
    return rows;
}

int EnsembleConfig::total_nodes() const {
    int total = 0;
    for (const auto& s : systems) total += s.node_count();
    return total;
}

void EnsembleConfig::validate() const {
    if (systems.empty()) throw std::invalid_argument("ensemble needs at least one system");
    for (const auto& s : systems) s.validate();
}

FeatureMatrix run_system(const QRSystemConfig& config, std::span<const double> inputs,
                         const InitialStatePolicy& policy, int system) {
    if (inputs.empty()) throw std::invalid_argument("input sequence is empty");
    QuantumReservoir reservoir(config);
    reservoir.reset(policy);
    FeatureMatrix out;
    out.values = reservoir.run(inputs);
    out.columns.reserve(static_cast<std::size_t>(config.node_count()));
    for (int v = 1; v <= config.virtual_nodes; ++v)
        for (int l = 1; l <= config.n_qubits; ++l) out.columns.push_back(feature_column_name(system, v, l));
    return out;
}

FeatureMatrix run_ensemble(const EnsembleConfig& ensemble, std::span<const double> inputs,
                           const InitialStatePolicy& policy, int workers) {
    ensemble.validate();
    if (inputs.empty()) throw std::invalid_argument("input sequence is empty");
    std::vector<FeatureMatrix> blocks(ensemble.systems.size());
    parallel_for(blocks.size(), workers, [&](std::size_t c) {
        blocks[c] = run_system(ensemble.systems[c], inputs, policy, static_cast<int>(c) + 1);
    });
    FeatureMatrix out;
    for (const auto& b : blocks) out = FeatureMatrix::hconcat(out, b);
    return out;
}

}  // namespace qrc
