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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrc {

/// Parameters of one quantum reservoir. Energies and times are in units of Delta.
struct QRSystemConfig {
    int n_qubits = 5;
    double tau = 1.0;  ///< input interval tau*Delta
    int virtual_nodes = 1;
    double coupling_scale = 1.0;  ///< J/Delta
    double field = 1.0;           ///< h/Delta
    std::uint64_t coupling_seed = 0;
    int input_qubit = 0;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    int node_count() const { return n_qubits * virtual_nodes; }
};

/// Design matrix of harvested signals: one row per input step, one column per
/// computational node (no bias column).
struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> columns;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Columns of `a` followed by columns of `b`; row counts must match.
    static FeatureMatrix hconcat(const FeatureMatrix& a, const FeatureMatrix& b);
    FeatureMatrix first_columns(Eigen::Index count) const;
    FeatureMatrix row_range(Eigen::Index begin, Eigen::Index count) const;
};

/// Canonical column label: s{c}_v{v}_q{l}, all 1-based.
std::string feature_column_name(int system, int virtual_node, int qubit);

/// How a reservoir state is set before the first input.
struct InitialStatePolicy {
    enum class Kind { maximally_mixed, random_pure, explicit_state };
    Kind kind = Kind::maximally_mixed;
    std::uint64_t seed = 0;              ///< for random_pure
    std::optional<DensityMatrix> state;  ///< for explicit_state

    static InitialStatePolicy mixed() { return {}; }
    static InitialStatePolicy random(std::uint64_t seed) { return {Kind::random_pure, seed, {}}; }
    static InitialStatePolicy fixed(DensityMatrix rho) {
        return {Kind::explicit_state, 0, std::move(rho)};
    }
};

/// Haar-like random pure state (normalized complex Gaussian amplitudes).
DensityMatrix random_pure_state(int n_qubits, std::uint64_t seed);

/// Input-driven Ising reservoir with temporal multiplexing.
///
/// The state is stored in the eigenbasis of H, where free evolution is a
/// phase rotation of each matrix element. Each input step transforms to the
/// computational basis once for the injection channel and back. Requires H to
/// be real symmetric, which holds for the transverse-field Ising model.
class QuantumReservoir {
public:
    explicit QuantumReservoir(const QRSystemConfig& config);

    const QRSystemConfig& config() const { return config_; }
    const IsingHamiltonian& hamiltonian() const { return hamiltonian_; }
    /// exp(-i H tau / V).
    const Propagator& sub_propagator() const { return sub_propagator_; }
    int node_count() const { return config_.node_count(); }

    /// Current state in the computational basis.
    DensityMatrix state() const;
    void set_state(const DensityMatrix& rho);
    void reset(const InitialStatePolicy& policy);

    /// Injects u, then harvests all Z expectations after each of the V
    /// sub-intervals. Returns V*N values, virtual node major, qubit minor.
    std::vector<double> step(double u);

    /// Steps through `inputs`; row k of the result holds the signals of step k.
    Matrix run(std::span<const double> inputs);

private:
    void step_into(double u, double* out);

    QRSystemConfig config_;
    IsingHamiltonian hamiltonian_;
    Propagator sub_propagator_;
    Vector eigenvalues_;
    Matrix eigenvectors_;  // real orthogonal
    Matrix readout_;       // (V*N) x d^2 coefficients on the packed eigenbasis state
    Matrix cos_full_, sin_full_;  // phase rotation over one full interval tau
    Matrix state_re_, state_im_;  // eigenbasis state
    // Scratch buffers reused across steps.
    Matrix work_re_, work_im_, tmp_;
    Vector packed_;
};

struct EnsembleConfig {
    std::vector<QRSystemConfig> systems;

    int total_nodes() const;
    void validate() const;
};

/// Drives every system with the common input stream and concatenates their
/// signals in canonical order (system, virtual node, qubit). Systems may run on
/// up to `workers` threads; the result does not depend on the worker count.
FeatureMatrix run_ensemble(const EnsembleConfig& ensemble, std::span<const double> inputs,
                           const InitialStatePolicy& policy = {}, int workers = 1);

/// Single-system run with canonical column labels for system index `system` (1-based).
FeatureMatrix run_system(const QRSystemConfig& config, std::span<const double> inputs,
                         const InitialStatePolicy& policy = {}, int system = 1);

}  // namespace qrc
