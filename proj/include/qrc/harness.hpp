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

// Experiment sweeps over (N, tau, V, order) cells with per-trial seeding.
//
// Seeds depend on (base, N, tau, trial, system index) only. Order-k ensembles
// are therefore the first k systems of the order-5 ensemble, and every V shares
// the same Hamiltonians and inputs within a trial.

#include "qrc/tasks.hpp"
#include "qrc/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qrc {

inline constexpr int default_trials = 20;
inline constexpr int paper_trials = 100;

struct ExperimentConfig {
    std::string preset = "custom";
    std::vector<int> n_qubits{5};
    std::vector<double> taus{1.0};
    std::vector<int> virtual_nodes{1};
    std::vector<int> orders{1, 2, 3, 4, 5};
    int trials = default_trials;
    std::uint64_t base_seed = 0;
    PhaseProtocol protocol;
    std::vector<TaskKind> tasks{TaskKind::narma_suite, TaskKind::memory_capacity};
    double coupling_scale = 1.0;
    double field = 1.0;
    double ridge = 0.0;
    /// |y| above which a NARMA target counts as diverged.
    double narma_bound = 1e3;
    std::filesystem::path output_dir = "results";
    int workers = 1;
    bool dump_features = false;

    void validate() const;
};

/// Names accepted by experiment_preset.
std::vector<std::string> preset_names();

/// fig3, fig5, sweep (the appendix grid) or smoke.
ExperimentConfig experiment_preset(std::string_view name, bool paper_scale = false);

/// Parses "n=3,4,5;tau=0.5,1;V=1,5,25;order=1-5" into `config`. Omitted keys
/// keep their current values.
void apply_grid(ExperimentConfig& config, std::string_view grid);

/// Parses "narma", "mc" or "both".
std::vector<TaskKind> parse_task_selection(std::string_view text);

/// Worker count from QRC_WORKERS, or 1.
int default_workers();

std::uint64_t system_seed(std::uint64_t base, int n_qubits, double tau, int trial, int system);
std::uint64_t trial_input_seed(std::uint64_t base, int n_qubits, double tau, int trial);

struct ResultRow {
    std::string preset;
    int n_qubits = 0;
    double tau = 0.0;
    int virtual_nodes = 0;
    int order = 0;
    int trial = 0;
    std::string metric;
    double value = 0.0;
};

/// Sorts by (n_qubits, tau, V, order, trial), keeping metric order within a key.
void sort_rows(std::vector<ResultRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_rows_csv(const std::filesystem::path& path);

struct AggregateRow {
    std::string preset;
    int n_qubits = 0;
    double tau = 0.0;
    int virtual_nodes = 0;
    int order = 0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation, 0 for a single trial
    int count = 0;
};

/// Mean and std over trials per (cell, metric). Flag rows are skipped.
std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    std::vector<AggregateRow> summary;
    std::filesystem::path trials_csv;
    std::filesystem::path summary_csv;
    std::filesystem::path manifest_json;
};

/// Runs every (cell, trial) and writes trials.csv, summary.csv and
/// manifest.json under config.output_dir. A trial whose NARMA target diverges
/// yields a "diverged" row with value 1; other per-trial failures yield "failed".
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// In-memory variant used by run_experiment; writes nothing.
std::vector<ResultRow> compute_experiment(const ExperimentConfig& config);

enum class EsnMode { narma_sweep, mc_fixed };

EsnMode parse_esn_mode(std::string_view name);
std::string_view esn_mode_name(EsnMode mode);

struct EsnBaselineConfig {
    EsnMode mode = EsnMode::mc_fixed;
    std::vector<int> node_counts{5, 10, 20, 30, 40, 50, 100, 150, 200, 250, 300};
    int networks = 100;          ///< ESNs per node count
    int trials = 10;             ///< input sequences per setting (narma_sweep)
    std::vector<double> input_scales{0.01};
    std::vector<double> spectral_radii{0.9};
    std::uint64_t base_seed = 0;
    PhaseProtocol protocol;
    double ridge = 0.0;
    std::filesystem::path output_dir = "results";
    int workers = 1;

    void validate() const;
};

/// Full grid for narma_sweep (8 scales x 20 radii, 10 ESNs, 10 trials) or
/// 100 networks at radius 0.9 and scale 0.01 for mc_fixed. Without
/// `paper_scale` the sweep grid and network counts are reduced.
EsnBaselineConfig esn_preset(EsnMode mode, bool paper_scale = false);

struct EsnRow {
    std::string mode;
    int n_nodes = 0;
    int network = 0;
    std::string metric;
    double value = 0.0;
};

struct EsnOutput {
    std::vector<EsnRow> rows;
    std::filesystem::path rows_csv;
    std::filesystem::path summary_csv;
};

/// mc_fixed: one MC per network, each driven by its own input.
/// narma_sweep: per network, the trial-averaged NMSE of each (scale, radius)
/// setting; the row value is the lowest over settings, per NARMA order.
std::vector<EsnRow> compute_esn_baseline(const EsnBaselineConfig& config);
EsnOutput run_esn_baseline(const EsnBaselineConfig& config);

struct RatioRow {
    std::string comparison;  ///< spatial, temporal_1_5, temporal_1_25, temporal_5_25
    std::string preset;
    int n_qubits = 0;
    double tau = 0.0;
    int virtual_nodes = 0;
    int order = 0;
    std::string metric;
    double baseline = 0.0;
    double value = 0.0;
    double ratio = 0.0;
};

/// Ratios of trial-averaged mc and nmse_narma* metrics. Spatial rows divide by
/// the order-1 mean of the same (N, tau, V); temporal rows compare V values at
/// order 1.
std::vector<RatioRow> improvement_ratios(const std::vector<AggregateRow>& summary);
void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows);

struct TheoryRow {
    std::string combination;
    CombinationBounds bounds;
};

/// Bounds for A+B (and A+C with a partner decision when `c` is given) on
/// feature CSVs and one target column of `target_csv`.
struct TheoryAnalysis {
    std::vector<TheoryRow> combinations;
    std::string decision;  ///< empty without C
};

TheoryAnalysis analyze_theory_bounds(const std::filesystem::path& a, const std::filesystem::path& b,
                                     const std::filesystem::path* c,
                                     const std::filesystem::path& target_csv,
                                     std::string_view target_column, bool bias);
void write_theory_csv(std::ostream& out, const TheoryAnalysis& analysis);

}  // namespace qrc
