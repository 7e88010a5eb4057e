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

// qrc: command-line front end for experiment sweeps, ESN baselines and analysis.
//
//   qrc run --preset fig3 --trials 20 --out results/fig3
//   qrc run --grid "n=3,4;tau=1,2;V=1,5;order=1-3" --task mc
//   qrc esn --mode mc_fixed --out results/esn
//   qrc analyze --kind improvement_ratio --in results/fig3/summary.csv
//   qrc analyze --kind theory_bounds --a s1.csv --b s2.csv --target t.csv --column narma5

#include "qrc/feature_io.hpp"
#include "qrc/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct RunOptions {
    std::string preset;
    std::string grid;
    std::optional<int> trials;
    std::uint64_t seed = 0;
    std::string out = "results";
    int workers = 0;
    bool paper_scale = false;
    std::string task;
    std::string config;
    bool dump_features = false;
    std::optional<int> washout, train, eval;
    std::optional<double> coupling_scale, field, ridge;
};

struct EsnOptions {
    std::string mode;
    std::vector<int> nodes;
    std::optional<int> networks, trials;
    std::uint64_t seed = 0;
    std::string out = "results";
    int workers = 0;
    bool paper_scale = false;
    std::string config;
};

struct AnalyzeOptions {
    std::string kind;
    std::string in;
    std::string out;
    std::string a, b, c, target, column = "narma5";
    bool no_bias = false;
};

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
}

// Values in the config file take precedence over flags.
void merge_config(RunOptions& o, const nlohmann::json& j) {
    for (const auto& [key, v] : j.items()) {
        if (key == "preset") o.preset = v.get<std::string>();
        else if (key == "grid") o.grid = v.get<std::string>();
        else if (key == "trials") o.trials = v.get<int>();
        else if (key == "seed") o.seed = v.get<std::uint64_t>();
        else if (key == "out") o.out = v.get<std::string>();
        else if (key == "workers") o.workers = v.get<int>();
        else if (key == "paper_scale") o.paper_scale = v.get<bool>();
        else if (key == "task") o.task = v.get<std::string>();
        else if (key == "dump_features") o.dump_features = v.get<bool>();
        else if (key == "washout") o.washout = v.get<int>();
        else if (key == "train") o.train = v.get<int>();
        else if (key == "eval") o.eval = v.get<int>();
        else if (key == "coupling_scale") o.coupling_scale = v.get<double>();
        else if (key == "field") o.field = v.get<double>();
        else if (key == "ridge") o.ridge = v.get<double>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void merge_config(EsnOptions& o, const nlohmann::json& j) {
    for (const auto& [key, v] : j.items()) {
        if (key == "mode") o.mode = v.get<std::string>();
        else if (key == "nodes") o.nodes = v.get<std::vector<int>>();
        else if (key == "networks") o.networks = v.get<int>();
        else if (key == "trials") o.trials = v.get<int>();
        else if (key == "seed") o.seed = v.get<std::uint64_t>();
        else if (key == "out") o.out = v.get<std::string>();
        else if (key == "workers") o.workers = v.get<int>();
        else if (key == "paper_scale") o.paper_scale = v.get<bool>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

int do_run(RunOptions o) {
    if (!o.config.empty()) merge_config(o, load_config(o.config));
    if (o.preset.empty() && o.grid.empty()) throw CLI::ValidationError("run", "--preset or --grid is required");
    qrc::ExperimentConfig cfg = o.preset.empty() ? qrc::ExperimentConfig{} : qrc::experiment_preset(o.preset, o.paper_scale);
    if (!o.grid.empty()) {
        qrc::apply_grid(cfg, o.grid);
        if (!o.preset.empty()) cfg.preset = o.preset;
        if (o.paper_scale) cfg.trials = qrc::paper_trials;
    }
    if (o.trials) cfg.trials = *o.trials;
    if (!o.task.empty()) cfg.tasks = qrc::parse_task_selection(o.task);
    if (o.washout) cfg.protocol.washout = *o.washout;
    if (o.train) cfg.protocol.train = *o.train;
    if (o.eval) cfg.protocol.eval = *o.eval;
    if (o.coupling_scale) cfg.coupling_scale = *o.coupling_scale;
    if (o.field) cfg.field = *o.field;
    if (o.ridge) cfg.ridge = *o.ridge;
    cfg.base_seed = o.seed;
    cfg.output_dir = o.out;
    cfg.workers = o.workers > 0 ? o.workers : qrc::default_workers();
    cfg.dump_features = o.dump_features;

    const auto result = qrc::run_experiment(cfg);
    std::size_t flagged = 0;
    for (const auto& r : result.rows) flagged += (r.metric == "diverged" || r.metric == "failed") ? 1 : 0;
    std::cout << "wrote " << result.trials_csv.string() << " (" << result.rows.size() << " rows, " << flagged
              << " flagged)\n"
              << "wrote " << result.summary_csv.string() << "\n"
              << "wrote " << result.manifest_json.string() << "\n";
    return 0;
}

int do_esn(EsnOptions o) {
    if (!o.config.empty()) merge_config(o, load_config(o.config));
    qrc::EsnBaselineConfig cfg = qrc::esn_preset(qrc::parse_esn_mode(o.mode), o.paper_scale);
    if (!o.nodes.empty()) cfg.node_counts = o.nodes;
    if (o.networks) cfg.networks = *o.networks;
    if (o.trials) cfg.trials = *o.trials;
    cfg.base_seed = o.seed;
    cfg.output_dir = o.out;
    cfg.workers = o.workers > 0 ? o.workers : qrc::default_workers();
    const auto result = qrc::run_esn_baseline(cfg);
    std::cout << "wrote " << result.rows_csv.string() << "\nwrote " << result.summary_csv.string() << "\n";
    return 0;
}

void write_to(const std::string& path, const auto& writer) {
    if (path.empty() || path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    writer(f);
}

int do_analyze(const AnalyzeOptions& o) {
    if (o.kind == "improvement_ratio") {
        if (o.in.empty()) throw CLI::ValidationError("analyze", "--in is required");
        const std::filesystem::path in(o.in);
        const qrc::CsvTable probe = qrc::read_csv(in);
        std::vector<qrc::AggregateRow> summary;
        if (probe.has_column("trial")) {
            summary = qrc::aggregate(qrc::read_rows_csv(in));
        } else {
            const std::size_t ip = probe.column("preset"), in_ = probe.column("n_qubits"), it = probe.column("tau"),
                              iv = probe.column("V"), io = probe.column("order"), im = probe.column("metric"),
                              imean = probe.column("mean");
            for (const auto& r : probe.rows) {
                qrc::AggregateRow a;
                a.preset = r[ip];
                a.n_qubits = std::stoi(r[in_]);
                a.tau = qrc::parse_real(r[it]);
                a.virtual_nodes = std::stoi(r[iv]);
                a.order = std::stoi(r[io]);
                a.metric = r[im];
                a.mean = qrc::parse_real(r[imean]);
                summary.push_back(std::move(a));
            }
        }
        const auto ratios = qrc::improvement_ratios(summary);
        write_to(o.out, [&](std::ostream& s) { qrc::write_ratio_csv(s, ratios); });
        return 0;
    }
    if (o.kind == "theory_bounds") {
        if (o.a.empty() || o.b.empty() || o.target.empty()) {
            throw CLI::ValidationError("analyze", "theory_bounds needs --a, --b and --target");
        }
        const std::filesystem::path c(o.c);
        const auto analysis =
            qrc::analyze_theory_bounds(o.a, o.b, o.c.empty() ? nullptr : &c, o.target, o.column, !o.no_bias);
        write_to(o.out, [&](std::ostream& s) { qrc::write_theory_csv(s, analysis); });
        return 0;
    }
    throw CLI::ValidationError("--kind", "must be improvement_ratio or theory_bounds");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum reservoir computing experiments"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment sweep");
    run_cmd->add_option("--preset", run.preset, "fig3, fig5, sweep or smoke");
    run_cmd->add_option("--grid", run.grid, "e.g. n=3,4,5;tau=0.5,1;V=1,5,25;order=1-5");
    run_cmd->add_option("--trials", run.trials, "Trials per cell");
    run_cmd->add_option("--seed", run.seed, "Base seed");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: QRC_WORKERS or 1)");
    run_cmd->add_flag("--paper-scale", run.paper_scale, "Use 100 trials per cell");
    run_cmd->add_option("--task", run.task, "narma, mc or both")->check(CLI::IsMember({"narma", "mc", "both"}));
    run_cmd->add_option("--config", run.config, "JSON file whose keys override flags");
    run_cmd->add_flag("--dump-features", run.dump_features, "Write trial-0 training features and targets");
    run_cmd->add_option("--washout", run.washout);
    run_cmd->add_option("--train", run.train);
    run_cmd->add_option("--eval", run.eval);
    run_cmd->add_option("--coupling-scale", run.coupling_scale, "J / Delta");
    run_cmd->add_option("--field", run.field, "h / Delta");
    run_cmd->add_option("--ridge", run.ridge, "Ridge penalty (0 = pseudoinverse)");

    EsnOptions esn;
    auto* esn_cmd = app.add_subcommand("esn", "Run an echo state network baseline");
    esn_cmd->add_option("--mode", esn.mode, "narma_sweep or mc_fixed")
        ->required()
        ->check(CLI::IsMember({"narma_sweep", "mc_fixed"}));
    esn_cmd->add_option("--nodes", esn.nodes, "ESN sizes")->delimiter(',');
    esn_cmd->add_option("--networks", esn.networks, "Networks per size");
    esn_cmd->add_option("--trials", esn.trials, "Input sequences per setting");
    esn_cmd->add_option("--seed", esn.seed, "Base seed");
    esn_cmd->add_option("--out", esn.out, "Output directory");
    esn_cmd->add_option("--workers", esn.workers, "Worker threads (default: QRC_WORKERS or 1)");
    esn_cmd->add_flag("--paper-scale", esn.paper_scale, "Full grid and network counts");
    esn_cmd->add_option("--config", esn.config, "JSON file whose keys override flags");

    AnalyzeOptions analyze;
    auto* an_cmd = app.add_subcommand("analyze", "Derive tables from saved results");
    an_cmd->add_option("--kind", analyze.kind, "improvement_ratio or theory_bounds")
        ->required()
        ->check(CLI::IsMember({"improvement_ratio", "theory_bounds"}));
    an_cmd->add_option("--in", analyze.in, "trials.csv or summary.csv");
    an_cmd->add_option("--out", analyze.out, "Output CSV (default: stdout)");
    an_cmd->add_option("--a", analyze.a, "Feature CSV of reservoir A");
    an_cmd->add_option("--b", analyze.b, "Feature CSV of reservoir B");
    an_cmd->add_option("--c", analyze.c, "Feature CSV of reservoir C");
    an_cmd->add_option("--target", analyze.target, "Target CSV");
    an_cmd->add_option("--column", analyze.column, "Target column");
    an_cmd->add_flag("--no-bias", analyze.no_bias, "Do not append a constant column to each design");

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return do_run(run);
        if (esn_cmd->parsed()) return do_esn(esn);
        return do_analyze(analyze);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
