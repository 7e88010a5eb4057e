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

#include "qrc/harness.hpp"

#include "qrc/esn.hpp"
#include "qrc/feature_io.hpp"
#include "qrc/parallel.hpp"
#include "qrc/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace qrc {

namespace {

constexpr std::uint64_t tag_system = 0x5359535445ULL;
constexpr std::uint64_t tag_input = 0x494e505554ULL;
constexpr std::uint64_t tag_esn = 0x45534eULL;
constexpr std::uint64_t tag_esn_input = 0x45534e49ULL;

const std::vector<double> appendix_taus{0.5, 1, 2, 3, 4, 8, 16, 32};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return v;
}

// "1,2,5" or "1-5".
std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        const auto dash = item.find('-');
        if (dash != std::string::npos && dash > 0) {
            const int lo = parse_int(std::string_view(item).substr(0, dash));
            const int hi = parse_int(std::string_view(item).substr(dash + 1));
            if (hi < lo) throw std::invalid_argument("empty range '" + item + "'");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(parse_int(item));
        }
    }
    return out;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_real(item));
    return out;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string tau_label(double tau) { return format_real(tau); }

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
}

// Groups of V values that can share one run: each V divides the group maximum.
std::vector<std::vector<int>> virtual_node_groups(const std::vector<int>& vs) {
    const int vmax = *std::max_element(vs.begin(), vs.end());
    if (std::all_of(vs.begin(), vs.end(), [&](int v) { return vmax % v == 0; })) return {vs};
    std::vector<std::vector<int>> out;
    for (int v : vs) out.push_back({v});
    return out;
}

// Columns of a V_run block that correspond to the V-node harvest at times v * tau / V.
Matrix select_virtual_nodes(const Matrix& block, int n_qubits, int v_run, int v) {
    if (v == v_run) return block;
    const int stride = v_run / v;
    Matrix out(block.rows(), static_cast<Eigen::Index>(v) * n_qubits);
    for (int k = 1; k <= v; ++k) {
        out.middleCols(static_cast<Eigen::Index>(k - 1) * n_qubits, n_qubits) =
            block.middleCols(static_cast<Eigen::Index>(k * stride - 1) * n_qubits, n_qubits);
    }
    return out;
}

struct Job {
    int n_qubits;
    double tau;
    std::vector<int> vs;
    int trial;
};

void dump_job_features(const ExperimentConfig& config, const Job& job, int v, const std::vector<Matrix>& blocks,
                       std::span<const double> inputs) {
    const auto dir = config.output_dir / "features";
    prepare_dir(dir);
    const std::string stem = "n" + std::to_string(job.n_qubits) + "_tau" + tau_label(job.tau);
    const PhaseProtocol& p = config.protocol;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        FeatureMatrix fm;
        fm.values = blocks[c].middleRows(p.train_begin(), p.train);
        for (int k = 1; k <= v; ++k)
            for (int l = 1; l <= job.n_qubits; ++l)
                fm.columns.push_back(feature_column_name(static_cast<int>(c) + 1, k, l));
        write_feature_csv(dir / (stem + "_V" + std::to_string(v) + "_s" + std::to_string(c + 1) + ".csv"), fm);
    }
    const auto target_path = dir / ("targets_" + stem + ".csv");
    if (std::filesystem::exists(target_path)) return;
    std::vector<Vector> narma;
    std::string header = "u";
    try {
        for (int order : narma_orders) {
            narma.push_back(narma_targets(NarmaSpec::of_order(order), inputs));
            header += ",narma" + std::to_string(order);
        }
    } catch (const divergence_error&) {
        narma.clear();
        header = "u";
    }
    auto out = open_output(target_path);
    out << header << '\n';
    for (int k = p.train_begin(); k < p.train_begin() + p.train; ++k) {
        out << format_real(inputs[static_cast<std::size_t>(k)]);
        for (const auto& y : narma) out << ',' << format_real(y(k));
        out << '\n';
    }
}

std::vector<ResultRow> run_job(const ExperimentConfig& config, const Job& job) {
    const int max_order = *std::max_element(config.orders.begin(), config.orders.end());
    const int v_run = *std::max_element(job.vs.begin(), job.vs.end());
    const auto inputs = generate_input(config.protocol.total(),
                                       trial_input_seed(config.base_seed, job.n_qubits, job.tau, job.trial));

    std::vector<Matrix> runs;
    for (int c = 0; c < max_order; ++c) {
        QRSystemConfig sys;
        sys.n_qubits = job.n_qubits;
        sys.tau = job.tau;
        sys.virtual_nodes = v_run;
        sys.coupling_scale = config.coupling_scale;
        sys.field = config.field;
        sys.coupling_seed = system_seed(config.base_seed, job.n_qubits, job.tau, job.trial, c + 1);
        runs.push_back(run_system(sys, inputs).values);
    }

    // NARMA divergence depends only on the input, so it is settled before any fit.
    std::vector<TaskKind> kinds = config.tasks;
    bool diverged = false;
    if (std::find(kinds.begin(), kinds.end(), TaskKind::narma_suite) != kinds.end()) {
        try {
            for (int order : narma_orders) {
                NarmaSpec spec = NarmaSpec::of_order(order);
                spec.divergence_bound = config.narma_bound;
                narma_targets(spec, inputs);
            }
        } catch (const divergence_error&) {
            diverged = true;
            kinds.erase(std::remove(kinds.begin(), kinds.end(), TaskKind::narma_suite), kinds.end());
        }
    }

    std::vector<ResultRow> rows;
    for (int v : job.vs) {
        std::vector<Matrix> blocks;
        for (const auto& r : runs) blocks.push_back(select_virtual_nodes(r, job.n_qubits, v_run, v));
        if (config.dump_features && job.trial == 0) dump_job_features(config, job, v, blocks, inputs);

        for (int order : config.orders) {
            auto row = [&](std::string metric, double value) {
                rows.push_back({config.preset, job.n_qubits, job.tau, v, order, job.trial, std::move(metric), value});
            };
            if (diverged) row("diverged", 1.0);
            if (kinds.empty()) continue;
            const Eigen::Index width = static_cast<Eigen::Index>(v) * job.n_qubits;
            Matrix features(static_cast<Eigen::Index>(inputs.size()), width * order);
            for (int c = 0; c < order; ++c) features.middleCols(width * c, width) = blocks[static_cast<std::size_t>(c)];
            try {
                for (const auto& result : evaluate_tasks(features, inputs, kinds, config.protocol, config.ridge))
                    for (auto& [metric, value] : result.metrics()) row(std::move(metric), value);
            } catch (const std::exception&) {
                row("failed", 1.0);
            }
        }
    }
    return rows;
}

bool is_flag_metric(std::string_view m) { return m == "diverged" || m == "failed"; }

nlohmann::ordered_json protocol_json(const PhaseProtocol& p) {
    return {{"washout", p.washout}, {"train", p.train}, {"eval", p.eval}};
}

}  // namespace

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(!n_qubits.empty() && !taus.empty() && !virtual_nodes.empty() && !orders.empty(), "grid has an empty axis");
    for (int n : n_qubits) require(n >= 1 && n <= max_qubits, "n_qubits must lie in [1, 10]");
    for (double t : taus) require(std::isfinite(t) && t > 0.0, "tau must be positive");
    for (int v : virtual_nodes) require(v >= 1 && v <= 1000, "V must lie in [1, 1000]");
    for (int c : orders) require(c >= 1 && c <= 64, "order must lie in [1, 64]");
    require(trials >= 1, "trials must be >= 1");
    require(!tasks.empty(), "no task selected");
    require(workers >= 1, "workers must be >= 1");
    require(ridge >= 0.0, "ridge must be nonnegative");
    require(narma_bound > 0.0, "NARMA bound must be positive");
    require(std::isfinite(coupling_scale) && coupling_scale >= 0.0, "coupling scale must be nonnegative");
    require(std::isfinite(field), "field must be finite");
    protocol.validate();
    if (std::find(tasks.begin(), tasks.end(), TaskKind::memory_capacity) != tasks.end()) {
        require(protocol.washout >= memory_delays - 1, "memory task needs washout >= 150");
    }
}

std::vector<std::string> preset_names() { return {"fig3", "fig5", "sweep", "smoke"}; }

ExperimentConfig experiment_preset(std::string_view name, bool paper_scale) {
    ExperimentConfig c;
    c.preset = std::string(name);
    c.trials = paper_scale ? paper_trials : default_trials;
    c.n_qubits = {5};
    c.virtual_nodes = {1, 5, 25};
    c.orders = {1, 2, 3, 4, 5};
    if (name == "fig3") {
        c.taus = {1.0};
        c.tasks = {TaskKind::memory_capacity};
    } else if (name == "fig5") {
        c.taus = {2.0};
        c.tasks = {TaskKind::narma_suite};
    } else if (name == "sweep") {
        c.n_qubits = {3, 4, 5};
        c.taus = appendix_taus;
        c.tasks = {TaskKind::narma_suite, TaskKind::memory_capacity};
    } else if (name == "smoke") {
        c.n_qubits = {3};
        c.taus = {1.0};
        c.virtual_nodes = {1, 2};
        c.orders = {1, 2};
        c.trials = 2;
        c.protocol = {200, 200, 200};
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

void apply_grid(ExperimentConfig& config, std::string_view grid) {
    for (const auto& part : split(grid, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("grid entry '" + part + "' lacks '='");
        const std::string key = trim(std::string_view(part).substr(0, eq));
        const std::string value = trim(std::string_view(part).substr(eq + 1));
        if (key == "n" || key == "n_qubits" || key == "N") {
            config.n_qubits = parse_int_list(value);
        } else if (key == "tau") {
            config.taus = parse_real_list(value);
        } else if (key == "V" || key == "v" || key == "virtual_nodes") {
            config.virtual_nodes = parse_int_list(value);
        } else if (key == "order" || key == "C") {
            config.orders = parse_int_list(value);
        } else {
            throw std::invalid_argument("unknown grid key '" + key + "'");
        }
    }
    sort_unique(config.n_qubits);
    sort_unique(config.taus);
    sort_unique(config.virtual_nodes);
    sort_unique(config.orders);
    config.preset = "grid";
}

std::vector<TaskKind> parse_task_selection(std::string_view text) {
    if (text == "both") return {TaskKind::narma_suite, TaskKind::memory_capacity};
    return {parse_task_kind(text)};
}

int default_workers() {
    const char* env = std::getenv("QRC_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    try {
        return std::max(1, parse_int(env));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("QRC_WORKERS must be a positive integer");
    }
}

std::uint64_t system_seed(std::uint64_t base, int n_qubits, double tau, int trial, int system) {
    return derive_seed(base, {tag_system, static_cast<std::uint64_t>(n_qubits), double_bits(tau),
                              static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(system)});
}

std::uint64_t trial_input_seed(std::uint64_t base, int n_qubits, double tau, int trial) {
    return derive_seed(base, {tag_input, static_cast<std::uint64_t>(n_qubits), double_bits(tau),
                              static_cast<std::uint64_t>(trial)});
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.n_qubits, a.tau, a.virtual_nodes, a.order, a.trial) <
               std::tie(b.n_qubits, b.tau, b.virtual_nodes, b.order, b.trial);
    });
}

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "preset,n_qubits,tau,V,order,trial,metric,value\n";
    for (const auto& r : rows) {
        out << r.preset << ',' << r.n_qubits << ',' << tau_label(r.tau) << ',' << r.virtual_nodes << ','
            << r.order << ',' << r.trial << ',' << r.metric << ',' << format_real(r.value) << '\n';
    }
}

std::vector<ResultRow> read_rows_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ip = t.column("preset"), in = t.column("n_qubits"), it = t.column("tau"),
                      iv = t.column("V"), io = t.column("order"), itr = t.column("trial"),
                      im = t.column("metric"), ival = t.column("value");
    std::vector<ResultRow> rows;
    rows.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        rows.push_back({r[ip], parse_int(r[in]), parse_real(r[it]), parse_int(r[iv]), parse_int(r[io]),
                        parse_int(r[itr]), r[im], parse_real(r[ival])});
    }
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, int, double, int, int>;
    std::map<Key, std::vector<std::string>> metric_order;
    std::map<std::pair<Key, std::string>, std::vector<double>> values;
    for (const auto& r : rows) {
        if (is_flag_metric(r.metric)) continue;
        const Key key{r.preset, r.n_qubits, r.tau, r.virtual_nodes, r.order};
        auto& bucket = values[{key, r.metric}];
        if (bucket.empty()) metric_order[key].push_back(r.metric);
        bucket.push_back(r.value);
    }
    std::vector<AggregateRow> out;
    for (const auto& [key, metrics] : metric_order) {
        for (const auto& m : metrics) {
            const auto& v = values.at({key, m});
            const double n = static_cast<double>(v.size());
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            AggregateRow a;
            std::tie(a.preset, a.n_qubits, a.tau, a.virtual_nodes, a.order) = key;
            a.metric = m;
            a.mean = mean;
            a.stddev = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            a.count = static_cast<int>(v.size());
            out.push_back(std::move(a));
        }
    }
    return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "preset,n_qubits,tau,V,order,metric,mean,std,count\n";
    for (const auto& r : rows) {
        out << r.preset << ',' << r.n_qubits << ',' << tau_label(r.tau) << ',' << r.virtual_nodes << ','
            << r.order << ',' << r.metric << ',' << format_real(r.mean) << ',' << format_real(r.stddev) << ','
            << r.count << '\n';
    }
}

std::vector<ResultRow> compute_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<Job> jobs;
    for (int n : config.n_qubits)
        for (double tau : config.taus)
            for (const auto& group : virtual_node_groups(config.virtual_nodes))
                for (int trial = 0; trial < config.trials; ++trial) jobs.push_back({n, tau, group, trial});

    std::vector<std::vector<ResultRow>> per_job(jobs.size());
    parallel_for(jobs.size(), config.workers, [&](std::size_t i) { per_job[i] = run_job(config, jobs[i]); });

    std::vector<ResultRow> rows;
    for (auto& j : per_job) rows.insert(rows.end(), std::make_move_iterator(j.begin()), std::make_move_iterator(j.end()));
    sort_rows(rows);
    return rows;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    config.validate();
    prepare_dir(config.output_dir);
    ExperimentOutput out;
    out.trials_csv = config.output_dir / "trials.csv";
    out.summary_csv = config.output_dir / "summary.csv";
    out.manifest_json = config.output_dir / "manifest.json";
    // Fail on an unwritable path before spending time on the sweep.
    open_output(out.trials_csv);

    out.rows = compute_experiment(config);
    out.summary = aggregate(out.rows);
    {
        auto f = open_output(out.trials_csv);
        write_rows_csv(f, out.rows);
    }
    {
        auto f = open_output(out.summary_csv);
        write_aggregate_csv(f, out.summary);
    }

    nlohmann::ordered_json m;
    m["preset"] = config.preset;
    m["grid"] = {{"n_qubits", config.n_qubits},
                 {"tau", config.taus},
                 {"V", config.virtual_nodes},
                 {"order", config.orders}};
    m["trials"] = config.trials;
    m["base_seed"] = config.base_seed;
    m["protocol"] = protocol_json(config.protocol);
    std::vector<std::string> task_names;
    for (TaskKind k : config.tasks) task_names.emplace_back(task_kind_name(k));
    m["tasks"] = task_names;
    m["coupling_scale"] = config.coupling_scale;
    m["field"] = config.field;
    m["ridge"] = config.ridge;
    m["narma_bound"] = config.narma_bound;
    m["workers"] = config.workers;
    m["initial_state"] = "maximally_mixed";
    const int max_order = *std::max_element(config.orders.begin(), config.orders.end());
    auto& seeds = m["seeds"] = nlohmann::ordered_json::array();
    for (int n : config.n_qubits) {
        for (double tau : config.taus) {
            for (int trial = 0; trial < config.trials; ++trial) {
                std::vector<std::uint64_t> couplings;
                for (int c = 1; c <= max_order; ++c) couplings.push_back(system_seed(config.base_seed, n, tau, trial, c));
                seeds.push_back({{"n_qubits", n},
                                 {"tau", tau},
                                 {"trial", trial},
                                 {"input_seed", trial_input_seed(config.base_seed, n, tau, trial)},
                                 {"coupling_seeds", couplings}});
            }
        }
    }
    std::size_t flagged = 0;
    for (const auto& r : out.rows) flagged += is_flag_metric(r.metric) ? 1 : 0;
    m["flagged_rows"] = flagged;
    auto f = open_output(out.manifest_json);
    f << m.dump(2) << '\n';
    return out;
}

EsnMode parse_esn_mode(std::string_view name) {
    if (name == "narma_sweep") return EsnMode::narma_sweep;
    if (name == "mc_fixed") return EsnMode::mc_fixed;
    throw std::invalid_argument("unknown ESN mode '" + std::string(name) + "'");
}

std::string_view esn_mode_name(EsnMode mode) { return mode == EsnMode::narma_sweep ? "narma_sweep" : "mc_fixed"; }

void EsnBaselineConfig::validate() const {
    if (node_counts.empty()) throw std::invalid_argument("no ESN node counts");
    for (int n : node_counts)
        if (n < 1) throw std::invalid_argument("ESN node count must be positive");
    if (networks < 1 || trials < 1) throw std::invalid_argument("networks and trials must be >= 1");
    if (input_scales.empty() || spectral_radii.empty()) throw std::invalid_argument("empty ESN parameter grid");
    for (double s : input_scales)
        if (!(s > 0.0)) throw std::invalid_argument("input scale must be positive");
    for (double r : spectral_radii)
        if (!(r > 0.0)) throw std::invalid_argument("spectral radius must be positive");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    protocol.validate();
    if (mode == EsnMode::mc_fixed && protocol.washout < memory_delays - 1) {
        throw std::invalid_argument("memory task needs washout >= 150");
    }
}

EsnBaselineConfig esn_preset(EsnMode mode, bool paper_scale) {
    EsnBaselineConfig c;
    c.mode = mode;
    if (!paper_scale) c.node_counts = {5, 10, 20, 50, 100};
    if (mode == EsnMode::mc_fixed) {
        c.networks = paper_scale ? 100 : 20;
        c.trials = 1;
        return c;
    }
    c.networks = paper_scale ? 10 : 3;
    c.trials = paper_scale ? 10 : 2;
    if (paper_scale) {
        c.input_scales = {1.0, 0.5, 0.2, 0.1, 0.05, 0.01, 0.005, 0.001};
        c.spectral_radii.clear();
        for (int k = 1; k <= 20; ++k) c.spectral_radii.push_back(0.1 * k);
    } else {
        c.input_scales = {1.0, 0.1, 0.01};
        c.spectral_radii = {0.5, 0.9, 1.3};
    }
    return c;
}

std::vector<EsnRow> compute_esn_baseline(const EsnBaselineConfig& config) {
    config.validate();
    struct Job {
        int n_nodes;
        int network;
    };
    std::vector<Job> jobs;
    for (int n : config.node_counts)
        for (int k = 0; k < config.networks; ++k) jobs.push_back({n, k});
    const std::string mode(esn_mode_name(config.mode));

    std::vector<std::vector<EsnRow>> per_job(jobs.size());
    parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
        const Job& job = jobs[i];
        const auto weight_seed = derive_seed(config.base_seed, {tag_esn, static_cast<std::uint64_t>(job.n_nodes),
                                                                static_cast<std::uint64_t>(job.network)});
        auto input_for = [&](int trial) {
            return generate_input(config.protocol.total(),
                                  derive_seed(config.base_seed, {tag_esn_input, static_cast<std::uint64_t>(job.n_nodes),
                                                                 static_cast<std::uint64_t>(job.network),
                                                                 static_cast<std::uint64_t>(trial)}));
        };
        auto& rows = per_job[i];
        if (config.mode == EsnMode::mc_fixed) {
            const EchoStateNetwork esn({job.n_nodes, config.spectral_radii.front(), config.input_scales.front(),
                                        weight_seed});
            const auto u = input_for(0);
            const auto r = evaluate_features(esn.run(u), u, TaskKind::memory_capacity, config.protocol, config.ridge);
            rows.push_back({mode, job.n_nodes, job.network, "mc", r.memory_capacity});
            return;
        }
        std::map<int, double> best;
        for (int order : narma_orders) best[order] = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> inputs;
        for (int t = 0; t < config.trials; ++t) {
            auto u = input_for(t);
            try {
                for (int order : narma_orders) narma_targets(NarmaSpec::of_order(order), u);
                inputs.push_back(std::move(u));
            } catch (const divergence_error&) {
                rows.push_back({mode, job.n_nodes, job.network, "diverged", 1.0});
            }
        }
        if (inputs.empty()) return;
        for (double radius : config.spectral_radii) {
            for (double scale : config.input_scales) {
                const EchoStateNetwork esn({job.n_nodes, radius, scale, weight_seed});
                std::map<int, double> sum;
                bool ok = true;
                for (const auto& u : inputs) {
                    try {
                        const auto r = evaluate_features(esn.run(u), u, TaskKind::narma_suite, config.protocol,
                                                         config.ridge);
                        for (const auto& [order, v] : r.nmse) sum[order] += v;
                    } catch (const std::exception&) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                for (auto& [order, v] : sum) best[order] = std::min(best[order], v / static_cast<double>(inputs.size()));
            }
        }
        for (const auto& [order, v] : best)
            if (std::isfinite(v)) rows.push_back({mode, job.n_nodes, job.network, "nmse_narma" + std::to_string(order), v});
    });

    std::vector<EsnRow> rows;
    for (auto& j : per_job) rows.insert(rows.end(), j.begin(), j.end());
    return rows;
}

EsnOutput run_esn_baseline(const EsnBaselineConfig& config) {
    config.validate();
    prepare_dir(config.output_dir);
    EsnOutput out;
    const std::string stem = "esn_" + std::string(esn_mode_name(config.mode));
    out.rows_csv = config.output_dir / (stem + ".csv");
    out.summary_csv = config.output_dir / (stem + "_summary.csv");
    open_output(out.rows_csv);
    out.rows = compute_esn_baseline(config);
    {
        auto f = open_output(out.rows_csv);
        f << "mode,n_nodes,network,metric,value\n";
        for (const auto& r : out.rows)
            f << r.mode << ',' << r.n_nodes << ',' << r.network << ',' << r.metric << ',' << format_real(r.value) << '\n';
    }
    std::map<std::pair<int, std::string>, std::vector<double>> groups;
    for (const auto& r : out.rows)
        if (!is_flag_metric(r.metric)) groups[{r.n_nodes, r.metric}].push_back(r.value);
    auto f = open_output(out.summary_csv);
    f << "mode,n_nodes,metric,mean,std,count\n";
    for (const auto& [key, v] : groups) {
        const double n = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        f << esn_mode_name(config.mode) << ',' << key.first << ',' << key.second << ',' << format_real(mean) << ','
          << format_real(v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0) << ',' << v.size() << '\n';
    }
    return out;
}

std::vector<RatioRow> improvement_ratios(const std::vector<AggregateRow>& summary) {
    using Cell = std::tuple<std::string, int, double, int, int, std::string>;
    std::map<Cell, double> mean;
    for (const auto& a : summary) {
        if (a.metric != "mc" && a.metric.rfind("nmse_narma", 0) != 0) continue;
        mean[{a.preset, a.n_qubits, a.tau, a.virtual_nodes, a.order, a.metric}] = a.mean;
    }
    std::vector<RatioRow> out;
    auto emit = [&](std::string comparison, const Cell& base, const Cell& cell) {
        const auto b = mean.find(base), v = mean.find(cell);
        if (b == mean.end() || v == mean.end() || !(b->second > 0.0)) return;
        const auto& [preset, n, tau, vn, order, metric] = cell;
        const MetricKind kind = metric == "mc" ? MetricKind::mc : MetricKind::nmse;
        out.push_back({std::move(comparison), preset, n, tau, vn, order, metric, b->second, v->second,
                       improvement_ratio(b->second, v->second, kind)});
    };
    for (const auto& [cell, value] : mean) {
        const auto& [preset, n, tau, vn, order, metric] = cell;
        emit("spatial", {preset, n, tau, vn, 1, metric}, cell);
    }
    const std::array<std::pair<int, int>, 3> temporal{{{1, 5}, {1, 25}, {5, 25}}};
    for (const auto& [cell, value] : mean) {
        const auto& [preset, n, tau, vn, order, metric] = cell;
        if (order != 1) continue;
        for (const auto& [from, to] : temporal) {
            if (vn != to) continue;
            emit("temporal_" + std::to_string(from) + "_" + std::to_string(to), {preset, n, tau, from, 1, metric}, cell);
        }
    }
    return out;
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows) {
    out << "comparison,preset,n_qubits,tau,V,order,metric,baseline,value,ratio\n";
    for (const auto& r : rows) {
        out << r.comparison << ',' << r.preset << ',' << r.n_qubits << ',' << tau_label(r.tau) << ','
            << r.virtual_nodes << ',' << r.order << ',' << r.metric << ',' << format_real(r.baseline) << ','
            << format_real(r.value) << ',' << format_real(r.ratio) << '\n';
    }
}

TheoryAnalysis analyze_theory_bounds(const std::filesystem::path& a, const std::filesystem::path& b,
                                     const std::filesystem::path* c, const std::filesystem::path& target_csv,
                                     std::string_view target_column, bool bias) {
    auto load = [&](const std::filesystem::path& p) {
        Matrix x = read_feature_csv(p).values;
        if (!bias) return x;
        Matrix with(x.rows(), x.cols() + 1);
        with.col(0).setOnes();
        with.rightCols(x.cols()) = x;
        return with;
    };
    const CsvTable targets = read_csv(target_csv);
    const std::size_t col = targets.column(target_column);
    Vector y(static_cast<Eigen::Index>(targets.rows.size()));
    for (std::size_t k = 0; k < targets.rows.size(); ++k) y(static_cast<Eigen::Index>(k)) = parse_real(targets.rows[k][col]);

    const RegressionInstance inst{load(a), y};
    const Matrix xb = load(b);
    TheoryAnalysis out;
    if (c == nullptr) {
        out.combinations.push_back({"A+B", combination_bounds(inst, xb)});
        return out;
    }
    const PartnerDecision d = select_partner(inst, xb, load(*c));
    out.combinations.push_back({"A+B", d.with_b});
    out.combinations.push_back({"A+C", d.with_c});
    out.decision = std::string(partner_choice_name(d.choice));
    return out;
}

void write_theory_csv(std::ostream& out, const TheoryAnalysis& analysis) {
    out << "combination,residual_a,residual_b,residual_combined,lambda_a,lambda_b,target_norm_sq,"
           "residual_lower,residual_upper,contains,decision\n";
    for (const auto& row : analysis.combinations) {
        const auto& x = row.bounds;
        out << row.combination << ',' << format_real(x.residual_a) << ',' << format_real(x.residual_b) << ','
            << format_real(x.residual_combined) << ',' << format_real(x.lambda_a) << ',' << format_real(x.lambda_b)
            << ',' << format_real(x.target_norm_sq) << ',' << format_real(x.residual_lower) << ','
            << format_real(x.residual_upper) << ',' << (x.contains(x.residual_combined, 1e-9) ? 1 : 0) << ','
            << analysis.decision << '\n';
    }
}

}  // namespace qrc
