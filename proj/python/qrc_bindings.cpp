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

#include "qrc/esn.hpp"
#include "qrc/harness.hpp"
#include "qrc/readout.hpp"
#include "qrc/reservoir.hpp"
#include "qrc/tasks.hpp"
#include "qrc/theory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace qrc;

namespace {

py::dict task_result_dict(const TaskResult& r) {
    py::dict d;
    d["kind"] = std::string(task_kind_name(r.kind));
    d["nmse"] = r.nmse;
    d["narma_train_rss"] = r.narma_train_rss;
    d["memory_function"] = r.memory_function;
    d["delay_train_rss"] = r.delay_train_rss;
    d["memory_capacity"] = r.memory_capacity;
    d["warnings"] = r.warnings;
    return d;
}

py::dict bounds_dict(const CombinationBounds& b) {
    py::dict d;
    d["residual_a"] = b.residual_a;
    d["residual_b"] = b.residual_b;
    d["residual_combined"] = b.residual_combined;
    d["lambda_a"] = b.lambda_a;
    d["lambda_b"] = b.lambda_b;
    d["residual_lower"] = b.residual_lower;
    d["residual_upper"] = b.residual_upper;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum reservoir computing simulator.";

    py::register_exception<divergence_error>(m, "DivergenceError", PyExc_RuntimeError);

    py::class_<QRSystemConfig>(m, "QRSystemConfig")
        .def(py::init([](int n_qubits, double tau, int virtual_nodes, double coupling_scale, double field,
                         std::uint64_t coupling_seed, int input_qubit) {
                 QRSystemConfig c{n_qubits, tau, virtual_nodes, coupling_scale, field, coupling_seed, input_qubit};
                 c.validate();
                 return c;
             }),
             py::arg("n_qubits") = 5, py::arg("tau") = 1.0, py::arg("virtual_nodes") = 1,
             py::arg("coupling_scale") = 1.0, py::arg("field") = 1.0, py::arg("coupling_seed") = 0,
             py::arg("input_qubit") = 0)
        .def_readwrite("n_qubits", &QRSystemConfig::n_qubits)
        .def_readwrite("tau", &QRSystemConfig::tau)
        .def_readwrite("virtual_nodes", &QRSystemConfig::virtual_nodes)
        .def_readwrite("coupling_scale", &QRSystemConfig::coupling_scale)
        .def_readwrite("field", &QRSystemConfig::field)
        .def_readwrite("coupling_seed", &QRSystemConfig::coupling_seed)
        .def_readwrite("input_qubit", &QRSystemConfig::input_qubit)
        .def_property_readonly("node_count", &QRSystemConfig::node_count);

    m.def(
        "ising_couplings",
        [](int n_qubits, double coupling_scale, double field, std::uint64_t seed) {
            return build_ising_hamiltonian(n_qubits, coupling_scale, field, seed).couplings;
        },
        py::arg("n_qubits"), py::arg("coupling_scale") = 1.0, py::arg("field") = 1.0, py::arg("seed") = 0);

    m.def(
        "run_ensemble",
        [](const std::vector<QRSystemConfig>& systems, const std::vector<double>& inputs, int workers) {
            const auto fm = run_ensemble({systems}, inputs, {}, workers);
            return py::make_tuple(fm.values, fm.columns);
        },
        py::arg("systems"), py::arg("inputs"), py::arg("workers") = 1,
        "Returns (features, column_names) for systems driven by a common input.");

    m.def("generate_input", &generate_input, py::arg("length"), py::arg("seed"));
    m.def(
        "narma_targets",
        [](int order, const std::vector<double>& inputs, double bound) {
            auto spec = NarmaSpec::of_order(order);
            spec.divergence_bound = bound;
            return narma_targets(spec, inputs);
        },
        py::arg("order"), py::arg("inputs"), py::arg("bound") = 1e3);
    m.def("delay_targets", &delay_targets, py::arg("inputs"), py::arg("delay"));

    m.def(
        "fit",
        [](const Matrix& features, const Vector& targets, double ridge) {
            const auto w = fit(features, targets, ridge);
            return py::make_tuple(w.bias, w.weights);
        },
        py::arg("features"), py::arg("targets"), py::arg("ridge") = 0.0, "Returns (bias, weights).");
    m.def(
        "predict",
        [](double bias, const Vector& weights, const Matrix& features) {
            return predict(ReadoutWeights{bias, weights}, features);
        },
        py::arg("bias"), py::arg("weights"), py::arg("features"));
    m.def("nmse", &nmse, py::arg("predictions"), py::arg("targets"));
    m.def("memory_function", &memory_function, py::arg("predictions"), py::arg("targets"));

    m.def(
        "evaluate_features",
        [](const Matrix& features, const std::vector<double>& inputs, const std::string& kind, int washout, int train,
           int eval, double ridge) {
            return task_result_dict(
                evaluate_features(features, inputs, parse_task_kind(kind), PhaseProtocol{washout, train, eval}, ridge));
        },
        py::arg("features"), py::arg("inputs"), py::arg("kind"), py::arg("washout") = 2000, py::arg("train") = 2000,
        py::arg("eval") = 2000, py::arg("ridge") = 0.0);

    m.def(
        "combination_bounds",
        [](const Matrix& a, const Vector& y, const Matrix& b) { return bounds_dict(combination_bounds({a, y}, b)); },
        py::arg("a"), py::arg("target"), py::arg("b"));
    m.def(
        "select_partner",
        [](const Matrix& a, const Vector& y, const Matrix& b, const Matrix& c) {
            const auto d = select_partner({a, y}, b, c);
            return py::make_tuple(std::string(partner_choice_name(d.choice)), bounds_dict(d.with_b),
                                  bounds_dict(d.with_c));
        },
        py::arg("a"), py::arg("target"), py::arg("b"), py::arg("c"));
    m.def(
        "residual_sq", [](const Matrix& x, const Vector& y) { return residual_sq({x, y}); }, py::arg("design"),
        py::arg("target"));

    m.def(
        "esn_run",
        [](int n_nodes, double spectral_radius, double input_scale, std::uint64_t seed,
           const std::vector<double>& inputs) {
            return esn_run({n_nodes, spectral_radius, input_scale, seed}, inputs).values;
        },
        py::arg("n_nodes"), py::arg("spectral_radius"), py::arg("input_scale"), py::arg("seed"), py::arg("inputs"));

    m.def("preset_names", &preset_names);
    m.def(
        "run_experiment",
        [](const std::string& preset, std::optional<std::string> grid, std::optional<int> trials,
           std::uint64_t seed, const std::filesystem::path& out, int workers) {
            auto c = experiment_preset(preset);
            if (grid) apply_grid(c, *grid);
            if (trials) c.trials = *trials;
            c.base_seed = seed;
            c.output_dir = out;
            c.workers = workers;
            ExperimentOutput o;
            {
                py::gil_scoped_release release;
                o = run_experiment(c);
            }
            py::list rows;
            for (const auto& r : o.rows)
                rows.append(py::make_tuple(r.n_qubits, r.tau, r.virtual_nodes, r.order, r.trial, r.metric, r.value));
            return py::make_tuple(rows, o.trials_csv, o.summary_csv);
        },
        py::arg("preset") = "smoke", py::arg("grid") = py::none(), py::arg("trials") = py::none(),
        py::arg("seed") = 0, py::arg("out") = "results", py::arg("workers") = 1,
        "Runs a harness preset; returns (rows, trials_csv, summary_csv).");
}
