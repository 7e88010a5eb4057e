# Copyright 2026 The qrcsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv

import numpy as np
import pytest

import qrcsim


def test_couplings_symmetric():
    j = qrcsim.ising_couplings(4, seed=3)
    assert j.shape == (4, 4)
    np.testing.assert_allclose(j, j.T)
    assert np.all(np.diag(j) == 0)
    assert np.abs(j).max() <= 0.5


def test_run_ensemble_shapes_and_bounds():
    u = qrcsim.generate_input(50, 1)
    systems = [qrcsim.QRSystemConfig(n_qubits=3, virtual_nodes=2, coupling_seed=s) for s in (1, 2)]
    x, cols = qrcsim.run_ensemble(systems, u)
    assert x.shape == (50, 12)
    assert cols[0] == "s1_v1_q1" and cols[-1] == "s2_v2_q3"
    assert np.abs(x).max() <= 1.0 + 1e-12


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        qrcsim.QRSystemConfig(n_qubits=0)


def test_fit_recovers_linear_map():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 3))
    y = 0.5 + x @ np.array([1.0, -2.0, 3.0])
    bias, w = qrcsim.fit(x, y)
    assert bias == pytest.approx(0.5)
    np.testing.assert_allclose(w, [1.0, -2.0, 3.0], atol=1e-10)
    assert qrcsim.nmse(qrcsim.predict(bias, w, x), y) < 1e-20


def test_memory_task_on_small_reservoir():
    u = qrcsim.generate_input(600, 4)
    x, _ = qrcsim.run_ensemble([qrcsim.QRSystemConfig(n_qubits=3, virtual_nodes=3, coupling_seed=5)], u)
    r = qrcsim.evaluate_features(x, u, "memory_capacity", washout=200, train=200, eval=200)
    assert len(r["memory_function"]) == 151
    assert 0.0 < r["memory_capacity"] <= 151.0


def test_narma_divergence_is_typed():
    assert qrcsim.narma_targets(2, [0.5] * 10).shape == (10,)
    with pytest.raises(qrcsim.DivergenceError):
        qrcsim.narma_targets(2, [0.5] * 10, bound=1e-6)
    with pytest.raises(ValueError):
        qrcsim.narma_targets(3, [0.5])


def test_counterexample_bounds():
    y = np.ones(3)
    a = np.array([[0.25], [1.0], [0.0]])
    b = np.array([[1.0], [0.0], [0.0]])
    c = np.array([[0.0], [1.0], [-1.0]])
    choice, with_b, with_c = qrcsim.select_partner(a, y, b, c)
    assert choice != "b"
    assert with_b["residual_combined"] == pytest.approx(1.0)
    assert with_c["residual_combined"] == pytest.approx(2.0 / 9.0)
    assert with_b["residual_lower"] <= 1.0 <= with_b["residual_upper"]


def test_esn_states_in_range():
    x = qrcsim.esn_run(20, 0.9, 0.01, 1, qrcsim.generate_input(30, 2))
    assert x.shape == (30, 20)
    assert np.abs(x).max() < 1.0


def test_smoke_experiment_writes_csv(tmp_path):
    assert "smoke" in qrcsim.preset_names()
    rows, trials_csv, summary_csv = qrcsim.run_experiment("smoke", trials=1, out=str(tmp_path))
    assert rows
    with open(trials_csv) as f:
        header = next(csv.reader(f))
    assert header == ["preset", "n_qubits", "tau", "V", "order", "trial", "metric", "value"]
    assert summary_csv.exists()
