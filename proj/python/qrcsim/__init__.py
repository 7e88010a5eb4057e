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
"""Quantum reservoir computing simulator."""

from qrcsim._core import (
    DivergenceError,
    QRSystemConfig,
    combination_bounds,
    delay_targets,
    esn_run,
    evaluate_features,
    fit,
    generate_input,
    ising_couplings,
    memory_function,
    narma_targets,
    nmse,
    predict,
    preset_names,
    residual_sq,
    run_ensemble,
    run_experiment,
    select_partner,
)

__all__ = [
    "DivergenceError",
    "QRSystemConfig",
    "combination_bounds",
    "delay_targets",
    "esn_run",
    "evaluate_features",
    "fit",
    "generate_input",
    "ising_couplings",
    "memory_function",
    "narma_targets",
    "nmse",
    "predict",
    "preset_names",
    "residual_sq",
    "run_ensemble",
    "run_experiment",
    "select_partner",
]
