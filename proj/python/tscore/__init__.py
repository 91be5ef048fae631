# Copyright 2026 The tscore Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Transfer Score metrics for unsupervised domain adaptation."""

import json as _json

from ._tscore import (
    ComputeError,
    IngestError,
    c_entropy,
    compose_transfer_score,
    entropy,
    hopkins_statistic,
    ideal_angle,
    mmd,
    mutual_information,
    pearson,
    proxy_a_distance,
    read_tensor,
    saturation_level,
    select_checkpoint,
    uniformity,
    write_tensor,
)
from . import _tscore

__version__ = "0.1.0"


def score_run(run, m=None, repetitions=5, seed=0, jobs=0):
    """Score every epoch of a run directory or manifest; returns a list of dicts."""
    return _json.loads(_tscore.score_run_json(str(run), m, repetitions, seed, jobs))


def select_epoch(run, tau=3, zeta=0.01, seed=0):
    """Saturation-based checkpoint selection for a run; returns a dict."""
    return _json.loads(_tscore.select_epoch_json(str(run), tau, zeta, seed))


__all__ = [
    "ComputeError",
    "IngestError",
    "c_entropy",
    "compose_transfer_score",
    "entropy",
    "hopkins_statistic",
    "ideal_angle",
    "mmd",
    "mutual_information",
    "pearson",
    "proxy_a_distance",
    "read_tensor",
    "saturation_level",
    "score_run",
    "select_checkpoint",
    "select_epoch",
    "uniformity",
    "write_tensor",
]
