# Copyright (c) 2026 BiasFST Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Likelihood-ratio n-gram boosting for shallow-fusion decoding."""

from ._core import (
    BoostingFst,
    BoostTable,
    Error,
    LanguageModel,
    SubwordInventory,
    build_boost_table,
    build_fst,
    build_inventory,
    compute_wer,
    interpolate,
    llr_score,
    oracle_wer,
    read_arpa,
    read_boost_table,
    run_cli,
    train_lm,
    werr,
)

__all__ = [
    "BoostingFst",
    "BoostTable",
    "Error",
    "LanguageModel",
    "SubwordInventory",
    "build_boost_table",
    "build_fst",
    "build_inventory",
    "compute_wer",
    "interpolate",
    "llr_score",
    "oracle_wer",
    "read_arpa",
    "read_boost_table",
    "run_cli",
    "train_lm",
    "werr",
]

__version__ = "0.1.0"
