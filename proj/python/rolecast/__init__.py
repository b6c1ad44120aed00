# Copyright 2026 The Rolecast Authors.
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

"""Male, female or brand: role classification of social media accounts."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    Corpus,
    DataError,
    Error,
    Model,
    Resources,
    generate_synthetic,
    metrics,
)

__all__ = [
    "ConfigError",
    "Corpus",
    "DataError",
    "Error",
    "Model",
    "Resources",
    "cross_validate",
    "default_config",
    "generate_synthetic",
    "load_dataset",
    "load_model",
    "metrics",
    "train",
]


def default_config():
    return _json.loads(_core.default_config())


def load_dataset(path, require_labels=False, min_tweets=1):
    return Corpus.load(str(path), require_labels, min_tweets)


def train(corpus, resources, **config):
    """Trains a model. Keyword arguments override default_config() keys."""
    return Model.train(corpus, resources, _json.dumps(config) if config else "")


def load_model(path):
    with open(path, encoding="utf-8") as f:
        return Model.from_json(f.read())


def cross_validate(corpus, resources, n_folds=10, **config):
    text = _core.cross_validate(corpus, resources, _json.dumps(config) if config else "", n_folds)
    return _json.loads(text)
