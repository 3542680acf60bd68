"""Paths to the small data files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_dir() -> Path:
    return Path(str(resources.files("swncurriculum") / "data"))


def swn_path() -> Path:
    return data_dir() / "swn_fixture.txt"


def sst_dir() -> Path:
    return data_dir() / "sst"


def glove_path() -> Path:
    return data_dir() / "glove_fixture.txt"


def fixture_config(**overrides):
    from .experiment import ExperimentConfig
    cfg = dict(swn_path=str(swn_path()), sst_dir=str(sst_dir()),
               embeddings_path=str(glove_path()))
    cfg.update(overrides)
    return ExperimentConfig(**cfg)
