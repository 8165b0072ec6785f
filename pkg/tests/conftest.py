"""Shared fixtures: the expensive glued/doubled/rescaled objects are built
once per session and reused across test modules."""

from __future__ import annotations

import numpy as np
import pytest

from photonlab.conformal import conformal_transform
from photonlab.gluing import double, glue_neck
from photonlab.pipeline import run_rigidity_pipeline
from photonlab.radial import make_schwarzschild_family


@pytest.fixture(scope="session")
def exterior_m1():
    return make_schwarzschild_family(1.0, 3.0, 100.0)


@pytest.fixture(scope="session")
def glued_m1(exterior_m1):
    return glue_neck(exterior_m1, 3.0)


@pytest.fixture(scope="session")
def doubled_m1(glued_m1):
    return double(glued_m1)


@pytest.fixture(scope="session")
def conformal_m1(doubled_m1):
    return conformal_transform(doubled_m1)


@pytest.fixture(scope="session")
def pipeline_m1(exterior_m1):
    return run_rigidity_pipeline(exterior_m1)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260825)
