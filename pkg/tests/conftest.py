# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.

"""
Shared fixtures for the nplcs-check test suite.
"""

import numpy as np
import pytest

from nplcs.cli.fixtures import gadget, run6
from nplcs.config import set_active_config


@pytest.fixture(autouse=True)
def testing_config():
    """Run every test under the testing configuration."""
    set_active_config("testing")
    yield
    set_active_config(None)


@pytest.fixture
def run6_model():
    return run6()


@pytest.fixture
def run6_lcs(run6_model):
    return run6_model.lcs


@pytest.fixture
def gadget_model():
    return gadget(["a", "b"])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def model_file(tmp_path, run6_model):
    """RUN6 written to a model file."""
    from nplcs.cli.formats import model_to_text

    path = tmp_path / "run6.lcs"
    path.write_text(model_to_text(run6_model, "run6"), encoding="utf-8")
    return path
