import warnings

import numpy as np
import pytest

import levicat


@pytest.fixture(scope="session")
def demo_cfg() -> levicat.Config:
    """The bundled reference scenario, loaded once with its warning silenced."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", levicat.MassOverrideWarning)
        return levicat.demo_config()


@pytest.fixture(scope="session")
def demo_scales(demo_cfg) -> levicat.DerivedScales:
    return demo_cfg.scales()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
