"""Shared fixtures: canonical states and an in-process CLI runner."""

import numpy as np
import pytest

from steerlab import (
    PureThreeModeParams,
    SamplerConfig,
    standard_form_pure,
    two_mode_squeezed,
    vacuum,
)


@pytest.fixture
def tmsv_half():
    # r = 0.5: cosh 2r = cosh 1
    return two_mode_squeezed(0.5)


@pytest.fixture
def ghz_222():
    return standard_form_pure(PureThreeModeParams(2.0, 2.0, 2.0))


@pytest.fixture
def sf_2_15_15():
    return standard_form_pure(PureThreeModeParams(2.0, 1.5, 1.5))


@pytest.fixture
def vac3():
    return vacuum(3)


@pytest.fixture
def quick_cfg():
    return SamplerConfig(seed=7, count=20)


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI entry point in-process, returning (code, out, err)."""
    from steerlab.cli import main

    def _run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


def random_spd(rng, n):
    """Random symmetric positive definite matrix, for linalg oracles."""
    q = np.linalg.qr(rng.normal(size=(n, n)))[0]
    return q @ np.diag(rng.uniform(0.2, 5.0, size=n)) @ q.T
