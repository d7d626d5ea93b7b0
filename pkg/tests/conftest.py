from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from ffzeta import pipeline as pl
from ffzeta.lfunction import LNModule, reconstruct_L, with_sha
from ffzeta.surface import surface_zeta

settings.register_profile("ffzeta", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ffzeta")

CORPUS = ("constant_e0", "legendre", "e3", "additive_ivstar")


@pytest.fixture(scope="session")
def corpus():
    """name -> (curve, Lang-Neron module) for every bundled curve."""
    out = {}
    for name in CORPUS:
        E, LN, _ = pl.load_curve(f"{name}.json")
        out[name] = (E, LN or LNModule.trivial())
    return out


@pytest.fixture(scope="session")
def lseries(corpus):
    return {name: with_sha(reconstruct_L(E, LN), LN) for name, (E, LN) in corpus.items()}


@pytest.fixture(scope="session")
def surfaces(corpus):
    return {name: surface_zeta(E) for name, (E, _) in corpus.items()}


@pytest.fixture(scope="session")
def reports(corpus, lseries, surfaces):
    # lseries and surfaces warm the point-count cache first
    return {name: pl.verify_curve(E, LN) for name, (E, LN) in corpus.items()}


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
