import numpy as np
import pytest

import topopolariton as tp

REPORT: list[str] = []


@pytest.fixture
def report():
    """Collects one summary line per acceptance criterion."""
    return REPORT.append


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)


@pytest.fixture
def fig2():
    return tp.preset("fig2")


def random_params(rng: np.random.Generator, n_max: int = 8, gamma0_zero: bool = False) -> tp.SystemParams:
    n = int(rng.integers(1, n_max + 1))
    return tp.SystemParams(
        g=rng.uniform(0, 30),
        kappa=rng.uniform(0.1, 30),
        gamma0=0.0 if gamma0_zero else rng.uniform(0.1, 3),
        Gamma=rng.uniform(0.5, 10),
        J0=rng.uniform(0, 50),
        phi_dim=rng.uniform(0, np.pi),
        n_atoms=n,
        varphi=rng.uniform(0, 2 * np.pi),
        phi1=rng.uniform(0, 2 * np.pi),
        detunings=tuple(rng.uniform(-5, 5, n)),
        unit="Gamma" if gamma0_zero else "gamma0",
    )
