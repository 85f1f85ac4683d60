import time

import pytest

from kerrcat.fock import compare_with_closed_form
from kerrcat.lossy_kerr import EvolutionParams

ORACLE_ALPHAS = (1.0, 2.0, 3.0)


@pytest.fixture(scope="session")
def oracle_timed():
    """Fock-oracle comparisons at alpha0 = alpha, Gamma = 0.0125, with the total
    wall time (a minute or two)."""
    runs = {}
    start = time.perf_counter()
    for alpha in ORACLE_ALPHAS:
        p = EvolutionParams.from_ratio(alpha, alpha, 0.0125)
        runs[alpha] = compare_with_closed_form(p, sign="+")
    return runs, time.perf_counter() - start


@pytest.fixture(scope="session")
def oracle_runs(oracle_timed):
    return oracle_timed[0]
