"""Shared fixtures: the replicated estimation study reused across test files."""

import time
import warnings

import numpy as np
import pytest

from crossarfima.errors import CrossArfimaError
from crossarfima.estimators import dcca, dfa, fit_hurst, hxa, sample_ccf
from crossarfima.models import PRESETS, simulate

N_REPS = 100
BASE_SEED = 42
SERIES_LENGTH = 10_000

# experiment protocol: DFA stops at T/20 to stay clear of the finite-size
# saturation regime, DCCA keeps the wider T/5 window, HXA uses lags 1..T/100
DFA_WINDOW = dict(s_min=10, s_max=500, step=10)
DCCA_WINDOW = dict(s_min=10, s_max=2000, step=10)
HXA_WINDOW = dict(tau_min=1, tau_max=100)
CCF_MAX_LAG = 20


def _quiet_fit(make_fluct):
    # failures (all-negative fluctuations, too few points) become NaN rows
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return fit_hurst(make_fluct()).exponent
        except (CrossArfimaError, ValueError):
            return np.nan


@pytest.fixture(scope="session")
def study():
    """Monte Carlo estimates for every preset: 100 reps of T = 1e4, seeds 42..141.

    Per replication and model this records the DFA exponents of both
    margins, the DCCA and HXA cross exponents, and (for preset 1) the
    sample CCF out to lag 20.  Several acceptance checks and the
    preset-ordering tests all read from this one study.
    """
    t0 = time.perf_counter()
    out = {}
    for name, make in PRESETS.items():
        model = make()
        rows = {"dfa_hx": [], "dfa_hy": [], "dcca": [], "hxa": []}
        ccfs = []
        for rep in range(N_REPS):
            s = simulate(model, T=SERIES_LENGTH, seed=BASE_SEED + rep)
            rows["dfa_hx"].append(_quiet_fit(lambda: dfa(s.x, **DFA_WINDOW)))
            rows["dfa_hy"].append(_quiet_fit(lambda: dfa(s.y, **DFA_WINDOW)))
            rows["dcca"].append(_quiet_fit(lambda: dcca(s.x, s.y, **DCCA_WINDOW)))
            rows["hxa"].append(_quiet_fit(lambda: hxa(s.x, s.y, **HXA_WINDOW)))
            if name == "model1":
                ccfs.append(sample_ccf(s.x, s.y, CCF_MAX_LAG).values)
        out[name] = {k: np.asarray(v) for k, v in rows.items()}
        if ccfs:
            out[name]["ccf"] = np.vstack(ccfs)
    out["seconds"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def model3_long_ccf():
    """Sample CCF of one long preset-3 realization (T = 1e6, seed 42)."""
    s = simulate(PRESETS["model3"](), T=1_000_000, seed=42)
    return sample_ccf(s.x, s.y, 100)
