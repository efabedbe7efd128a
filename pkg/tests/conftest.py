"""Shared draw helpers for the randomized sweeps."""

import numpy as np
import pytest

from qesbethe import model_spec

ALL_FAMILIES = (
    "mp-crossed",
    "sextic-i",
    "sextic-ii",
    "centrifugal-i",
    "centrifugal-ii",
    "trig-q",
)


def draw_params(family: str, rng: np.random.Generator) -> dict:
    """Random valid parameters, kept away from validation boundaries."""
    if family == "mp-crossed":
        return {
            "a1": complex(rng.uniform(0.4, 2.5), rng.uniform(-1.0, 1.0)),
            "a2": complex(rng.uniform(0.4, 2.5), rng.uniform(-1.0, 1.0)),
            "beta": float(rng.uniform(-1.2, 1.2)),
        }
    if family == "sextic-i":
        return {n: float(rng.uniform(0.3, 3.0)) for n in "abc"}
    if family == "sextic-ii":
        return {n: float(rng.uniform(0.3, 3.0)) for n in "abcd"}
    if family in ("centrifugal-i", "centrifugal-ii"):
        names = "bcdef" if family == "centrifugal-i" else "abcdef"
        params = {}
        for n in names:
            v = 0.5
            while abs(v - 0.5) < 0.05:
                v = float(rng.uniform(0.3, 3.0))
            params[n] = v
        return params
    if family == "trig-q":
        params = {
            n: float(rng.uniform(0.1, 0.85)) * float(rng.choice([-1.0, 1.0]))
            for n in "abcde"
        }
        params["q"] = float(rng.uniform(0.3, 0.8))
        return params
    raise ValueError(family)


def spec_for(family: str, M: int, rng: np.random.Generator):
    if family.startswith("sextic"):
        sector = "even" if M % 2 == 0 else "odd"
    else:
        sector = "full"
    return model_spec(family, M=M, sector=sector, **draw_params(family, rng))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
