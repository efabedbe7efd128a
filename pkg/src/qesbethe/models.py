"""Catalog of the six model families.

Each family is defined by a potential function V(x), a sinusoidal coordinate
eta(x), and a linear-in-eta compensation term alpha_M(x) that carves out the
degree-M invariant polynomial subspace:

    MP_CROSSED      V = (a1+ix)(a2+ix) e^{-i beta}          eta = x
    SEXTIC_I        V = (a+ix)(b+ix)(c+ix)                  eta = x^2
    SEXTIC_II       V = (a+ix)(b+ix)(c+ix)(d+ix)            eta = x^2
    CENTRIFUGAL_I   V = (b..f factors) / (2ix(2ix+1))       eta = x^2
    CENTRIFUGAL_II  V = (a..f factors) / (2ix(2ix+1))       eta = x^2
    TRIG_Q          V = (1-az)..(1-ez) / ((1-z^2)(1-qz^2))  eta = cos x, z = e^{ix}

The conjugate potential V*(x) is the *analytic* conjugate: parameters are
conjugated while x stays a free complex variable.  This convention is
load-bearing: Bethe roots are generally complex, and every residual below
relies on it.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .errors import PoleOfPotential, SectorMismatch, UnsupportedFamily

HALF_EXCLUSION = 1e-6  # centrifugal families reject parameters this close to 1/2
POLE_TOL = 1e-12


class ModelFamily(Enum):
    MP_CROSSED = "mp-crossed"
    SEXTIC_I = "sextic-i"
    SEXTIC_II = "sextic-ii"
    CENTRIFUGAL_I = "centrifugal-i"
    CENTRIFUGAL_II = "centrifugal-ii"
    TRIG_Q = "trig-q"


class Sector(Enum):
    FULL = "full"
    EVEN = "even"
    ODD = "odd"


_PARAM_NAMES: dict[ModelFamily, tuple[str, ...]] = {
    ModelFamily.MP_CROSSED: ("a1", "a2", "beta"),
    ModelFamily.SEXTIC_I: ("a", "b", "c"),
    ModelFamily.SEXTIC_II: ("a", "b", "c", "d"),
    ModelFamily.CENTRIFUGAL_I: ("b", "c", "d", "e", "f"),
    ModelFamily.CENTRIFUGAL_II: ("a", "b", "c", "d", "e", "f"),
    ModelFamily.TRIG_Q: ("a", "b", "c", "d", "e", "q"),
}


@dataclass(frozen=True)
class ModelSpec:
    """Full problem statement: family, parameters, subspace degree, sector.

    ``dropped`` lists numerator factors deleted to realize an exactly
    solvable restriction (Meixner-Pollaczek, Wilson, continuous dual Hahn);
    such specs also run without the compensation term.  Production specs are
    built through :func:`model_spec`, which validates parameter ranges.
    """

    family: ModelFamily
    params: Mapping[str, complex]
    M: int
    sector: Sector = Sector.FULL
    dropped: tuple[str, ...] = ()
    compensated: bool = True

    def param(self, name: str) -> complex:
        return self.params[name]

    def real_param(self, name: str) -> float:
        return float(complex(self.params[name]).real)


def _as_complex(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, complex):
        return v
    raise TypeError(f"expected a number, got {type(v).__name__}")


def _validate(family: ModelFamily, params: dict[str, complex]) -> None:
    if family is ModelFamily.MP_CROSSED:
        for name in ("a1", "a2"):
            if params[name].real <= 0:
                raise ValueError(f"{name} must have positive real part")
        if params["beta"].imag != 0:
            raise ValueError("beta must be real")
    elif family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        for name in _PARAM_NAMES[family]:
            v = params[name]
            if v.imag != 0 or v.real <= 0:
                raise ValueError(f"{name} must be a positive real")
    elif family in (ModelFamily.CENTRIFUGAL_I, ModelFamily.CENTRIFUGAL_II):
        for name in _PARAM_NAMES[family]:
            v = params[name]
            if v.imag != 0 or v.real <= 0:
                raise ValueError(f"{name} must be a positive real")
            if abs(v.real - 0.5) <= HALF_EXCLUSION:
                raise ValueError(
                    f"{name} = {v.real!r} is within {HALF_EXCLUSION:g} of 1/2, "
                    "which cancels the kinematic denominator"
                )
    elif family is ModelFamily.TRIG_Q:
        for name in ("a", "b", "c", "d", "e"):
            v = params[name]
            if v.imag != 0 or not -1.0 < v.real < 1.0:
                raise ValueError(f"{name} must be a real in (-1, 1)")
        qv = params["q"]
        if qv.imag != 0 or not 0.0 < qv.real < 1.0:
            raise ValueError("q must be a real in (0, 1)")


def _validate_sector(family: ModelFamily, M: int, sector: Sector) -> None:
    if M < 0:
        raise ValueError("M must be a non-negative integer")
    if family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        if sector is Sector.FULL:
            raise SectorMismatch("sextic families need an even or odd sector")
        if sector is Sector.EVEN and M % 2 != 0:
            raise SectorMismatch(f"even sector requires even M, got M = {M}")
        if sector is Sector.ODD and M % 2 != 1:
            raise SectorMismatch(f"odd sector requires odd M, got M = {M}")
    elif sector is not Sector.FULL:
        raise SectorMismatch(f"{family.value} admits only the full sector")


def model_spec(
    family: ModelFamily | str,
    *,
    M: int,
    sector: Sector | str | None = None,
    validate: bool = True,
    **params: complex,
) -> ModelSpec:
    """Build and validate a model specification.

    ``validate=False`` bypasses the parameter-range checks (needed by the
    formal-limit tests that pin parameters at excluded values); the sector
    consistency check always runs.
    """
    if isinstance(family, str):
        family = ModelFamily(family)
    if sector is None:
        if family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
            sector = Sector.EVEN if M % 2 == 0 else Sector.ODD
        else:
            sector = Sector.FULL
    elif isinstance(sector, str):
        sector = Sector(sector.lower())
    names = _PARAM_NAMES[family]
    unknown = set(params) - set(names)
    if unknown:
        raise ValueError(f"unknown parameters for {family.value}: {sorted(unknown)}")
    missing = set(names) - set(params)
    if missing:
        raise ValueError(f"missing parameters for {family.value}: {sorted(missing)}")
    cparams = {name: _as_complex(params[name]) for name in names}
    _validate_sector(family, M, sector)
    if validate:
        _validate(family, cparams)
    return ModelSpec(family, cparams, int(M), sector)


def mp_conjugate_pair(a1: complex, beta: float, M: int) -> ModelSpec:
    """Crossed Meixner-Pollaczek model with a2 = conj(a1), the configuration
    under which the Hamiltonian is hermitian and the spectrum real."""
    a1 = complex(a1)
    return model_spec(ModelFamily.MP_CROSSED, M=M, a1=a1, a2=a1.conjugate(), beta=beta)


def drop_factors(spec: ModelSpec, names: tuple[str, ...] | list[str]) -> ModelSpec:
    """Exactly solvable restriction: delete numerator factors from V and
    switch the compensation term off.

    Realizes the one- and two-parameter infinite limits (Meixner-Pollaczek
    from the crossed model, Wilson and continuous dual Hahn from the
    centrifugal models) without catastrophically large parameters.
    """
    names = tuple(names)
    for n in names:
        if n not in _PARAM_NAMES[spec.family] or n in ("beta", "q"):
            raise ValueError(f"cannot drop {n!r} from {spec.family.value}")
    return replace(spec, dropped=tuple(sorted(set(spec.dropped) | set(names))), compensated=False)


def spec_from_json(doc: str | bytes | Mapping[str, Any] | Path) -> ModelSpec:
    """Parse the JSON model document {"family", "params", "M", "sector"?}.

    Complex parameters are [re, im] pairs, real ones plain numbers.
    Unknown keys are rejected at both levels.
    """
    if isinstance(doc, Path):
        doc = doc.read_text()
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, Mapping):
        raise ValueError("model document must be a JSON object")
    allowed = {"family", "params", "M", "sector"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown keys in model document: {sorted(unknown)}")
    for key in ("family", "params", "M"):
        if key not in doc:
            raise ValueError(f"model document is missing {key!r}")
    params_doc = doc["params"]
    if not isinstance(params_doc, Mapping):
        raise ValueError("params must be a JSON object")
    params: dict[str, complex] = {}
    for name, val in params_doc.items():
        if isinstance(val, (int, float)):
            params[name] = complex(val)
        elif isinstance(val, (list, tuple)) and len(val) == 2:
            params[name] = complex(float(val[0]), float(val[1]))
        else:
            raise ValueError(f"parameter {name!r} must be a number or [re, im]")
    m = doc["M"]
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValueError("M must be an integer")
    return model_spec(doc["family"], M=m, sector=doc.get("sector"), **params)


def spec_to_json_dict(spec: ModelSpec) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for name, val in spec.params.items():
        v = complex(val)
        params[name] = v.real if v.imag == 0.0 else [v.real, v.imag]
    return {
        "family": spec.family.value,
        "params": params,
        "M": spec.M,
        "sector": spec.sector.value,
    }


# ---------------------------------------------------------------------------
# Structure helpers shared by the operator / Bethe / wavefunction layers
# ---------------------------------------------------------------------------


def numerator_constants(spec: ModelSpec) -> tuple[complex, ...]:
    """Constants p_k with V-numerator = prod_k (p_k + i x) (x-based families)
    or prod_k (1 - p_k z) (trigonometric family), dropped factors omitted."""
    names = [n for n in _PARAM_NAMES[spec.family] if n not in ("beta", "q")]
    return tuple(spec.params[n] for n in names if n not in spec.dropped)


def v_phase(spec: ModelSpec) -> complex:
    """Constant phase multiplying the numerator of V (only the crossed
    Meixner-Pollaczek model carries one)."""
    if spec.family is ModelFamily.MP_CROSSED:
        return cmath.exp(-1j * spec.params["beta"].real)
    return 1.0 + 0j


def has_kinematic_denominator(spec: ModelFamily | ModelSpec) -> bool:
    family = spec.family if isinstance(spec, ModelSpec) else spec
    return family in (ModelFamily.CENTRIFUGAL_I, ModelFamily.CENTRIFUGAL_II)


def eta(spec: ModelSpec, x: complex) -> complex:
    """Sinusoidal coordinate: x, x^2 or cos x depending on the family."""
    x = complex(x)
    if spec.family is ModelFamily.MP_CROSSED:
        return x
    if spec.family is ModelFamily.TRIG_Q:
        return cmath.cos(x)
    return x * x


def potential_v(spec: ModelSpec, x: complex) -> complex:
    """V(x); raises PoleOfPotential on denominator zeros."""
    x = complex(x)
    if spec.family is ModelFamily.TRIG_Q:
        return potential_v_z(spec, cmath.exp(1j * x))
    num = v_phase(spec)
    for p in numerator_constants(spec):
        num *= p + 1j * x
    if has_kinematic_denominator(spec):
        den = 2j * x * (2j * x + 1.0)
        if abs(den) < POLE_TOL:
            raise PoleOfPotential(f"V(x) pole at x = {x}")
        return num / den
    return num


def potential_v_star(spec: ModelSpec, x: complex) -> complex:
    """Analytic conjugate V(x)*: parameters conjugated, x left free."""
    x = complex(x)
    if spec.family is ModelFamily.TRIG_Q:
        return potential_v_star_z(spec, cmath.exp(1j * x))
    num = v_phase(spec).conjugate()
    for p in numerator_constants(spec):
        num *= p.conjugate() - 1j * x
    if has_kinematic_denominator(spec):
        den = -2j * x * (-2j * x + 1.0)
        if abs(den) < POLE_TOL:
            raise PoleOfPotential(f"V*(x) pole at x = {x}")
        return num / den
    return num


def potential_v_z(spec: ModelSpec, z: complex) -> complex:
    """Trigonometric-family V as a function of z = e^{ix}."""
    if spec.family is not ModelFamily.TRIG_Q:
        raise UnsupportedFamily("z-form potential is defined for trig-q only")
    q = spec.real_param("q")
    den = (1.0 - z * z) * (1.0 - q * z * z)
    if abs(den) < POLE_TOL:
        raise PoleOfPotential(f"V(z) pole at z = {z}")
    num = 1.0 + 0j
    for p in numerator_constants(spec):
        num *= 1.0 - p * z
    return num / den


def potential_v_star_z(spec: ModelSpec, z: complex) -> complex:
    if spec.family is not ModelFamily.TRIG_Q:
        raise UnsupportedFamily("z-form potential is defined for trig-q only")
    if abs(z) < POLE_TOL:
        raise PoleOfPotential("V*(z) needs z != 0")
    return potential_v_z(spec, 1.0 / z)


def compensation_coefficient(spec: ModelSpec) -> complex:
    """Coefficient multiplying eta(x) in the compensation term alpha_M."""
    if not spec.compensated:
        return 0j
    m = spec.M
    fam = spec.family
    if fam is ModelFamily.MP_CROSSED:
        return complex(-2.0 * m * math.sin(spec.real_param("beta")))
    if fam is ModelFamily.SEXTIC_I:
        return complex(2.0 * m)
    if fam is ModelFamily.SEXTIC_II:
        s = sum(spec.real_param(n) for n in ("a", "b", "c", "d"))
        return complex(m * (m - 1 + 2.0 * s))
    if fam is ModelFamily.CENTRIFUGAL_I:
        return complex(m)
    if fam is ModelFamily.CENTRIFUGAL_II:
        s = sum(spec.real_param(n) for n in ("a", "b", "c", "d", "e", "f"))
        return complex(m * (m - 1 + s))
    if fam is ModelFamily.TRIG_Q:
        q = spec.real_param("q")
        prod = 1.0
        for n in ("a", "b", "c", "d", "e"):
            prod *= spec.real_param(n)
        return complex(-2.0 * prod * (1.0 - q**m) / q)
    raise UnsupportedFamily(fam.value)


def compensation_alpha(spec: ModelSpec, x: complex) -> complex:
    """alpha_M(x) = compensation_coefficient * eta(x)."""
    return compensation_coefficient(spec) * eta(spec, x)


def compensation_vanishes(spec: ModelSpec) -> bool:
    """True when the deformation is switched off and the model is exactly
    solvable (restricted specs, beta = 0, or a vanishing q-deformation)."""
    return abs(compensation_coefficient(spec)) < 1e-14 * max(1.0, spec.M)


def sector_dimension(spec: ModelSpec) -> int:
    """dim V_M: M+1 except for the parity-split sextic sectors."""
    _validate_sector(spec.family, spec.M, spec.sector)
    if spec.family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        if spec.sector is Sector.EVEN:
            return spec.M // 2 + 1
        return (spec.M + 1) // 2
    return spec.M + 1


def bethe_root_count(spec: ModelSpec) -> int:
    """Number of Bethe roots in the eigenfunction ansatz for this sector."""
    if spec.family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        return spec.M // 2 if spec.sector is Sector.EVEN else (spec.M - 1) // 2
    return spec.M


@dataclass(frozen=True)
class SymmetricCoefficients:
    """Delta_j with V-numerator(x) = sum_j Delta_j (i x)^j, i.e. Delta_j is
    the elementary symmetric polynomial e_{deg-j} of the parameters."""

    deltas: tuple[complex, ...]

    def __getitem__(self, j: int) -> complex:
        return self.deltas[j]


def symmetric_coefficients(spec: ModelSpec) -> SymmetricCoefficients:
    if spec.family not in (ModelFamily.SEXTIC_II, ModelFamily.CENTRIFUGAL_II):
        raise UnsupportedFamily(
            f"symmetric coefficients are defined for the type-II families, "
            f"not {spec.family.value}"
        )
    names = _PARAM_NAMES[spec.family]
    coeffs = [1.0 + 0j]  # expand prod (p_k + t) in powers of t = ix
    for name in names:
        p = spec.params[name]
        nxt = [0j] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] += c * p
            nxt[k + 1] += c
        coeffs = nxt
    return SymmetricCoefficients(tuple(coeffs))
