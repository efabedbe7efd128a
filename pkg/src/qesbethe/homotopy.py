"""Continuation seeding: solve the Bethe equations by tracking root sets
from an exactly solvable parameter point, without using oracle eigenvectors.

Supported paths:

* crossed Meixner-Pollaczek family, continuation in beta from 0;
* trigonometric family, continuation in the deformation parameter a from 0.

At the start point the degree-m eigenfunction carries only m finite roots;
the remaining M - m roots of the deformed state sit at infinity.  For the
crossed family the first-order balance of the Bethe equations puts those
escaped roots at x ~ -u/(2 beta) with u running over the zeros of a
generalized Laguerre polynomial of degree M - m and parameter
2m + 2 Re(a1 + a2) - 1, which seeds the first continuation step exactly.
The trigonometric escaped roots are seeded on a geometric q-ladder
z ~ -(abcde) q^{2m + 2k}; legs whose Newton correction fails are simply
dropped, and the caller falls back to oracle seeding for those states.

Start root sets come from the start model's matrix, which is upper
triangular in the graded basis because the start model is exactly solvable;
eigen-coefficients follow from back substitution, not from a QR solver.
"""

from __future__ import annotations

from dataclasses import replace as dc_replace

import numpy as np
import scipy.special

from .errors import NoConvergence, QesError, SingularJacobian
from .hamiltonian import build_matrix
from .models import ModelFamily, ModelSpec
from .numerics import NewtonOptions, PolynomialC, newton_solve, poly_roots
from .spectral import RootSet, canonical_z_from_eta

CONTINUATION_STEPS = 12
STEP_TOL = 1e-10


def _start_spec(spec: ModelSpec) -> ModelSpec:
    params = dict(spec.params)
    if spec.family is ModelFamily.MP_CROSSED:
        params["beta"] = 0.0
    elif spec.family is ModelFamily.TRIG_Q:
        params["a"] = 0.0
    else:
        raise QesError(
            f"no continuation path from an exactly solvable point for "
            f"{spec.family.value}"
        )
    return dc_replace(spec, params=params)


def _intermediate_spec(spec: ModelSpec, t: float) -> ModelSpec:
    params = dict(spec.params)
    if spec.family is ModelFamily.MP_CROSSED:
        params["beta"] = t * spec.real_param("beta")
    else:
        params["a"] = t * spec.real_param("a")
    return dc_replace(spec, params=params)


def _triangular_eigen_polys(spec: ModelSpec) -> list[tuple[complex, PolynomialC]]:
    """Eigenpairs of an exactly solvable model by back substitution on its
    graded-triangular matrix."""
    om = build_matrix(spec)
    t = om.matrix
    out = []
    for m in range(om.dim):
        lam = t[m, m]
        c = np.zeros(om.dim, dtype=complex)
        c[m] = 1.0
        for j in range(m - 1, -1, -1):
            gap = lam - t[j, j]
            if abs(gap) < 1e-12 * max(1.0, abs(lam)):
                raise QesError("start spectrum is degenerate; cannot seed")
            c[j] = np.dot(t[j, j + 1 : m + 1], c[j + 1 : m + 1]) / gap
        out.append((complex(lam), PolynomialC(tuple(c[: m + 1]), "eta")))
    return out


def _far_seeds_mp(spec: ModelSpec, m: int, n: int, beta: float) -> list[complex]:
    sum_re = 2.0 * (spec.param("a1").real + spec.param("a2").real)
    alpha = 2.0 * m + sum_re - 1.0
    nodes, _ = scipy.special.roots_genlaguerre(n, alpha)
    return [complex(-u / (2.0 * beta)) for u in nodes]


def _far_seeds_trig(spec: ModelSpec, m: int, n: int, a_t: float) -> list[complex]:
    q = spec.real_param("q")
    prod = a_t
    for name in ("b", "c", "d", "e"):
        prod *= spec.real_param(name)
    return [complex(-prod * q ** (2 * m + 2 * k)) for k in range(n)]


def _step_newton(spec: ModelSpec, native: np.ndarray, tol: float) -> np.ndarray:
    # local import: bethe imports this module lazily, avoid a hard cycle
    from .bethe import _residual_map

    g = _residual_map(spec)
    units = np.where(np.abs(native) > 1e-250, np.abs(native), 1.0)
    w = newton_solve(
        lambda t: g(native + units * t),
        np.zeros_like(native),
        NewtonOptions(tol=tol, max_iter=60),
    )
    return native + units * w


def homotopy_root_sets(
    spec: ModelSpec, oracle_eigenvalues: list[complex]
) -> dict[int, RootSet]:
    """Root sets obtained by continuation, keyed by the index of the oracle
    eigenvalue each one reproduces.  States whose continuation fails are
    left out."""
    from .bethe import eigenvalue_from_roots, roots_from_native

    if spec.family not in (ModelFamily.MP_CROSSED, ModelFamily.TRIG_Q):
        return {}
    target = (
        spec.real_param("beta")
        if spec.family is ModelFamily.MP_CROSSED
        else spec.real_param("a")
    )
    start = _start_spec(spec)
    try:
        states = _triangular_eigen_polys(start)
    except QesError:
        return {}
    out: dict[int, RootSet] = {}
    taken: dict[int, float] = {}
    for m, (_lam0, poly) in enumerate(states):
        finite = poly_roots(poly) if poly.degree >= 1 else []
        if target == 0.0:
            native = _to_native(spec, finite)
        else:
            n_far = spec.M - m
            t1 = target / CONTINUATION_STEPS
            if spec.family is ModelFamily.MP_CROSSED:
                far = _far_seeds_mp(spec, m, n_far, t1) if n_far else []
                native = np.asarray(finite + far, dtype=complex)
            else:
                far_z = _far_seeds_trig(spec, m, n_far, t1) if n_far else []
                zs = [canonical_z_from_eta(e) for e in finite] + far_z
                native = np.asarray(zs, dtype=complex)
            try:
                for k in range(CONTINUATION_STEPS):
                    spec_t = _intermediate_spec(spec, (k + 1) / CONTINUATION_STEPS)
                    tol = STEP_TOL if k + 1 < CONTINUATION_STEPS else 0.1 * STEP_TOL
                    native = _step_newton(spec_t, native, tol)
            except (NoConvergence, SingularJacobian, QesError):
                continue
        roots = roots_from_native(spec, native)
        try:
            e_val = eigenvalue_from_roots(spec, roots, degree=spec.M)
        except (ValueError, QesError):
            continue
        gaps = [abs(e_val - ev) for ev in oracle_eigenvalues]
        idx = int(np.argmin(gaps))
        # a leg may land on a Bethe configuration not realized by this
        # state (the equations admit more solutions than the spectrum);
        # only keep legs that reproduce an oracle eigenvalue
        if gaps[idx] > 1e-6 * max(1.0, abs(e_val)):
            continue
        if idx in taken and taken[idx] <= gaps[idx]:
            continue
        out[idx] = roots
        taken[idx] = gaps[idx]
    return out


def _to_native(spec: ModelSpec, eta_roots: list[complex]) -> np.ndarray:
    if spec.family is ModelFamily.TRIG_Q:
        return np.asarray([canonical_z_from_eta(e) for e in eta_roots], dtype=complex)
    return np.asarray(eta_roots, dtype=complex)
