"""Bethe ansatz equations in cross-multiplied form, Newton polishing of
root sets, and the closed-form eigenvalue-from-roots expressions.

Each family's equation is evaluated as a pair (L_j, R_j) of denominator-free
products; the reported residual is |L_j - R_j| / max(|L_j|, |R_j|, eps).
Cross-multiplication removes every kinematic pole and all branch-cut
ambiguity, which keeps the Newton iteration smooth in the sector-native
variables (eta for the x^2-based even sectors, x for the linear and odd
sectors, z for the trigonometric family).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from dataclasses import replace as dc_replace

import numpy as np

from .errors import DegenerateRoots, NoConvergence, SingularJacobian, UnsupportedFamily
from .hamiltonian import build_matrix
from .models import (
    ModelFamily,
    ModelSpec,
    Sector,
    bethe_root_count,
    compensation_vanishes,
    numerator_constants,
    symmetric_coefficients,
    v_phase,
)
from .numerics import NewtonOptions, newton_solve
from .spectral import (
    RootSet,
    canonical_x_from_eta,
    extract_roots,
    oracle_spectrum,
)

ROOT_SEPARATION_TOL = 1e-10
POLISH_TARGET = 1e-11
SAFE_EXTRACT_FLOOR = 1e-10
EPS = 1e-300


@dataclass(frozen=True)
class SolutionFlags:
    polished: bool = False
    degenerate: bool = False
    jacobian_singular: bool = False


@dataclass(frozen=True)
class BetheSolution:
    """One eigenstate: roots, both eigenvalue routes, and their gap."""

    spec: ModelSpec
    roots: RootSet
    E_formula: complex
    E_oracle: complex
    residuals: tuple[float, ...]
    flags: SolutionFlags
    seed_source: str = "oracle"

    @property
    def residual_max(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def discrepancy(self) -> float:
        return abs(self.E_formula - self.E_oracle)


# ---------------------------------------------------------------------------
# Cross-multiplied residuals
# ---------------------------------------------------------------------------


def _pairwise_separation(values: tuple[complex, ...]) -> float:
    """Smallest relative pairwise distance (roots legitimately span many
    orders of magnitude, so an absolute gap would misfire near zero)."""
    sep = math.inf
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            scale = max(abs(values[i]), abs(values[j]), EPS)
            sep = min(sep, abs(values[i] - values[j]) / scale)
    return sep


def _bae_sides_x(spec: ModelSpec, xs: tuple[complex, ...]) -> list[tuple[complex, complex]]:
    """(L_j, R_j) for the x-based families."""
    fam = spec.family
    consts = numerator_constants(spec)
    pair_product = fam is not ModelFamily.MP_CROSSED
    odd = spec.sector is Sector.ODD
    sextic_kinematic = fam in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II)
    phase2 = v_phase(spec).conjugate() ** 2  # e^{2 i beta} for the crossed model
    sides = []
    for j, xj in enumerate(xs):
        lhs_num = 1.0 + 0j
        lhs_den = 1.0 + 0j
        for l, xl in enumerate(xs):
            if l == j:
                continue
            if pair_product:
                lhs_num *= (xj - xl - 1j) * (xj + xl - 1j)
                lhs_den *= (xj - xl + 1j) * (xj + xl + 1j)
            else:
                lhs_num *= xj - xl - 1j
                lhs_den *= xj - xl + 1j
        if odd:
            lhs_num *= xj - 1j
            lhs_den *= xj + 1j
        rhs_num = phase2
        rhs_den = 1.0 + 0j
        for p in consts:
            rhs_num *= p.conjugate() - 1j * xj
            rhs_den *= p + 1j * xj
        if sextic_kinematic:
            rhs_num *= 2.0 * xj + 1j
            rhs_den *= 2.0 * xj - 1j
        sides.append((lhs_num * rhs_den, rhs_num * lhs_den))
    return sides


def _bae_sides_z(spec: ModelSpec, zs: tuple[complex, ...]) -> list[tuple[complex, complex]]:
    """(L_j, R_j) for the trigonometric family, in the z variables."""
    q = spec.real_param("q")
    consts = numerator_constants(spec)
    etas = [0.5 * (z + 1.0 / z) for z in zs]
    sides = []
    for j, zj in enumerate(zs):
        cos_minus = 0.5 * (q * zj + 1.0 / (q * zj))
        cos_plus = 0.5 * (zj / q + q / zj)
        lhs_num = 1.0 + 0j
        lhs_den = 1.0 + 0j
        for l in range(len(zs)):
            if l == j:
                continue
            lhs_num *= cos_minus - etas[l]
            lhs_den *= cos_plus - etas[l]
        rhs_num = 1.0 + 0j
        rhs_den = zj
        for p in consts:
            rhs_num *= zj - p
            rhs_den *= 1.0 - p * zj
        sides.append((lhs_num * rhs_den, rhs_num * lhs_den))
    return sides


def _bae_sides(spec: ModelSpec, roots: RootSet) -> list[tuple[complex, complex]]:
    if spec.family is ModelFamily.TRIG_Q:
        if roots.roots_z is None:
            raise ValueError("trig-q root set is missing z representatives")
        return _bae_sides_z(spec, roots.roots_z)
    return _bae_sides_x(spec, roots.roots_x)


def bae_residual(
    spec: ModelSpec,
    roots: RootSet,
    allow_degenerate: bool = False,
) -> tuple[float, ...]:
    """Normalized cross-multiplied residual of every Bethe equation."""
    if len(roots) == 0:
        return ()
    native = roots.roots_z if spec.family is ModelFamily.TRIG_Q else roots.roots_x
    if not allow_degenerate and _pairwise_separation(native) < ROOT_SEPARATION_TOL:
        raise DegenerateRoots(
            f"roots closer than {ROOT_SEPARATION_TOL:.1e}; the ansatz assumes "
            "distinct roots"
        )
    out = []
    for lhs, rhs in _bae_sides(spec, roots):
        out.append(abs(lhs - rhs) / max(abs(lhs), abs(rhs), EPS))
    return tuple(out)


# ---------------------------------------------------------------------------
# Newton polish in sector-native variables
# ---------------------------------------------------------------------------


def _native_variables(spec: ModelSpec, roots: RootSet) -> np.ndarray:
    fam = spec.family
    if fam is ModelFamily.TRIG_Q:
        return np.asarray(roots.roots_z, dtype=complex)
    if fam is ModelFamily.MP_CROSSED or spec.sector is Sector.ODD:
        return np.asarray(roots.roots_x, dtype=complex)
    return np.asarray(roots.roots_eta, dtype=complex)


def roots_from_native(spec: ModelSpec, values: np.ndarray) -> RootSet:
    """Rebuild a RootSet (canonical representatives, sorted) from the
    sector-native coordinates."""
    fam = spec.family
    vals = [complex(v) for v in values]
    if fam is ModelFamily.TRIG_Q:
        triples = []
        for z in vals:
            if abs(z) > 1.0:
                z = 1.0 / z
            eta_l = 0.5 * (z + 1.0 / z)
            triples.append((eta_l, -1j * cmath.log(z), z))
        triples.sort(key=lambda t: (t[0].real, t[0].imag))
        return RootSet(
            tuple(t[1] for t in triples),
            tuple(t[0] for t in triples),
            tuple(t[2] for t in triples),
        )
    if fam is ModelFamily.MP_CROSSED:
        vals.sort(key=lambda v: (v.real, v.imag))
        return RootSet(tuple(vals), tuple(vals))
    if spec.sector is Sector.ODD:
        pairs = [(v * v, v) for v in vals]
        pairs.sort(key=lambda t: (t[0].real, t[0].imag))
        xs = []
        for _eta_l, x in pairs:
            if x.real < 0 or (x.real == 0 and x.imag < 0):
                x = -x
            xs.append(x)
        return RootSet(tuple(xs), tuple(t[0] for t in pairs))
    etas = sorted(vals, key=lambda v: (v.real, v.imag))
    xs = tuple(canonical_x_from_eta(spec, e) for e in etas)
    return RootSet(xs, tuple(etas))


def _sides_native(spec: ModelSpec, vals: tuple[complex, ...]) -> list[tuple[complex, complex]]:
    fam = spec.family
    if fam is ModelFamily.TRIG_Q:
        return _bae_sides_z(spec, vals)
    if fam is ModelFamily.MP_CROSSED or spec.sector is Sector.ODD:
        return _bae_sides_x(spec, vals)
    xs = tuple(cmath.sqrt(e) for e in vals)
    return _bae_sides_x(spec, xs)


def _residual_map(spec: ModelSpec):
    """Residual G_j(v) = L_j / R_j - 1 on the native variables.

    The ratio form is scale invariant, which matters: the difference
    L_j - R_j has spurious zeros out at infinity where both products decay
    together, and a frozen-scale Newton would happily drift there.  No
    re-sorting happens inside, so G stays smooth for the Jacobian.
    """

    def g(v: np.ndarray) -> np.ndarray:
        vals = tuple(complex(t) for t in v)
        sides = _sides_native(spec, vals)
        return np.asarray(
            [lhs / rhs - 1.0 if rhs != 0 else lhs - rhs for lhs, rhs in sides],
            dtype=complex,
        )

    return g


def newton_polish(
    spec: ModelSpec,
    seed: RootSet,
    target: float = POLISH_TARGET,
) -> tuple[RootSet, SolutionFlags]:
    """Drive the seed roots onto the Bethe equations.

    The iteration runs in coordinates relative to the seed, so root sets
    spanning many orders of magnitude (the q-family's geometric ladders)
    keep a well-scaled Jacobian.  Never fatal: on singular Jacobians or
    non-convergence the seed comes back unchanged with the corresponding
    flag set.
    """
    if len(seed) == 0:
        return seed, SolutionFlags(polished=True, degenerate=seed.degenerate)
    v0 = _native_variables(spec, seed)
    units = np.where(np.abs(v0) > 1e-250, np.abs(v0), 1.0)
    g = _residual_map(spec)
    g_rel = lambda w: g(v0 + units * w)
    try:
        solved = v0 + units * newton_solve(
            g_rel, np.zeros_like(v0), NewtonOptions(tol=0.1 * target)
        )
    except SingularJacobian:
        return seed, SolutionFlags(
            polished=False, degenerate=seed.degenerate, jacobian_singular=True
        )
    except NoConvergence:
        return seed, SolutionFlags(polished=False, degenerate=seed.degenerate)
    polished = roots_from_native(spec, solved)
    try:
        res = bae_residual(spec, polished)
    except DegenerateRoots:
        return seed, SolutionFlags(polished=False, degenerate=True)
    seed_res = bae_residual(spec, seed, allow_degenerate=True)
    if max(res, default=0.0) <= max(target, max(seed_res, default=0.0)):
        return polished, SolutionFlags(polished=True, degenerate=polished.degenerate)
    return seed, SolutionFlags(polished=False, degenerate=seed.degenerate)


# ---------------------------------------------------------------------------
# Eigenvalue-from-roots formulas
# ---------------------------------------------------------------------------


def _binom(n: int, k: int) -> float:
    if k < 0 or k > n or n < 0:
        return 0.0
    return float(math.comb(n, k))


def restricted_eigenvalue(spec: ModelSpec, m: int) -> complex:
    """Degree-m eigenvalue of a factor-deleted (exactly solvable) model.

    Supported restrictions: one linear factor deleted from the crossed
    Meixner-Pollaczek model; the top factor (Wilson) or the top two
    (continuous dual Hahn) deleted from a centrifugal model.  For these,
    the deleted-factor potential has low enough growth that the eigenvalue
    no longer depends on the Bethe roots.
    """
    if not spec.dropped:
        raise ValueError("spec has no deleted factors")
    kept = numerator_constants(spec)
    if spec.family is ModelFamily.MP_CROSSED and len(kept) == 1:
        return complex(2.0 * m * math.cos(spec.real_param("beta")))
    if spec.family in (ModelFamily.CENTRIFUGAL_I, ModelFamily.CENTRIFUGAL_II):
        if len(kept) == 4:
            s = sum(p.real for p in kept)
            return complex(m * (m + s - 1.0))
        if len(kept) == 3:
            return complex(m)
    raise UnsupportedFamily(
        f"no closed form for {spec.family.value} with factors {spec.dropped} deleted"
    )


def eigenvalue_from_roots(
    spec: ModelSpec,
    roots: RootSet,
    degree: int | None = None,
) -> complex:
    """Closed-form E({x_l}) for the family.

    ``degree`` overrides the subspace degree entering the formula; it is
    inferred from the root count at exactly solvable parameter points,
    where eigenfunctions of every lower degree coexist in the subspace.
    """
    m = spec.M if degree is None else degree
    expected = _root_count_for_degree(spec, m)
    if len(roots) != expected:
        raise ValueError(f"expected {expected} roots for degree {m}, got {len(roots)}")
    if spec.dropped:
        return restricted_eigenvalue(spec, m)
    fam = spec.family
    eta_sum = sum(roots.roots_eta)
    if fam is ModelFamily.MP_CROSSED:
        beta = spec.real_param("beta")
        a1, a2 = spec.param("a1"), spec.param("a2")
        forward = (a1 + a2) * cmath.exp(-1j * beta)
        backward = (a1.conjugate() + a2.conjugate()) * cmath.exp(1j * beta)
        return (
            m * (m - 1) * math.cos(beta)
            + m * (forward + backward)
            + 2.0 * math.sin(beta) * eta_sum
        )
    if fam is ModelFamily.SEXTIC_I:
        a, b, c = (spec.real_param(n) for n in ("a", "b", "c"))
        return (
            m * (m - 1) * (m - 2) / 3.0
            + (a + b + c) * m * (m - 1)
            + 2.0 * (a * b + a * c + b * c) * m
            - 4.0 * eta_sum
        )
    if fam is ModelFamily.SEXTIC_II:
        d = symmetric_coefficients(spec)
        const = 2.0 * sum(_binom(m, j) * d[j] for j in range(1, 5))
        return const - (4.0 * d[3] + (4.0 * m - 6.0)) * eta_sum
    if fam is ModelFamily.CENTRIFUGAL_I:
        ps = [spec.real_param(n) for n in ("b", "c", "d", "e", "f")]
        e2 = sum(ps[i] * ps[j] for i in range(5) for j in range(i + 1, 5))
        return (
            2.0 * m * (m - 1) * (m - 2) / 3.0
            + (sum(ps) + 0.5) * m * (m - 1)
            + e2 * m
            - eta_sum
        )
    if fam is ModelFamily.CENTRIFUGAL_II:
        d = symmetric_coefficients(spec)
        return (
            d[3] * _binom(m, 1)
            + (2.0 * d[4] + d[5]) * _binom(m, 2)
            + 4.0 * (d[5] + 1.0) * _binom(m, 3)
            + 8.0 * _binom(m, 4)
            - (d[5] + 2.0 * (m - 1)) * eta_sum
        )
    if fam is ModelFamily.TRIG_Q:
        q = spec.real_param("q")
        ps = [spec.real_param(n) for n in ("a", "b", "c", "d", "e")]
        e5 = math.prod(ps)
        e4 = sum(
            math.prod(ps[:k] + ps[k + 1 :]) for k in range(5)
        )
        return (
            e4 * (q**m - 1.0) / q
            + q ** (-m)
            - 1.0
            - 2.0 * e5 * q ** (m - 1) * (1.0 - 1.0 / q) * eta_sum
        )
    raise UnsupportedFamily(fam.value)


def _root_count_for_degree(spec: ModelSpec, m: int) -> int:
    if spec.family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        return m // 2 if spec.sector is Sector.EVEN else (m - 1) // 2
    return m


def _degree_for_root_count(spec: ModelSpec, count: int) -> int:
    if spec.family in (ModelFamily.SEXTIC_I, ModelFamily.SEXTIC_II):
        return 2 * count if spec.sector is Sector.EVEN else 2 * count + 1
    return count


def trig_far_ladder(spec: ModelSpec, exponents: list[int]) -> list[complex]:
    """Estimated z-positions of the trigonometric family's far-out roots.

    The weakly-coupled rungs of a deformed state sit near
    z = -(abcde) q^(2k); the exponent k runs over the combined (near count
    + rung index), so a state whose representable part has degree d is
    completed with k = d, d+1, ..., M-1.
    """
    q = spec.real_param("q")
    prod = 1.0
    for name in ("a", "b", "c", "d", "e"):
        prod *= spec.real_param(name)
    return [complex(-prod * q ** (2 * k)) for k in exponents]


def _chain_near_roots(spec: ModelSpec, level: int) -> RootSet:
    """Near (physical) roots of the level-th state of a trigonometric model.

    A weakly deformed level is its Askey-Wilson-like level plus far rungs;
    the near part coincides with the top state of the same model truncated
    to subspace degree ``level``, whose eigenvector is fully representable.
    """
    if level == 0:
        return RootSet((), (), ())
    sub = dc_replace(spec, M=level)
    pairs = oracle_spectrum(build_matrix(sub))
    top = pairs[-1]
    if top.truncated or top.eigenpoly.degree != level:
        raise NoConvergence(
            f"top state of the degree-{level} model is not representable"
        )
    return extract_roots(top, sub, expected=level)


def _complete_truncated_roots(spec: ModelSpec, near: RootSet) -> RootSet | None:
    """Fill in the far-root rungs that underflowed the oracle eigenvector.

    Only the trigonometric family develops these ladders.  The analytic
    rung estimates carry O(q^2)-relative errors, so before handing the set
    to the full polish the rung positions alone are corrected by Newton on
    their own Bethe equations, with the representable roots held fixed.
    Returns None when no completion is available.
    """
    if spec.family is not ModelFamily.TRIG_Q:
        return None
    deg_rep = len(near)
    missing = spec.M - deg_rep
    if missing <= 0:
        return None
    far = trig_far_ladder(spec, list(range(deg_rep, spec.M)))
    if any(abs(z) < 1e-280 for z in far):
        return None
    near_zs = list(near.roots_z or ())

    def g_far(w: np.ndarray) -> np.ndarray:
        zs = tuple(near_zs) + tuple(f * complex(t) for f, t in zip(far, w))
        sides = _bae_sides_z(spec, zs)
        return np.asarray(
            [lhs / rhs - 1.0 for lhs, rhs in sides[deg_rep:]], dtype=complex
        )

    try:
        w = newton_solve(g_far, np.ones(missing, dtype=complex), NewtonOptions(tol=1e-8))
        far = [f * complex(t) for f, t in zip(far, w)]
    except (NoConvergence, SingularJacobian):
        pass  # hand the raw estimates to the full polish
    return roots_from_native(spec, np.asarray(near_zs + far, dtype=complex))


# ---------------------------------------------------------------------------
# End-to-end solve
# ---------------------------------------------------------------------------


def solve(spec: ModelSpec, seed_mode: str = "oracle") -> list[BetheSolution]:
    """Oracle -> roots -> polish -> formula, one solution per eigenpair,
    sorted by (Re, Im) of the oracle eigenvalue.

    ``seed_mode="homotopy"`` seeds the crossed Meixner-Pollaczek and
    trigonometric families by parameter continuation from their exactly
    solvable points instead of from oracle eigenvectors (falling back to
    the oracle seed, flagged per solution, if a continuation leg fails).
    """
    if seed_mode not in ("oracle", "homotopy"):
        raise ValueError(f"unknown seed mode {seed_mode!r}")
    om = build_matrix(spec)
    pairs = oracle_spectrum(om)
    expected = bethe_root_count(spec)
    homotopy_seeds: dict[int, RootSet] = {}
    if seed_mode == "homotopy":
        from .homotopy import homotopy_root_sets

        homotopy_seeds = homotopy_root_sets(spec, [p.eigenvalue for p in pairs])
    solutions = []
    for idx, pair in enumerate(pairs):
        actual = pair.eigenpoly.degree
        anomalous = False
        degree = spec.M
        seed = homotopy_seeds.get(idx)
        source = "homotopy"
        if seed is None or len(seed) != expected:
            source = "oracle"
            if actual == expected and not pair.truncated:
                seed = extract_roots(pair, spec, expected=actual)
            elif pair.truncated:
                try:
                    near = _chain_near_roots(spec, idx)
                    seed = _complete_truncated_roots(spec, near)
                except (NoConvergence, SingularJacobian):
                    seed = None
                if seed is None:
                    seed = extract_roots(pair, spec, expected=actual)
                    anomalous = True
                    degree = _degree_for_root_count(spec, actual)
            elif compensation_vanishes(spec):
                seed = extract_roots(pair, spec, expected=actual)
                degree = _degree_for_root_count(spec, actual)
            else:
                seed, anomalous = extract_roots(pair, spec, expected=actual), True
                degree = _degree_for_root_count(spec, actual)
        roots, flags = newton_polish(spec, seed)
        residuals = bae_residual(spec, roots, allow_degenerate=True)
        if flags.degenerate or roots.degenerate or anomalous:
            flags = replace(flags, degenerate=True)
        e_formula = eigenvalue_from_roots(spec, roots, degree=degree)
        solutions.append(
            BetheSolution(
                spec=spec,
                roots=roots,
                E_formula=e_formula,
                E_oracle=pair.eigenvalue,
                residuals=residuals,
                flags=flags,
                seed_source=source,
            )
        )
    return solutions
