"""Numerical substrate: complex polynomial algebra, a dense complex
eigensolver, damped Newton iteration and the two special functions
(complex log-gamma, q-Pochhammer) the model layer is built from.

Polynomials are dense complex coefficient sequences in a single variable,
stored in ascending powers.  Degrees stay small (a few tens), so every
operation is the straightforward O(n^2) algorithm; no FFT or sparse paths.
All functions here are pure: they never mutate their arguments and hold no
global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.special

from .errors import (
    DegenerateLeadingCoefficient,
    DivergentProduct,
    InexactDivision,
    NoConvergence,
    PoleOfGamma,
    SingularJacobian,
)

MAX_EIG_DIM = 256

# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialC:
    """Dense complex polynomial sum_k coeffs[k] * var**k.

    The zero polynomial is the empty coefficient tuple; otherwise the top
    coefficient is non-zero (exact zeros are trimmed on construction).
    ``var`` tags which variable the coefficients refer to ("x", "eta" or
    "z") so basis bookkeeping errors fail loudly instead of silently.
    """

    coeffs: tuple[complex, ...]
    var: str = "x"

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        for c in coeffs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("non-finite polynomial coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __add__(self, other: "PolynomialC") -> "PolynomialC":
        _check_var(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        for k, c in enumerate(other.coeffs):
            a[k] += c
        return PolynomialC(tuple(a), self.var)

    def __sub__(self, other: "PolynomialC") -> "PolynomialC":
        return self + other.scale(-1)

    def scale(self, s: complex) -> "PolynomialC":
        return PolynomialC(tuple(s * c for c in self.coeffs), self.var)

    def inf_norm(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def trimmed(self, tol: float) -> "PolynomialC":
        """Drop top coefficients below tol * inf-norm (noise trimming)."""
        cut = tol * self.inf_norm()
        coeffs = list(self.coeffs)
        while coeffs and abs(coeffs[-1]) <= cut:
            coeffs.pop()
        return PolynomialC(tuple(coeffs), self.var)


def _check_var(p: PolynomialC, q: PolynomialC) -> None:
    if p.var != q.var:
        raise ValueError(f"variable mismatch: {p.var!r} vs {q.var!r}")


def poly_one(var: str = "x") -> PolynomialC:
    return PolynomialC((1,), var)


def poly_monomial(k: int, var: str = "x", coeff: complex = 1.0) -> PolynomialC:
    return PolynomialC((0,) * k + (coeff,), var)


def poly_shift(p: PolynomialC, c: complex) -> PolynomialC:
    """Taylor shift: return q with q(x) = p(x + c).

    Uses the Ruffini-Horner cascade (Pascal recurrence), which is exact up
    to rounding and avoids the conditioning problems of sample/interpolate.
    """
    n = len(p.coeffs)
    if n <= 1 or c == 0:
        return p
    b = list(p.coeffs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] = b[j] + c * b[j + 1]
    return PolynomialC(tuple(b), p.var)


def poly_mul(p: PolynomialC, q: PolynomialC) -> PolynomialC:
    """Convolution product."""
    _check_var(p, q)
    if not p.coeffs or not q.coeffs:
        return PolynomialC((), p.var)
    out = np.convolve(np.asarray(p.coeffs), np.asarray(q.coeffs))
    return PolynomialC(tuple(out), p.var)


def poly_divide_exact(p: PolynomialC, d: PolynomialC, tol: float = 1e-9) -> PolynomialC:
    """Synthetic division p / d whose remainder must vanish.

    The remainder is checked against ``tol * inf_norm(p)`` and discarded;
    a larger remainder raises InexactDivision.
    """
    _check_var(p, d)
    if not d.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.coeffs:
        return PolynomialC((), p.var)
    dd = d.degree
    pd = p.degree
    rem = list(p.coeffs)
    lead = d.coeffs[-1]
    qdeg = pd - dd
    if qdeg < 0:
        quot: list[complex] = []
    else:
        quot = [0j] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            q_k = rem[k + dd] / lead
            quot[k] = q_k
            for j in range(dd + 1):
                rem[k + j] -= q_k * d.coeffs[j]
    rnorm = max(abs(r) for r in rem)
    if rnorm > tol * p.inf_norm():
        raise InexactDivision(
            f"division remainder {rnorm:.3e} exceeds {tol:.1e} * |p| = "
            f"{tol * p.inf_norm():.3e}"
        )
    return PolynomialC(tuple(quot), p.var)


def poly_from_roots(roots: Sequence[complex], var: str = "x") -> PolynomialC:
    """Monic polynomial prod (var - r)."""
    out = poly_one(var)
    for r in roots:
        out = poly_mul(out, PolynomialC((-r, 1), var))
    return out


def poly_roots(p: PolynomialC, assume_exact_leading: bool = False) -> list[complex]:
    """All deg(p) roots with multiplicity, via balanced companion-matrix
    eigenvalues.

    A leading coefficient below 1e-14 of the coefficient norm is rejected
    as noise unless ``assume_exact_leading`` is set, which callers use for
    polynomials made monic by construction (their wide coefficient range is
    genuine, not cancellation debris).
    """
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    norm = p.inf_norm()
    if not assume_exact_leading and abs(p.coeffs[-1]) < 1e-14 * norm:
        raise DegenerateLeadingCoefficient(
            f"leading coefficient {abs(p.coeffs[-1]):.3e} below 1e-14 * {norm:.3e}"
        )
    rr = np.roots(np.asarray(p.coeffs)[::-1])
    return [complex(r) for r in rr]


# ---------------------------------------------------------------------------
# Laurent polynomials (used by the trigonometric q-model)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentC:
    """Dense complex Laurent polynomial sum_k coeffs[k - lo] * z**k,
    exponents running lo .. lo + len(coeffs) - 1."""

    lo: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        lo = self.lo
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            lo += 1
        if not coeffs:
            lo = 0
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "lo", lo)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + c
        return out * z**self.lo

    def coeff(self, k: int) -> complex:
        if self.lo <= k <= self.hi:
            return self.coeffs[k - self.lo]
        return 0j

    def __add__(self, other: "LaurentC") -> "LaurentC":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0j] * (hi - lo + 1)
        for k, c in enumerate(self.coeffs):
            out[self.lo - lo + k] += c
        for k, c in enumerate(other.coeffs):
            out[other.lo - lo + k] += c
        return LaurentC(lo, tuple(out))

    def __sub__(self, other: "LaurentC") -> "LaurentC":
        return self + other.scale(-1)

    def scale(self, s: complex) -> "LaurentC":
        return LaurentC(self.lo, tuple(s * c for c in self.coeffs))

    def inf_norm(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)


def laurent_one() -> LaurentC:
    return LaurentC(0, (1,))


def laurent_mul(p: LaurentC, q: LaurentC) -> LaurentC:
    if not p.coeffs or not q.coeffs:
        return LaurentC(0, ())
    out = np.convolve(np.asarray(p.coeffs), np.asarray(q.coeffs))
    return LaurentC(p.lo + q.lo, tuple(out))


def laurent_scale_arg(p: LaurentC, s: complex) -> LaurentC:
    """Return q with q(z) = p(s * z): coefficient of z^k picks up s^k."""
    return LaurentC(p.lo, tuple(c * s ** (p.lo + k) for k, c in enumerate(p.coeffs)))


def laurent_divide_exact(p: LaurentC, d: LaurentC, tol: float = 1e-9) -> LaurentC:
    """Exact Laurent division: shift both operands to plain polynomials and
    divide, tracking the exponent offset."""
    if not d.coeffs:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not p.coeffs:
        return LaurentC(0, ())
    pp = PolynomialC(p.coeffs, "z")
    dd = PolynomialC(d.coeffs, "z")
    q = poly_divide_exact(pp, dd, tol)
    return LaurentC(p.lo - d.lo, q.coeffs)


def chebyshev_t_coefficients(n: int) -> list[tuple[float, ...]]:
    """Coefficient rows of the Chebyshev polynomials T_0 .. T_n (ascending
    powers), from the recurrence T_{k+1} = 2 x T_k - T_{k-1}."""
    rows: list[tuple[float, ...]] = [(1.0,), (0.0, 1.0)]
    while len(rows) <= n:
        prev, last = rows[-2], rows[-1]
        nxt = [0.0] + [2.0 * c for c in last]
        for k, c in enumerate(prev):
            nxt[k] -= c
        rows.append(tuple(nxt))
    return rows[: n + 1]


def symmetric_laurent_to_eta(f: LaurentC, asym_tol: float = 1e-10) -> tuple[complex, ...]:
    """Re-express a z-inversion-symmetric Laurent polynomial in powers of
    eta = (z + 1/z)/2, using z^k + z^-k = 2 T_k(eta).

    Returns the full ascending eta-coefficient tuple.  Raises ValueError if
    f(z) != f(1/z) beyond ``asym_tol`` relative.
    """
    if not f.coeffs:
        return ()
    norm = f.inf_norm()
    top = max(f.hi, -f.lo)
    sym = []
    for k in range(top + 1):
        up, dn = f.coeff(k), f.coeff(-k)
        if abs(up - dn) > asym_tol * norm:
            raise ValueError(
                f"Laurent polynomial not z -> 1/z symmetric at |k|={k}: "
                f"{up} vs {dn}"
            )
        sym.append(0.5 * (up + dn))
    rows = chebyshev_t_coefficients(top)
    out = [0j] * (top + 1)
    out[0] += sym[0]
    for k in range(1, top + 1):
        for j, c in enumerate(rows[k]):
            out[j] += 2.0 * c * sym[k]
    return tuple(out)


def eta_power_as_laurent(k: int) -> LaurentC:
    """eta^k with eta = (z + 1/z)/2, as a Laurent polynomial in z."""
    base = LaurentC(-1, (0.5, 0.0, 0.5))
    out = laurent_one()
    for _ in range(k):
        out = laurent_mul(out, base)
    return out


# ---------------------------------------------------------------------------
# Dense eigensolver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenDecomposition:
    """Full eigen-decomposition of a general complex matrix.

    Eigenvectors are unit-normalized in the Euclidean norm and satisfy
    ||A v - lambda v|| <= tol * ||A|| as checked at construction time.
    """

    eigenvalues: tuple[complex, ...]
    eigenvectors: tuple[np.ndarray, ...]


def eig_general(a: np.ndarray, tol: float = 1e-10) -> EigenDecomposition:
    """Eigen-decomposition of a general (non-normal) complex matrix via
    LAPACK's balanced Hessenberg + shifted-QR driver."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n < 1 or n > MAX_EIG_DIM:
        raise ValueError(f"dimension {n} outside 1..{MAX_EIG_DIM}")
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed for dim {n}: {exc}") from exc
    scale = np.linalg.norm(a, 2) if n > 1 else abs(a[0, 0])
    vecs = []
    for k in range(n):
        vec = v[:, k] / np.linalg.norm(v[:, k])
        resid = np.linalg.norm(a @ vec - w[k] * vec)
        if resid > tol * max(scale, 1e-300):
            raise NoConvergence(
                f"eigenpair residual {resid:.3e} above {tol:.1e} * ||A|| "
                f"(dim {n})"
            )
        vecs.append(vec)
    return EigenDecomposition(tuple(complex(x) for x in w), tuple(vecs))


# ---------------------------------------------------------------------------
# Newton iteration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonOptions:
    tol: float = 1e-11
    max_iter: int = 100
    max_halvings: int = 20
    fd_scale: float = 1e-6
    cond_limit: float = 1e12


def newton_solve(
    f: Callable[[np.ndarray], np.ndarray],
    x0: Sequence[complex],
    opts: NewtonOptions = NewtonOptions(),
) -> np.ndarray:
    """Damped Newton iteration on a residual map C^N -> C^N.

    The Jacobian comes from central finite differences with per-component
    step 1e-6 * max(1, |x_k|); the update is halved (at most ``max_halvings``
    times) whenever the full step fails to reduce ||f||_inf.
    """
    x = np.asarray(list(x0), dtype=complex)
    n = x.size
    if n == 0:
        return x
    fx = np.asarray(f(x), dtype=complex)
    fnorm = float(np.max(np.abs(fx)))
    for _ in range(opts.max_iter):
        if fnorm <= opts.tol:
            return x
        jac = np.empty((n, n), dtype=complex)
        for k in range(n):
            h = opts.fd_scale * max(1.0, abs(x[k]))
            xp = x.copy()
            xm = x.copy()
            xp[k] += h
            xm[k] -= h
            jac[:, k] = (np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * h)
        cond = np.linalg.cond(jac)
        if not np.isfinite(cond) or cond > opts.cond_limit:
            raise SingularJacobian(f"Jacobian condition estimate {cond:.3e}")
        step = np.linalg.solve(jac, -fx)
        lam = 1.0
        for _halving in range(opts.max_halvings + 1):
            xn = x + lam * step
            fn = np.asarray(f(xn), dtype=complex)
            fnew = float(np.max(np.abs(fn)))
            if fnew < fnorm or fnew <= opts.tol:
                break
            lam *= 0.5
        else:
            raise NoConvergence(
                f"Newton stalled at ||f|| = {fnorm:.3e} after "
                f"{opts.max_halvings} halvings"
            )
        x, fx, fnorm = xn, fn, fnew
    if fnorm <= opts.tol:
        return x
    raise NoConvergence(
        f"Newton did not reach tol {opts.tol:.1e} within {opts.max_iter} "
        f"iterations (||f|| = {fnorm:.3e})"
    )


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleOfGamma(f"log-gamma pole at z = {z.real:g}")
    return complex(scipy.special.loggamma(z))


def q_pochhammer_inf(a: complex, q: float, max_terms: int = 1_000_000) -> complex:
    """(a; q)_infinity = prod_{n >= 0} (1 - a q^n), truncated once
    |a q^n| < 1e-17.

    Requires 0 < q < 1 and |a| <= 1/q; the boundary |a| = 1/q is admitted
    because half-step shifts of unit-modulus arguments land exactly there.
    """
    if not (0.0 < q < 1.0):
        raise DivergentProduct(f"q = {q!r} outside (0, 1)")
    a = complex(a)
    if abs(a) > (1.0 + 1e-9) / q:
        raise DivergentProduct(f"|a| = {abs(a):.6g} exceeds 1/q = {1.0 / q:.6g}")
    out = 1.0 + 0j
    term = a
    count = 0
    while abs(term) >= 1e-17:
        out *= 1.0 - term
        term *= q
        count += 1
        if count > max_terms:
            raise DivergentProduct("q-Pochhammer truncation did not engage")
    return out
