import math

import numpy as np
import pytest

from qesbethe.bethe import solve
from qesbethe.errors import PoleOfGamma
from qesbethe.models import model_spec
from qesbethe.numerics import q_pochhammer_inf
from qesbethe.wavefun import (
    default_grid,
    eigenfunction_value,
    grid_rows,
    phi0_squared,
    schrodinger_residual,
    zero_mode_residual,
)

from conftest import ALL_FAMILIES, draw_params, spec_for


def random_admissible_points(spec, rng, n=20):
    grid = default_grid(spec, 64)
    lo, hi = grid.points[0].real, grid.points[-1].real
    return [complex(rng.uniform(lo, hi)) for _ in range(n)]


class TestPhi0Squared:
    def test_crossed_at_origin(self):
        spec = model_spec("mp-crossed", M=1, a1=1, a2=1, beta=0.0)
        np.testing.assert_allclose(phi0_squared(spec, 0.0), 1.0, rtol=1e-13)

    def test_sextic_at_origin(self):
        spec = model_spec("sextic-i", M=2, sector="even", a=1, b=1, c=1)
        np.testing.assert_allclose(phi0_squared(spec, 0.0), 1.0, rtol=1e-13)

    def test_trig_all_zero_params(self):
        spec = model_spec("trig-q", M=1, a=0, b=0, c=0, d=0, e=0, q=0.5)
        val = phi0_squared(spec, math.pi / 2)
        expected = q_pochhammer_inf(-1.0, 0.5) ** 2  # z = i, z^2 = z^-2 = -1
        np.testing.assert_allclose(val, expected, rtol=1e-12)

    def test_positivity_on_real_grids(self, rng):
        for family in ALL_FAMILIES:
            params = draw_params(family, rng)
            if family == "mp-crossed":
                params["a1"] = abs(params["a1"])  # real positive ranges
                params["a2"] = abs(params["a2"])
            spec = model_spec(
                family,
                M=2,
                sector="even" if family.startswith("sextic") else "full",
                **params,
            )
            for x in default_grid(spec, 16).points:
                v = phi0_squared(spec, x)
                assert v.real > 0
                assert abs(v.imag) <= 1e-10 * abs(v)

    def test_gamma_pole_guard(self):
        spec = model_spec("centrifugal-i", M=1, b=1.2, c=0.7, d=2.2, e=0.9, f=1.6)
        with pytest.raises(PoleOfGamma):
            phi0_squared(spec, 0.0)  # Gamma(+-2ix) poles at the origin


class TestZeroMode:
    def test_symmetric_point_exact(self):
        # equal parameters make both sides identical expressions at x = 0
        spec = model_spec("sextic-i", M=2, sector="even", a=1.3, b=1.3, c=1.3)
        assert zero_mode_residual(spec, 0.0) <= 1e-12

    def test_generic_point_sextic(self):
        spec = model_spec("sextic-i", M=2, sector="even", a=1.0, b=2.0, c=3.0)
        assert zero_mode_residual(spec, 0.7) <= 1e-10

    def test_generic_point_trig(self):
        spec = model_spec("trig-q", M=1, a=0.3, b=0, c=0, d=0, e=0, q=0.5)
        assert zero_mode_residual(spec, 1.0) <= 1e-10

    def test_twenty_random_points_per_family(self, rng):
        for family in ALL_FAMILIES:
            spec = model_spec(
                family,
                M=3,
                sector="odd" if family.startswith("sextic") else "full",
                **draw_params(family, rng),
            )
            for x in random_admissible_points(spec, rng):
                assert zero_mode_residual(spec, x) <= 1e-10, (family, x)


class TestSchrodingerResidual:
    def test_hand_worked_state(self):
        spec = model_spec("mp-crossed", M=1, a1=1, a2=1, beta=math.pi / 2)
        sol = solve(spec)[1]
        assert schrodinger_residual(spec, sol, 0.3) <= 1e-12

    def test_m_zero_state(self):
        spec = model_spec("mp-crossed", M=0, a1=1, a2=1, beta=0.4)
        sol = solve(spec)[0]
        assert schrodinger_residual(spec, sol, 0.9) <= 1e-12

    def test_wrong_eigenvalue_detected(self):
        import dataclasses

        spec = model_spec("mp-crossed", M=1, a1=1, a2=1, beta=math.pi / 2)
        sol = solve(spec)[1]
        bad = dataclasses.replace(sol, E_formula=sol.E_formula + 1.0)
        assert schrodinger_residual(spec, bad, 0.3) > 1e-3

    def test_every_solution_every_family(self, rng):
        for family in ALL_FAMILIES:
            spec = spec_for(family, 4, rng)
            sols = solve(spec)
            for sol in sols:
                for x in default_grid(spec, 8).points:
                    assert schrodinger_residual(spec, sol, x) <= 1e-8


class TestGridRows:
    def test_row_shape_and_consistency(self):
        spec = model_spec("sextic-i", M=2, sector="even", a=1, b=2, c=3)
        sol = solve(spec)[0]
        rows = grid_rows(spec, sol, default_grid(spec, 7))
        assert len(rows) == 7
        for row in rows:
            assert set(row) == {
                "x_re", "x_im", "phi0sq_re", "phi0sq_im", "psi_re", "psi_im", "residual",
            }
            x = complex(row["x_re"], row["x_im"])
            np.testing.assert_allclose(
                complex(row["psi_re"], row["psi_im"]),
                eigenfunction_value(spec, sol, x),
                rtol=1e-12,
            )
            assert row["residual"] <= 1e-8
