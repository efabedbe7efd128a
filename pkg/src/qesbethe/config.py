"""Default tolerances, overridable from the CLI and recorded in every JSON
document's meta block for reproducibility."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    bae_residual: float = 1e-9
    polish_target: float = 1e-11
    eig_residual: float = 1e-10
    divide_exact: float = 1e-9
    subspace_leak: float = 1e-10
    degenerate_eigenvalue: float = 1e-8
    degenerate_roots: float = 1e-8
    root_dedup: float = 1e-8
    eigenvalue_match: float = 1e-8
    zero_mode: float = 1e-10
    schrodinger: float = 1e-8
    exact_limit: float = 1e-9
    reduced_bae: float = 1e-9

    def override(self, **updates: float) -> "Tolerances":
        known = {f.name for f in fields(self)}
        unknown = set(updates) - known
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        return replace(self, **updates)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}
