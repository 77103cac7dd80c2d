"""Multi-start Nelder-Mead machinery shared by the optimization-based strengths.

Restarts are independent: restart r draws its start from a generator seeded
with (seed, r), so results do not depend on scheduling or thread count.
Explicit start vectors (structured witnesses) run before random restarts
and the simplex never discards its best vertex, so any seeded witness value
is a floor for the reported optimum.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .matcore import I2, PAULI_X, PAULI_Y, PAULI_Z

__all__ = [
    "OptimizerConfig",
    "OptimizerResult",
    "StrengthReport",
    "multistart_minimize",
    "params_to_unit_vector",
    "unit_vector_to_params",
    "params_to_unitary",
    "unitary_param_count",
]


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 16
    max_evals: int = 20000
    xtol: float = 1e-8
    ftol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.xtol <= 0 or self.ftol <= 0:
            raise ValueError("tolerances must be positive")

    def replace(self, **kw) -> "OptimizerConfig":
        base = dict(
            restarts=self.restarts,
            max_evals=self.max_evals,
            xtol=self.xtol,
            ftol=self.ftol,
            seed=self.seed,
        )
        base.update(kw)
        return OptimizerConfig(**base)


@dataclass
class OptimizerResult:
    value: float
    x: np.ndarray
    restarts_used: int
    best_restart: int
    total_evals: int
    converged: bool


@dataclass
class StrengthReport:
    """A strength value with its provenance.

    bound_kind records whether the number is exact, a lower estimate from a
    maximization, or an upper estimate from a minimization.
    """

    measure: str
    value: float
    bound_kind: str  # "exact" | "lower" | "upper"
    witness: dict | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "measure": self.measure,
            "value": self.value,
            "bound_kind": self.bound_kind,
        }
        out.update(self.diagnostics)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _run_restart(objective, x0, cfg: OptimizerConfig):
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxfev": cfg.max_evals,
            "fatol": cfg.ftol * 1e-3,
            "xatol": cfg.xtol,
            "adaptive": True,
        },
    )
    return float(res.fun), np.asarray(res.x), int(res.nfev), bool(res.success)


def multistart_minimize(
    objective: Callable[[np.ndarray], float],
    n_params: int,
    cfg: OptimizerConfig,
    starts: Sequence[np.ndarray] = (),
    threads: int = 1,
) -> OptimizerResult:
    """Minimize over restarts; ties resolve to the lowest restart index."""

    def start_for(r: int) -> np.ndarray:
        if r < len(starts):
            return np.asarray(starts[r], dtype=float)
        rng = np.random.default_rng([cfg.seed, r])
        x = rng.normal(size=n_params)
        if starts:
            # alternate between perturbations of the first seeded start and
            # fully random points so structure is explored from both sides
            if r % 2 == 0:
                return np.asarray(starts[0], dtype=float) + 0.4 * x
        return 1.2 * x

    indices = range(cfg.restarts)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda r: _run_restart(objective, start_for(r), cfg), indices))
    else:
        outcomes = [_run_restart(objective, start_for(r), cfg) for r in indices]

    best_r = min(indices, key=lambda r: (outcomes[r][0], r))
    value, x, _, _ = outcomes[best_r]
    return OptimizerResult(
        value=value,
        x=x,
        restarts_used=cfg.restarts,
        best_restart=best_r,
        total_evals=sum(o[2] for o in outcomes),
        converged=any(o[3] for o in outcomes),
    )


# --- parametrizations ---


def params_to_unit_vector(p: np.ndarray) -> np.ndarray | None:
    """Map 2D reals to a unit vector in C^D; None if the raw norm collapses."""
    d = len(p) // 2
    v = p[:d] + 1j * p[d:]
    n = np.linalg.norm(v)
    if n < 1e-12:
        return None
    return v / n


def unit_vector_to_params(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.concatenate([v.real, v.imag])


def unitary_param_count(d: int) -> int:
    return d * d


def params_to_unitary(p: np.ndarray, d: int) -> np.ndarray:
    """exp(i H) with H Hermitian built from d^2 real parameters."""
    if d == 2:
        return _u2_from_params(p)
    h = np.zeros((d, d), dtype=complex)
    h[np.diag_indices(d)] = p[:d]
    iu = np.triu_indices(d, 1)
    m = len(iu[0])
    h[iu] = p[d : d + m] + 1j * p[d + m : d + 2 * m]
    h += np.triu(h, 1).conj().T
    return expm(1j * h)


def _u2_from_params(p: np.ndarray) -> np.ndarray:
    # H = a I + b . sigma  =>  exp(iH) = e^{ia} (cos|b| I + i sin|b| bhat . sigma)
    a = 0.5 * (p[0] + p[1])
    bz = 0.5 * (p[0] - p[1])
    bx, by = p[2], -p[3]
    nb = np.sqrt(bx * bx + by * by + bz * bz)
    if nb < 1e-300:
        return np.exp(1j * a) * I2
    c, s = np.cos(nb), np.sin(nb) / nb
    m = c * I2 + 1j * s * (bx * PAULI_X + by * PAULI_Y + bz * PAULI_Z)
    return np.exp(1j * a) * m
