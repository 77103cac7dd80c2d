"""Operational lower bounds from strength measures.

Gate-count bounds divide the strength of the target by the strongest
available gate; the log-rank bound converts the rank of the +-1
communication matrix of f(x, y) into a qubit-communication bound via the
Hartley strength of the induced diagonal sign unitary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .matcore import RELATIVE_RANK_TOL, Partition
from .schmidt import k_har, schmidt_number

__all__ = [
    "BooleanFunction",
    "BoundReport",
    "named_function",
    "table_from_csv",
    "gate_count_bound",
    "approx_gate_count_bound",
    "sign_matrix",
    "sign_unitary",
    "log_rank_bound",
    "qft_comm_bound",
]


@dataclass
class BooleanFunction:
    """Joint one-bit function f(x, y) of Alice's and Bob's input strings."""

    bits_a: int
    bits_b: int
    table: np.ndarray  # shape (2^bits_a, 2^bits_b), entries 0/1

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=int)
        if self.table.shape != (2**self.bits_a, 2**self.bits_b):
            raise ValueError("table dimensions do not match bit lengths")
        if not np.isin(self.table, (0, 1)).all():
            raise ValueError("table entries must be 0 or 1")


@dataclass
class BoundReport:
    bound_name: str
    value: float
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"bound_name": self.bound_name, "value": self.value, "inputs": self.inputs}


def named_function(name: str, bits: int) -> BooleanFunction:
    """Standard communication-complexity functions on equal-length inputs."""
    if bits < 1:
        raise ValueError("bit length must be >= 1")
    n = 2**bits
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    if name == "eq":
        table = (x == y).astype(int)
    elif name == "ip":
        table = np.array(
            [[bin(int(a) & int(b)).count("1") & 1 for b in range(n)] for a in range(n)]
        )
    elif name == "and":
        table = ((x & y) == n - 1).astype(int)
    elif name == "xor":
        table = np.array(
            [[bin(int(a) ^ int(b)).count("1") & 1 for b in range(n)] for a in range(n)]
        )
    else:
        raise ValueError(f"unknown function {name!r}; known: eq, ip, and, xor")
    return BooleanFunction(bits, bits, table)


def table_from_csv(path: str) -> BooleanFunction:
    """Rows are Alice's inputs x, columns Bob's inputs y, entries 0/1."""
    with open(path, newline="") as fh:
        rows = [[int(tok) for tok in row] for row in csv.reader(fh) if row]
    table = np.array(rows, dtype=int)
    bits_a = int(math.log2(table.shape[0]))
    bits_b = int(math.log2(table.shape[1]))
    return BooleanFunction(bits_a, bits_b, table)


def gate_count_bound(k_u: float, k_max: float) -> int:
    """Minimum gate count ceil(K(U) / K_max), with a guard against
    rounding a value sitting numerically just above an integer."""
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    if k_u < 0:
        raise ValueError("strengths are non-negative")
    return int(math.ceil(k_u / k_max - 1e-9))


def approx_gate_count_bound(k_u: float, k_max: float, f_eps: float) -> int:
    """Gate count bound when an approximation error budget f_eps is allowed."""
    if f_eps < 0:
        raise ValueError("f_eps must be non-negative")
    return max(0, gate_count_bound(max(0.0, k_u - f_eps), k_max))


def sign_matrix(f: BooleanFunction) -> np.ndarray:
    """The +-1 communication matrix (-1)^f(x,y)."""
    return 1.0 - 2.0 * f.table.astype(float)


def sign_unitary(f: BooleanFunction) -> np.ndarray:
    """Diagonal unitary |x>|y> -> (-1)^f(x,y) |x>|y>."""
    return np.diag(sign_matrix(f).reshape(-1)).astype(complex)


def log_rank_bound(f: BooleanFunction) -> BoundReport:
    """Communication lower bound (1/4) log2 rank((-1)^f).

    Also verifies that the rank equals the Schmidt number of the induced
    diagonal sign unitary across the x : y cut.
    """
    m = sign_matrix(f)
    s = np.linalg.svd(m, compute_uv=False)
    rank = int((s > RELATIVE_RANK_TOL * s[0]).sum())
    part = Partition(2**f.bits_a, 2**f.bits_b)
    sch = schmidt_number(sign_unitary(f), part)
    if sch != rank:
        raise RuntimeError(
            f"Schmidt number {sch} of the sign unitary differs from matrix rank {rank}"
        )
    return BoundReport(
        bound_name="log_rank",
        value=0.25 * math.log2(rank),
        inputs={"rank": rank, "schmidt_number": sch, "bits": [f.bits_a, f.bits_b]},
    )


def qft_comm_bound(m: int, n: int) -> BoundReport:
    """Qubit-communication lower bound 2m for the Fourier transform on
    m + n qubits split m : n (valid for m <= n).

    The supporting chain records the Hartley strengths entering the bound:
    the transform has K_Har = 2m across the cut, a swap gate has K_Har = 2.
    For m + n <= 8 the transform's strength is recomputed numerically.
    """
    if m < 1 or n < 1:
        raise ValueError("qubit counts must be positive")
    if m > n:
        raise ValueError("bound derived only for m <= n")
    k_har_qft = 2.0 * m
    numeric = None
    if m + n <= 8:
        from .matcore import GateSpec, gate

        u = gate(GateSpec("qft", (m + n,)))
        numeric = k_har(u, Partition(2**m, 2**n))
        if abs(numeric - k_har_qft) > 1e-9:
            raise RuntimeError(
                f"numeric Hartley strength {numeric} disagrees with closed form {k_har_qft}"
            )
    return BoundReport(
        bound_name="qft_comm",
        value=2.0 * m,
        inputs={
            "k_har_qft": k_har_qft,
            "k_har_qft_numeric": numeric,
            "k_har_swap": 2.0,
            "m": m,
            "n": n,
        },
    )
