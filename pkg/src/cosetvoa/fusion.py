"""Verlinde fusion coefficients with integrality enforcement."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .affine import NumericCheckError

INTEGRALITY_TOL = 1e-6


class IntegralityError(NumericCheckError):
    pass


class FusionConsistencyError(NumericCheckError):
    pass


@dataclass(frozen=True, eq=False)
class FusionTensor:
    index: Sequence
    coefficients: np.ndarray       # N[i, j, k] = N_{ij}^k
    max_deviation: float = 0.0     # worst distance of a raw value from its integer

    def __len__(self):
        return len(self.index)

    def nonzero(self, skip_unit=False):
        """Sparse triples (i, j, k, N) in index order."""
        out = []
        for i, j, k in zip(*np.nonzero(self.coefficients)):
            if skip_unit and (i == 0 or j == 0):
                continue
            out.append((int(i), int(j), int(k), int(self.coefficients[i, j, k])))
        return out


def verlinde_raw(entries: np.ndarray) -> np.ndarray:
    S = np.asarray(entries)
    if np.any(np.abs(S[0]) == 0):
        raise ValueError("vacuum row of S has a zero entry")
    # S^{-1} = conj(S)^T by unitarity
    return np.einsum("ia,ja,ka->ijk", S, S, S.conj() / S[0][None, :], optimize=True)


def verlinde_slab(entries: np.ndarray, i: int) -> np.ndarray:
    """Raw N[i, j, k] for one fixed i, in O(n^2) memory."""
    S = np.asarray(entries)
    return (S * (S[i] / S[0])[None, :]) @ S.conj().T


def verlinde(S, tol: float = INTEGRALITY_TOL) -> FusionTensor:
    """Fusion tensor of any S-matrix-like object exposing ``entries`` and ``labels``."""
    raw = verlinde_raw(S.entries)
    rounded = np.rint(raw.real)
    dev = np.abs(raw - rounded)
    worst = np.unravel_index(np.argmax(dev), dev.shape)
    if dev[worst] > tol:
        i, j, k = (int(x) for x in worst)
        raise IntegralityError(
            f"Verlinde value N[{i},{j}]^{k} = {complex(raw[worst]):.10g} is {dev[worst]:.3e} "
            f"from an integer (tolerance {tol:g})")
    N = rounded.astype(np.int64)
    if np.any(N < 0):
        i, j, k = (int(x) for x in np.argwhere(N < 0)[0])
        raise FusionConsistencyError(f"negative fusion coefficient N[{i},{j}]^{k} = {N[i, j, k]}")
    N.setflags(write=False)
    return FusionTensor(tuple(S.labels), N, float(dev[worst]))


def check_fusion_axioms(T: FusionTensor) -> None:
    N = T.coefficients
    n = len(N)
    if not np.array_equal(N[0], np.eye(n, dtype=N.dtype)):
        raise FusionConsistencyError("unit law fails: vacuum row is not the identity")
    if not np.array_equal(N, N.transpose(1, 0, 2)):
        raise FusionConsistencyError("fusion is not commutative")
    # sum_m N_ij^m N_mk^n  vs  sum_m N_jk^m N_im^n, one i at a time;
    # small integers are exact in float64
    F = N.astype(np.float64)
    flat_kn, flat_jk = F.reshape(n, n * n), F.reshape(n * n, n)
    for i in range(n):
        left = F[i] @ flat_kn                      # (j, k n)
        right = flat_jk @ F[i]                     # (j k, n)
        if not np.array_equal(left.reshape(n, n, n), right.reshape(n, n, n)):
            raise FusionConsistencyError(f"fusion is not associative (first index {i})")


def quantum_dimensions(S) -> np.ndarray:
    row = np.asarray(S.entries)[0]
    if np.any(row.real <= 0):
        raise ValueError("vacuum row must be positive")
    return (row / row[0]).real


def qdim_defect(T: FusionTensor, qdims: np.ndarray) -> float:
    """max |sum_k N_ij^k d_k - d_i d_j|."""
    lhs = T.coefficients @ qdims
    return float(np.max(np.abs(lhs - np.outer(qdims, qdims))))


def sl2_fusion_oracle(k: int, a: int, b: int, c: int) -> int:
    """Truncated Clebsch-Gordan rule for sl2 at level k (labels are Dynkin labels)."""
    for x in (a, b, c):
        if not 0 <= x <= k:
            raise ValueError(f"label {x} outside 0..{k}")
    if (a + b + c) % 2:
        return 0
    return int(abs(a - b) <= c <= min(a + b, 2 * k - a - b))
