"""Level-k integrable data: P_+^k, conformal weights, the Kac-Peterson
S-matrix and the simple-current action of P^v/Q^v."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import pi, sqrt
from typing import Dict, List, Tuple

import numpy as np
import sympy

from .liealg import (RootDatum, Weight, all_weights, congruence_class, inner_product,
                     level, long_root_index, to_dominant)

STRUCTURAL_TOL = 1e-9
THREADS_ENV = "COSETVOA_THREADS"


class NumericCheckError(ArithmeticError):
    """A computed table failed a structural consistency check."""


@dataclass(frozen=True)
class LevelSpec:
    datum: RootDatum
    level: int

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 1:
            raise ValueError(f"level must be a positive integer, got {self.level!r}")

    @property
    def shift(self) -> int:
        """k + h^v"""
        return self.level + self.datum.dual_coxeter

    def __str__(self):
        return f"{self.datum.spec} level {self.level}"


@dataclass(frozen=True)
class WeightListing:
    spec: LevelSpec
    weights: Tuple[Weight, ...]

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def index(self, lam) -> int:
        return _listing_index(self)[tuple(lam)]

    def __contains__(self, lam) -> bool:
        return tuple(lam) in _listing_index(self)


@lru_cache(maxsize=None)
def _listing_index(listing: WeightListing) -> Dict[Weight, int]:
    return {w: i for i, w in enumerate(listing.weights)}


@lru_cache(maxsize=None)
def enumerate_level_weights(spec: LevelSpec) -> WeightListing:
    datum, k = spec.datum, spec.level
    out: List[Weight] = []

    def rec(prefix, budget):
        i = len(prefix)
        if i == datum.rank:
            out.append(tuple(prefix))
            return
        c = datum.comarks[i]
        for a in range(budget // c + 1):
            rec(prefix + [a], budget - a * c)

    rec([], k)
    out.sort(key=lambda w: (level(datum, w), w))
    return WeightListing(spec, tuple(out))


def _require_integrable(spec: LevelSpec, lam):
    lam = tuple(lam)
    if len(lam) != spec.datum.rank or any(x < 0 for x in lam) or level(spec.datum, lam) > spec.level:
        raise ValueError(f"{lam} is not a dominant weight of level <= {spec.level}")
    return lam


def conformal_weight(spec: LevelSpec, lam) -> Fraction:
    lam = _require_integrable(spec, lam)
    two_rho = tuple(2 * x for x in spec.datum.rho)
    return inner_product(spec.datum, lam, tuple(a + b for a, b in zip(lam, two_rho))) / (2 * spec.shift)


def central_charge(spec: LevelSpec) -> Fraction:
    return Fraction(spec.level * spec.datum.dim, spec.shift)


@dataclass(frozen=True, eq=False)
class ModularS:
    listing: WeightListing
    entries: np.ndarray

    @property
    def labels(self):
        return self.listing.weights

    def __len__(self):
        return len(self.listing)


def s_row_vacuum(spec: LevelSpec) -> np.ndarray:
    """Vacuum row of the S-matrix from the Weyl denominator product."""
    datum = spec.datum
    n = spec.shift
    listing = enumerate_level_weights(spec)
    prefactor = long_root_index(datum) ** -0.5 * n ** (-datum.rank / 2)
    roots = np.array(datum.positive_roots, dtype=np.int64)
    shifted = np.array(listing.weights, dtype=np.int64) + 1
    # <lam + rho, alpha> scaled by form_den, reduced mod 2 n form_den
    ip = shifted @ datum.form_int @ roots.T
    period = 2 * n * datum.form_den
    ip = np.mod(ip, period)
    row = prefactor * np.prod(2 * np.sin(pi * ip / (n * datum.form_den)), axis=1)
    return row


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> np.ndarray:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    return np.array([int(c) for c in coeffs], dtype=object)


def _phase_sums(datum: RootDatum, weights: np.ndarray, mults: np.ndarray,
                points: np.ndarray, n: int) -> np.ndarray:
    """sum_mu mult(mu) exp(-2 pi i <mu, p> / n) for each row p of ``points``.

    Multiplicities are binned exactly by phase and the resulting element of
    Z[zeta] is reduced modulo the cyclotomic polynomial before evaluation;
    summing unit phases directly loses about log10(dim) digits."""
    period = n * datum.form_den
    P = len(points)
    ip = np.mod(weights @ datum.form_int @ points.T, period)
    if int(mults.sum()) >= 2 ** 53:
        raise NumericCheckError("representation too large for exact phase binning")
    flat = np.bincount((ip + period * np.arange(P)[None, :]).ravel(),
                       weights=np.repeat(mults, P).astype(np.float64), minlength=P * period)
    c = np.rint(flat).astype(np.int64).reshape(P, period).astype(object)
    phi = _cyclotomic(period)
    d = len(phi) - 1
    for j in range(period - 1, d - 1, -1):
        top = c[:, j]
        if any(top):
            c[:, j - d:j + 1] -= np.outer(top, phi)
    zeta = np.exp(-2j * pi * np.arange(d) / period)
    return c[:, :d].astype(np.float64) @ zeta


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def s_matrix(spec: LevelSpec) -> ModularS:
    """Kac-Peterson S-matrix: vacuum row by the product formula, other rows
    as finite characters evaluated at the points -2 pi i (lam' + rho)/(k + h^v)."""
    datum = spec.datum
    listing = enumerate_level_weights(spec)
    vac = s_row_vacuum(spec)
    points = np.array(listing.weights, dtype=np.int64) + 1

    def row(lam):
        w, m = all_weights(datum, lam)
        return _phase_sums(datum, w, m, points, spec.shift)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(row, listing.weights))
    entries = np.array(rows) * vac[None, :]
    entries[0] = vac
    entries.setflags(write=False)
    S = ModularS(listing, entries)
    check_modular_s(S)
    return S


def check_modular_s(S: ModularS, tol: float = STRUCTURAL_TOL) -> None:
    M = S.entries
    asym = np.max(np.abs(M - M.T))
    unit = np.max(np.abs(M @ M.conj().T - np.eye(len(M))))
    if unit > tol:
        raise NumericCheckError(f"S-matrix not unitary: max deviation {unit:.3e}")
    if asym > tol:
        raise NumericCheckError(f"S-matrix not symmetric: max deviation {asym:.3e}")
    if np.any(M[0].real <= 0) or np.max(np.abs(M[0].imag)) > 1e-10:
        raise NumericCheckError("vacuum row of S is not strictly positive")


def congruence_class_sums(spec: LevelSpec) -> Dict[tuple, float]:
    """sum of S_{0,lam}^2 over each class of P_+^k modulo Q."""
    listing = enumerate_level_weights(spec)
    row = s_row_vacuum(spec)
    out: Dict[tuple, float] = {}
    for lam, s in zip(listing, row):
        key = congruence_class(spec.datum, lam)
        out[key] = out.get(key, 0.0) + s * s
    return out


# ---------------------------------------------------------------- Weyl-sum oracle

WEYL_GROUP_RANK_LIMIT = 3


@lru_cache(maxsize=None)
def weyl_group(datum: RootDatum) -> Tuple[Tuple[np.ndarray, int], ...]:
    """Every Weyl group element as (matrix on Dynkin labels, determinant sign)."""
    if datum.rank > WEYL_GROUP_RANK_LIMIT:
        raise ValueError("Weyl group is only materialized for rank <= 3")
    r = datum.rank
    A = np.array(datum.cartan, dtype=np.int64)
    gens = []
    for i in range(r):
        s = np.eye(r, dtype=np.int64)
        s[:, i] -= A[:, i]
        gens.append(s)
    eye = np.eye(r, dtype=np.int64)
    seen = {eye.tobytes(): (eye, 1)}
    frontier = [(eye, 1)]
    while frontier:
        nxt = []
        for g, sign in frontier:
            for s in gens:
                h = s @ g
                key = h.tobytes()
                if key not in seen:
                    seen[key] = (h, -sign)
                    nxt.append((h, -sign))
        frontier = nxt
    return tuple(seen.values())


def coroot_lattice_index(datum: RootDatum) -> int:
    """``|P / Q^v|`` via the simple coroots alpha_i / (<alpha_i, alpha_i>/2)."""
    det = Fraction(int(round(np.linalg.det(np.array(datum.cartan, dtype=float)))))
    for length in datum.root_lengths:
        det /= length / 2
    assert det.denominator == 1
    return abs(int(det))


def s_matrix_weyl_sum(spec: LevelSpec) -> np.ndarray:
    """Independent oracle: the alternating sum over the full Weyl group."""
    datum = spec.datum
    n = spec.shift
    listing = enumerate_level_weights(spec)
    pts = np.array(listing.weights, dtype=np.int64) + 1
    norm = 1j ** len(datum.positive_roots) / sqrt(coroot_lattice_index(datum) * n ** datum.rank)
    period = n * datum.form_den
    out = np.zeros((len(pts), len(pts)), dtype=complex)
    for w, sign in weyl_group(datum):
        ip = np.mod((pts @ w.T) @ datum.form_int @ pts.T, period)
        out += sign * np.exp(-2j * pi * ip / period)
    return norm * out


# ---------------------------------------------------------------- simple currents

def affine_cartan(datum: RootDatum) -> Tuple[Tuple[int, ...], ...]:
    """Untwisted affine Cartan matrix, node 0 first."""
    r = datum.rank
    theta = datum.theta
    lengths = datum.root_lengths
    rows = [[2] + [0] * r]
    for j in range(r):
        # a_0j = 2<-theta, alpha_j>/2 ;  <theta, alpha_j> = theta_j <alpha_j, alpha_j>/2
        rows[0][j + 1] = -int(theta[j] * lengths[j] / 2)
    for i in range(r):
        rows.append([-theta[i]] + list(datum.cartan[i]))
    return tuple(tuple(x) for x in rows)


def _diagram_automorphisms(M) -> List[Tuple[int, ...]]:
    n = len(M)
    found = []

    def extend(perm):
        i = len(perm)
        if i == n:
            found.append(tuple(perm))
            return
        for t in range(n):
            if t in perm or M[t][t] != M[i][i]:
                continue
            if all(M[perm[j]][t] == M[j][i] and M[t][perm[j]] == M[i][j] for j in range(i)):
                extend(perm + [t])

    extend([])
    return found


def _act(perm, extended):
    out = [0] * len(extended)
    for j, x in enumerate(extended):
        out[perm[j]] = x
    return out


@lru_cache(maxsize=None)
def simple_current_automorphisms(datum: RootDatum) -> Dict[int, Tuple[int, ...]]:
    """Affine-diagram automorphisms realizing P^v/Q^v, keyed by the node the
    affine node 0 is sent to (0 for the trivial class).

    Of all diagram automorphisms, the simple currents are those whose linear
    part on finite weights lies in W; a weight with distinct labels detects
    any leftover finite-diagram symmetry."""
    probe = tuple(range(1, datum.rank + 1))
    result: Dict[int, Tuple[int, ...]] = {}
    for perm in _diagram_automorphisms(affine_cartan(datum)):
        ext = _act(perm, [-level(datum, probe)] + list(probe))
        if to_dominant(datum, ext[1:])[0] == probe:
            if perm[0] in result:
                raise AssertionError("two simple currents move node 0 to the same place")
            result[perm[0]] = perm
    if sorted(result) != sorted(datum.coweight_reps):
        raise AssertionError(f"simple currents hit {sorted(result)}, expected {datum.coweight_reps}")
    return dict(sorted(result.items()))


def apply_simple_current(spec: LevelSpec, node: int, lam) -> Weight:
    perm = simple_current_automorphisms(spec.datum)[node]
    lam = tuple(lam)
    ext = _act(perm, [spec.level - level(spec.datum, lam)] + list(lam))
    return tuple(ext[1:])


@dataclass(frozen=True)
class SimpleCurrentTable:
    spec: LevelSpec
    maps: Dict[int, Tuple[int, ...]]   # class -> permutation of listing indices

    def apply(self, node: int, lam) -> Weight:
        listing = enumerate_level_weights(self.spec)
        return listing.weights[self.maps[node][listing.index(lam)]]

    def compose(self, a: int, b: int) -> int:
        """Class of (apply a) after (apply b)."""
        pa, pb = self.maps[a], self.maps[b]
        target = tuple(pa[i] for i in pb)
        for c, p in self.maps.items():
            if p == target:
                return c
        raise AssertionError("simple currents are not closed under composition")


@lru_cache(maxsize=None)
def simple_current_action(spec: LevelSpec) -> SimpleCurrentTable:
    listing = enumerate_level_weights(spec)
    maps = {}
    for node in spec.datum.coweight_reps:
        maps[node] = tuple(listing.index(apply_simple_current(spec, node, lam)) for lam in listing)
    return SimpleCurrentTable(spec, maps)

