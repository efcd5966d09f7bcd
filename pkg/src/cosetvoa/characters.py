"""Graded characters of integrable modules and branching functions of the
diagonal embedding L(k+l) -> L(k) x L(l).

Graded formal characters live on dense integer grids over Dynkin-label space,
one array per grade. Grade n of L(k, lam) is computed as

    sum_beta  q^{d(beta)} sign(x_beta) ch_fin(dom(x_beta) - rho)  *  E^{-1}

with x_beta = lam + rho + (k + h^v) beta over the coroot lattice and
E = prod_{n>=1} (1 - q^n)^rank prod_{alpha in roots} (1 - q^n e^alpha).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from .affine import LevelSpec, central_charge, conformal_weight, enumerate_level_weights
from .liealg import (RootDatum, Weight, all_weights, in_root_lattice, level,
                     to_dominant, to_root_coords, weight_system)

RANK_GUARD = 3
DEFAULT_ORDER = 10


class ScaleGuardError(ValueError):
    pass


class BranchingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QSeries:
    """sum_n coeffs[n] q^(offset + n), known through ``order`` grades."""
    offset: Fraction
    coeffs: Tuple[int, ...]
    order: int
    central_charge: Fraction = Fraction(0)

    @property
    def conformal_weight(self) -> Fraction:
        return self.offset + self.central_charge / 24

    def exponents(self):
        return [self.offset + n for n in range(len(self.coeffs))]


@dataclass(frozen=True, eq=False)
class FormalCharacter:
    datum: RootDatum
    grades: Tuple[Dict[Weight, int], ...]       # dominant multiplicities per grade
    radius: int = field(repr=False)
    grid: np.ndarray = field(repr=False)        # shape (order+1, (2 radius+1,)*rank)

    @property
    def order(self) -> int:
        return len(self.grades) - 1

    def dimensions(self) -> List[int]:
        return [int(g.sum()) for g in self.grid]


def _guard(datum: RootDatum):
    if datum.rank > RANK_GUARD:
        raise ScaleGuardError(
            f"characters are limited to rank <= {RANK_GUARD}; {datum.spec} has rank {datum.rank}")


# ---------------------------------------------------------------- grid helpers

def _place(dst: np.ndarray, dst_radius: int, src: np.ndarray, src_radius: int, shift, scale=1):
    """dst += scale * (src translated by ``shift``); the image must fit."""
    sl = tuple(slice(dst_radius - src_radius + s, dst_radius + src_radius + s + 1) for s in shift)
    dst[sl] += scale * src


def _shift_add(dst: np.ndarray, src: np.ndarray, shift):
    """dst += src translated by ``shift`` on the same grid, cropping the edge."""
    d_sl, s_sl = [], []
    for s, size in zip(shift, src.shape):
        if s >= 0:
            d_sl.append(slice(s, size))
            s_sl.append(slice(0, size - s))
        else:
            d_sl.append(slice(0, size + s))
            s_sl.append(slice(-s, size))
    dst[tuple(d_sl)] += src[tuple(s_sl)]


def _dominant_dict(arr: np.ndarray, radius: int) -> Dict[Weight, int]:
    dom = arr[(slice(radius, None),) * arr.ndim]
    return {tuple(int(x) for x in idx): int(dom[idx]) for idx in zip(*np.nonzero(dom))}


def _root_label_bound(datum: RootDatum) -> int:
    return max(abs(x) for a in datum.positive_roots for x in a)


# ---------------------------------------------------------------- E^{-1}

@lru_cache(maxsize=None)
def loop_denominator_inverse(datum: RootDatum, order: int) -> Tuple[int, np.ndarray]:
    """``(radius, grid)`` for 1/E truncated at ``order``."""
    _guard(datum)
    radius = order * _root_label_bound(datum)
    shape = (order + 1,) + (2 * radius + 1,) * datum.rank
    Y = np.zeros(shape, dtype=np.int64)
    Y[(0,) + (radius,) * datum.rank] = 1
    roots = list(datum.positive_roots) + [tuple(-x for x in a) for a in datum.positive_roots]
    roots += [(0,) * datum.rank] * datum.rank
    for n in range(1, order + 1):
        for alpha in roots:
            # multiply by 1/(1 - q^n e^alpha)
            for g in range(n, order + 1):
                _shift_add(Y[g], Y[g - n], alpha)
    Y.setflags(write=False)
    return radius, Y


# ---------------------------------------------------------------- characters

def _coroot_labels(datum: RootDatum) -> np.ndarray:
    """Dynkin labels of the simple coroots alpha_i / (<alpha_i, alpha_i>/2), as rows."""
    A = np.array(datum.cartan, dtype=object)
    rows = []
    for i in range(datum.rank):
        half = datum.root_lengths[i] / 2
        col = [Fraction(int(x)) / half for x in A[:, i]]
        assert all(c.denominator == 1 for c in col)
        rows.append([int(c) for c in col])
    return np.array(rows, dtype=np.int64)


def numerator_terms(spec: LevelSpec, lam, order: int):
    """Translation terms of the Weyl-Kac numerator with depth <= order:
    ``(depth, sign, finite highest weight)``."""
    datum = spec.datum
    n = spec.shift
    B = _coroot_labels(datum)
    G = datum.form_int
    den = datum.form_den
    top = np.array(lam, dtype=np.int64) + 1
    norm_top = int(top @ G @ top)
    # |top + n B^T m|^2 <= |top|^2 + 2 n order ; bound m coordinatewise
    gram = (B @ G @ B.T).astype(float) / den
    radius2 = (norm_top / den + 2 * n * order) / n ** 2
    centre = -np.linalg.solve(gram, (B @ G @ top).astype(float) / den) / n
    widths = np.sqrt(radius2 * np.diag(np.linalg.inv(gram)))
    ranges = [range(floor(c - w) - 1, ceil(c + w) + 2) for c, w in zip(centre, widths)]
    terms = []
    for m in itertools.product(*ranges):
        x = top + n * (np.array(m, dtype=np.int64) @ B)
        num = int(x @ G @ x) - norm_top
        depth, rem = divmod(num, 2 * n * den)
        if rem:
            raise AssertionError("non-integral depth in the affine Weyl numerator")
        if depth > order:
            continue
        dom, sign = to_dominant(datum, x.tolist())
        if sign:
            terms.append((depth, sign, tuple(v - 1 for v in dom)))
    terms.sort()
    return terms


@lru_cache(maxsize=None)
def _affine_character(spec: LevelSpec, lam: Weight, order: int) -> FormalCharacter:
    datum = spec.datum
    ry, Y = loop_denominator_inverse(datum, order)
    terms = numerator_terms(spec, lam, order)
    fin = {t[2]: all_weights(datum, t[2]) for t in terms}
    rf = max(int(np.abs(w).max()) for w, _ in fin.values())
    radius = ry + rf
    grid = np.zeros((order + 1,) + (2 * radius + 1,) * datum.rank, dtype=np.int64)
    for depth, sign, hw in terms:
        weights, mults = fin[hw]
        for mu, m in zip(weights.tolist(), mults.tolist()):
            for g in range(depth, order + 1):
                _place(grid[g], radius, Y[g - depth], ry, mu, sign * m)
    grid.setflags(write=False)
    grades = tuple(_dominant_dict(grid[g], radius) for g in range(order + 1))
    if grades[0] != weight_system(datum, lam):
        raise AssertionError(f"grade 0 of L({spec.level}, {lam}) is not the finite module")
    if any(v < 0 for gr in grades for v in gr.values()):
        raise AssertionError("negative multiplicity in an integrable character")
    return FormalCharacter(datum, grades, radius, grid)


def affine_character(spec: LevelSpec, lam, order: int = DEFAULT_ORDER) -> Tuple[FormalCharacter, QSeries]:
    _guard(spec.datum)
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    lam = tuple(lam)
    h = conformal_weight(spec, lam)
    ch = _affine_character(spec, lam, order)
    c = central_charge(spec)
    return ch, QSeries(h - c / 24, tuple(ch.dimensions()), order, c)


# ---------------------------------------------------------------- branching

def _product_grid(x: FormalCharacter, y: FormalCharacter) -> Tuple[int, np.ndarray]:
    order = min(x.order, y.order)
    radius = x.radius + y.radius
    out = np.zeros((order + 1,) + (2 * radius + 1,) * x.datum.rank, dtype=np.int64)
    for a in range(order + 1):
        xa = x.grid[a]
        for idx in zip(*np.nonzero(xa)):
            mu = [int(i) - x.radius for i in idx]
            m = int(xa[idx])
            for b in range(order + 1 - a):
                _place(out[a + b], radius, y.grid[b], y.radius, mu, m)
    return radius, out


def _embed(arr: np.ndarray, src_radius: int, dst_radius: int) -> np.ndarray:
    out = np.zeros((2 * dst_radius + 1,) * arr.ndim, dtype=arr.dtype)
    if src_radius <= dst_radius:
        _place(out, dst_radius, arr, src_radius, (0,) * arr.ndim)
        return out
    cut = src_radius - dst_radius
    inner = arr[(slice(cut, cut + 2 * dst_radius + 1),) * arr.ndim]
    if inner.sum() != arr.sum() or np.abs(inner).sum() != np.abs(arr).sum():
        raise BranchingError("character support exceeds the product grid")
    return inner.copy()


def _height(datum: RootDatum, mu) -> Fraction:
    return sum(to_root_coords(datum, mu))


@dataclass(frozen=True)
class Branching:
    """Branching functions of L(k, dot) x L(l, ddot) into L(k+l, .)."""
    spec_k: LevelSpec
    dot: Weight
    spec_l: LevelSpec
    ddot: Weight
    order: int
    series: Dict[Weight, QSeries]
    raw: Dict[Weight, Tuple[int, ...]]             # multiplicity by product grade 0..order


def _check_pair(spec_k: LevelSpec, spec_l: LevelSpec):
    if spec_k.datum is not spec_l.datum:
        raise ValueError("branching needs the same simple Lie algebra on both factors")
    _guard(spec_k.datum)


@lru_cache(maxsize=None)
def _branching(spec_k: LevelSpec, dot: Weight, spec_l: LevelSpec, ddot: Weight, order: int) -> Branching:
    datum = spec_k.datum
    spec_kl = LevelSpec(datum, spec_k.level + spec_l.level)
    x, _ = affine_character(spec_k, dot, order)
    y, _ = affine_character(spec_l, ddot, order)
    radius, prod = _product_grid(x, y)
    dom = prod[(slice(None),) + (slice(radius, None),) * datum.rank]
    found: List[Tuple[Weight, int, int]] = []        # (lam, grade, multiplicity)
    for g in range(order + 1):
        resid = dom[g].copy()
        for lam, g0, m in found:
            ch = _affine_character(spec_kl, lam, order)
            resid -= m * _embed(ch.grid[g - g0], ch.radius, radius)[(slice(radius, None),) * datum.rank]
        while True:
            nz = list(zip(*np.nonzero(resid)))
            if not nz:
                break
            top = max(nz, key=lambda idx: (_height(datum, tuple(int(i) for i in idx)), idx))
            lam = tuple(int(i) for i in top)
            m = int(resid[top])
            if m < 0:
                raise BranchingError(f"negative multiplicity {m} for {lam} at grade {g}")
            if level(datum, lam) > spec_kl.level:
                raise BranchingError(f"highest weight {lam} at grade {g} is not integrable at level {spec_kl.level}")
            for mu, mm in weight_system(datum, lam).items():
                resid[mu] -= m * mm
            found.append((lam, g, m))

    h_dot, h_ddot = conformal_weight(spec_k, dot), conformal_weight(spec_l, ddot)
    c_coset = central_charge(spec_k) + central_charge(spec_l) - central_charge(spec_kl)
    raw: Dict[Weight, List[int]] = {}
    for lam, g, m in found:
        raw.setdefault(lam, [0] * (order + 1))[g] += m
    series = {}
    listing = enumerate_level_weights(spec_kl)
    for lam in sorted(raw, key=listing.index):
        coeffs = raw[lam]
        first = next(i for i, v in enumerate(coeffs) if v)
        offset = h_dot + h_ddot - conformal_weight(spec_kl, lam) - c_coset / 24 + first
        series[lam] = QSeries(offset, tuple(coeffs[first:]), order, c_coset)
    return Branching(spec_k, dot, spec_l, ddot, order,
                     series, {lam: tuple(raw[lam]) for lam in series})


def branching(spec_k: LevelSpec, dot, spec_l: LevelSpec, ddot, order: int = DEFAULT_ORDER) -> Dict[Weight, QSeries]:
    """Nonzero branching functions b^lam_{dot, ddot}(q), keyed by lam in P_+^{k+l}."""
    return branching_data(spec_k, dot, spec_l, ddot, order).series


def branching_data(spec_k: LevelSpec, dot, spec_l: LevelSpec, ddot, order: int = DEFAULT_ORDER) -> Branching:
    _check_pair(spec_k, spec_l)
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    dot, ddot = tuple(dot), tuple(ddot)
    for s, w in ((spec_k, dot), (spec_l, ddot)):
        if w not in enumerate_level_weights(s):
            raise ValueError(f"{w} is not in P_+^{s.level}")
    return _branching(spec_k, dot, spec_l, ddot, order)


@dataclass(frozen=True)
class DecompositionCheck:
    ok: bool
    grade: Optional[int] = None
    weight: Optional[Weight] = None

    def __bool__(self):
        return self.ok


def verify_decomposition(spec_k: LevelSpec, dot, spec_l: LevelSpec, ddot,
                         order: int = DEFAULT_ORDER) -> DecompositionCheck:
    """Check ch(k, dot) ch(l, ddot) = sum_lam ch(k+l, lam) b^lam on every
    weight (not only dominant ones) through ``order`` grades."""
    data = branching_data(spec_k, dot, spec_l, ddot, order)
    datum = spec_k.datum
    spec_kl = LevelSpec(datum, spec_k.level + spec_l.level)
    x, _ = affine_character(spec_k, data.dot, order)
    y, _ = affine_character(spec_l, data.ddot, order)
    radius, lhs = _product_grid(x, y)
    rhs = np.zeros_like(lhs)
    for lam, coeffs in data.raw.items():
        ch = _affine_character(spec_kl, lam, order)
        for g0, m in enumerate(coeffs):
            if not m:
                continue
            for g in range(g0, order + 1):
                rhs[g] += m * _embed(ch.grid[g - g0], ch.radius, radius)
    for g in range(order + 1):
        diff = np.argwhere(lhs[g] != rhs[g])
        if len(diff):
            return DecompositionCheck(False, g, tuple(int(i) - radius for i in diff[0]))
    return DecompositionCheck(True)


def zero_weight_triples(datum: RootDatum, k: int, l: int):
    """Triples (k L_i, l L_i, (k+l) L_i) for i in J and L_0 = 0."""
    out = []
    for i in datum.coweight_reps:
        base = [0] * datum.rank
        if i:
            base[i - 1] = 1
        out.append(tuple(tuple(c * b for b in base) for c in (k, l, k + l)))
    return out


def coset_conformal_weights(spec_k: LevelSpec, spec_l: LevelSpec, order: int = DEFAULT_ORDER):
    """Conformal weight of every nonzero multiplicity space, keyed by triple."""
    out = {}
    for dot in enumerate_level_weights(spec_k):
        for ddot in enumerate_level_weights(spec_l):
            for lam, s in branching(spec_k, dot, spec_l, ddot, order).items():
                out[(dot, ddot, lam)] = s.conformal_weight
    return out


def root_lattice_consistent(spec_k: LevelSpec, dot, spec_l: LevelSpec, ddot, order: int = DEFAULT_ORDER) -> bool:
    datum = spec_k.datum
    return all(in_root_lattice(datum, tuple(a + b - c for a, b, c in zip(dot, ddot, lam)))
               for lam in branching(spec_k, dot, spec_l, ddot, order))


# ---------------------------------------------------------------- oracles

def theta_over_eta_a1_vacuum(order: int) -> List[int]:
    """Coefficients of sum_n q^{n^2} / prod_m (1 - q^m) through ``order``."""
    theta = [0] * (order + 1)
    n = 0
    while n * n <= order:
        theta[n * n] += 1 if n == 0 else 2
        n += 1
    out = theta[:]
    for m in range(1, order + 1):
        for g in range(m, order + 1):
            out[g] += out[g - m]
    return out


def virasoro_minimal_character(p: int, pp: int, r: int, s: int, order: int) -> Tuple[Fraction, List[int]]:
    """Minimal-model character of M(p, pp) via the Rocha-Caridi alternating sum.

    Returns (h_{r,s}, coefficients of q^{h + n}, n = 0..order)."""
    h = Fraction((p * r - pp * s) ** 2 - (p - pp) ** 2, 4 * p * pp)
    acc = [0] * (order + 1)
    span = int(sqrt(order)) + 3
    for n in range(-span, span + 1):
        for sign, e in ((1, (2 * p * pp * n + p * r - pp * s)), (-1, (2 * p * pp * n + p * r + pp * s))):
            expo = Fraction(e * e - (p - pp) ** 2, 4 * p * pp) - h
            if expo.denominator != 1:
                raise AssertionError("Rocha-Caridi exponent is not integral")
            if 0 <= expo <= order:
                acc[int(expo)] += sign
    for m in range(1, order + 1):
        for g in range(m, order + 1):
            acc[g] += acc[g - m]
    return h, acc
