"""Finite-dimensional simple Lie algebra combinatorics.

Weights are integer tuples of Dynkin labels (coefficients on the fundamental
weights). Node indices are 0-based inside tuples; the special-node set ``J``
and the simple-current class labels use the 1-based Bourbaki numbering, with
0 standing for the trivial class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm, prod
from typing import Dict, List, Tuple

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form

Weight = Tuple[int, ...]

RANK_BOUNDS = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (3, None),
               "E": (6, 8), "F": (4, 4), "G": (2, 2)}

# classical positive-root counts, used only as a cross-check
_POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


class InvalidAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in RANK_BOUNDS:
            raise InvalidAlgebraError(f"unknown series {self.series!r}; expected one of A-G")
        lo, hi = RANK_BOUNDS[self.series]
        if not isinstance(self.rank, int) or self.rank < lo or (hi is not None and self.rank > hi):
            bound = f">= {lo}" if hi is None else (f"= {lo}" if lo == hi else f"in {lo}..{hi}")
            raise InvalidAlgebraError(
                f"series {self.series} needs rank {bound}, got {self.rank}")

    def __str__(self):
        return f"{self.series}{self.rank}"


def _edges(series: str, n: int) -> List[Tuple[int, int]]:
    if series == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if series == "E":
        # Bourbaki: 1-3-4-5-...-n with 2 attached to 4
        return [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
    return [(i, i + 1) for i in range(n - 1)]


def cartan_matrix(spec: AlgebraSpec) -> Tuple[Tuple[int, ...], ...]:
    """Cartan matrix ``a_ij = 2<a_i, a_j>/<a_i, a_i>`` in Bourbaki numbering."""
    n = spec.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in _edges(spec.series, n):
        a[i][j] = a[j][i] = -1
    s = spec.series
    if s == "B":
        a[n - 1][n - 2] = -2      # alpha_n short
    elif s == "C":
        a[n - 2][n - 1] = -2      # alpha_n long
    elif s == "F":
        a[2][1] = -2              # alpha_3, alpha_4 short
    elif s == "G":
        a[0][1] = -3              # alpha_1 short
    return tuple(tuple(r) for r in a)


@dataclass(frozen=True, eq=False)
class RootDatum:
    spec: AlgebraSpec
    cartan: Tuple[Tuple[int, ...], ...]
    form: Tuple[Tuple[Fraction, ...], ...]
    simple_roots: Tuple[Weight, ...]
    positive_roots: Tuple[Weight, ...]
    positive_roots_rc: Tuple[Tuple[int, ...], ...]   # root coordinates
    rho: Weight
    theta: Weight
    dual_coxeter: int
    marks: Tuple[int, ...]
    comarks: Tuple[int, ...]
    center_order: int
    J: Tuple[int, ...]
    coweight_reps: Tuple[int, ...]
    root_lengths: Tuple[Fraction, ...]               # <alpha_i, alpha_i>
    # integer-scaled form: form == form_int / form_den
    form_int: np.ndarray = field(repr=False)
    form_den: int = 1

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    def __repr__(self):
        return f"RootDatum({self.spec})"


def _symmetrizer(cartan) -> List[Fraction]:
    """Root lengths up to scale: d_i a_ij = d_j a_ji."""
    n = len(cartan)
    d: List[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                stack.append(j)
    return d  # type: ignore[return-value]


def _positive_roots(cartan) -> List[Tuple[int, ...]]:
    """Positive roots in simple-root coordinates, generated by string closure."""
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = list(simple)
    seen = set(roots)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            labels = [sum(cartan[i][j] * beta[j] for j in range(n)) for i in range(n)]
            for i in range(n):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) not in seen:
                        break
                    p += 1
                if p - labels[i] > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in seen:
                        seen.add(up)
                        nxt.append(up)
                        roots.append(up)
        layer = nxt
    roots.sort(key=lambda r: (sum(r), r))
    return roots


def _lattice_index(rows: List[Weight]) -> int:
    """Index in Z^r of the lattice spanned by integer ``rows`` (full rank)."""
    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    r = len(rows[0])
    diag = [abs(int(snf[i, i])) for i in range(r)]
    if 0 in diag:
        raise ValueError("generators do not span a full-rank lattice")
    return prod(diag)


@lru_cache(maxsize=None)
def build_algebra(series: str, rank: int) -> RootDatum:
    spec = AlgebraSpec(series, rank)
    cartan = cartan_matrix(spec)
    n = rank
    A = sympy.Matrix(cartan)
    Ainv = A.inv()
    d = _symmetrizer(cartan)
    rc = _positive_roots(cartan)
    theta_rc = rc[-1]
    # <theta, theta> = sum c_i c_j d_i a_ij under the unnormalized lengths
    tt = sum(theta_rc[i] * theta_rc[j] * d[i] * cartan[i][j] for i in range(n) for j in range(n))
    scale = Fraction(2) / tt
    d = [x * scale for x in d]                       # now <alpha_i, alpha_i>/2
    # form on fundamental weights: F = A^{-T} D
    form = tuple(tuple(Fraction(int(Ainv[j, i].p), int(Ainv[j, i].q)) * d[j] for j in range(n))
                 for i in range(n))
    for i in range(n):
        for j in range(n):
            assert form[i][j] == form[j][i]
    den = lcm(*(x.denominator for r in form for x in r))
    form_int = np.array([[int(x * den) for x in r] for r in form], dtype=np.int64)

    def labels(c):
        return tuple(sum(cartan[i][j] * c[j] for j in range(n)) for i in range(n))

    positive = tuple(labels(c) for c in rc)
    simple = tuple(labels(tuple(1 if j == i else 0 for j in range(n))) for i in range(n))
    theta = labels(theta_rc)
    marks = tuple(theta_rc)
    comarks = tuple(int(m * x) for m, x in zip(marks, d))
    J = tuple(i + 1 for i in range(n) if marks[i] == 1)
    rho = (1,) * n
    center = abs(int(A.det()))
    rho_theta = sum(form[i][j] * rho[i] * theta[j] for i in range(n) for j in range(n))

    datum = RootDatum(
        spec=spec, cartan=cartan, form=form, simple_roots=simple,
        positive_roots=positive, positive_roots_rc=tuple(rc), rho=rho, theta=theta,
        dual_coxeter=int(rho_theta) + 1, marks=marks, comarks=comarks,
        center_order=center, J=J, coweight_reps=(0,) + J,
        root_lengths=tuple(2 * x for x in d), form_int=form_int, form_den=den)
    if len(positive) != _POSITIVE_ROOT_COUNT[series](rank):
        raise AssertionError(f"root closure for {spec} gave {len(positive)} positive roots")
    if inner_product(datum, theta, theta) != 2:
        raise AssertionError("highest root not normalized")
    if center != len(J) + 1:
        raise AssertionError(f"|P/Q| = {center} but |J|+1 = {len(J) + 1}")
    return datum


def inner_product(datum: RootDatum, a, b) -> Fraction:
    n = datum.rank
    if len(a) != n or len(b) != n:
        raise ValueError(f"weights must have length {n}")
    F = datum.form
    return sum((F[i][j] * a[i] * b[j] for i in range(n) for j in range(n)), Fraction(0))


def scaled_inner(datum: RootDatum, a, b) -> int:
    """``form_den * <a, b>`` for integral weights, as an exact integer."""
    return int(np.asarray(a, dtype=np.int64) @ datum.form_int @ np.asarray(b, dtype=np.int64))


def level(datum: RootDatum, lam) -> int:
    """``<lam, theta>``, the level of a weight."""
    return sum(x * c for x, c in zip(lam, datum.comarks))


def to_root_coords(datum: RootDatum, lam) -> Tuple[Fraction, ...]:
    """Exact coefficients c with ``lam = sum c_i alpha_i``."""
    return _root_coords(datum, tuple(Fraction(x) for x in lam))


@lru_cache(maxsize=4096)
def _root_coords(datum, lam):
    return tuple(sum((x * y for x, y in zip(row, lam)), Fraction(0))
                 for row in _inverse_cartan(datum))


@lru_cache(maxsize=None)
def _inverse_cartan(datum: RootDatum):
    inv = sympy.Matrix(datum.cartan).inv()
    n = datum.rank
    return tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n))
                 for i in range(n))


def in_root_lattice(datum: RootDatum, lam) -> bool:
    return all(c.denominator == 1 for c in to_root_coords(datum, lam))


def congruence_class(datum: RootDatum, lam) -> Tuple[Fraction, ...]:
    """Canonical key of ``lam + Q`` in P/Q: root coordinates reduced mod 1."""
    return tuple(c - (c.numerator // c.denominator) for c in to_root_coords(datum, lam))


def reflect(datum: RootDatum, lam, i: int) -> Weight:
    """Simple reflection s_i in Dynkin-label coordinates."""
    a = lam[i]
    if a == 0:
        return tuple(lam)
    col = [r[i] for r in datum.cartan]
    return tuple(x - a * c for x, c in zip(lam, col))


def to_dominant(datum: RootDatum, lam) -> Tuple[Weight, int]:
    """Dominant representative of the W-orbit of ``lam`` and the sign of the
    reflecting element; sign is 0 when the orbit meets a wall."""
    lam = list(lam)
    cols = [[r[i] for r in datum.cartan] for i in range(datum.rank)]
    sign = 1
    while True:
        for i, x in enumerate(lam):
            if x < 0:
                col = cols[i]
                for j in range(len(lam)):
                    lam[j] -= x * col[j]
                sign = -sign
                break
        else:
            break
    dom = tuple(lam)
    if 0 in dom:
        sign = 0
    return dom, sign


def is_dominant(lam) -> bool:
    return all(x >= 0 for x in lam)


def _check_dominant(lam):
    if not is_dominant(lam) or any(int(x) != x for x in lam):
        raise ValueError(f"expected a dominant integral weight, got {tuple(lam)}")


def weyl_dimension(datum: RootDatum, lam) -> int:
    _check_dominant(lam)
    shifted = tuple(x + 1 for x in lam)
    num = Fraction(1)
    for alpha in datum.positive_roots:
        num *= Fraction(scaled_inner(datum, shifted, alpha), scaled_inner(datum, datum.rho, alpha))
    assert num.denominator == 1
    return int(num)


def height_below(datum: RootDatum, top, lam) -> Fraction:
    """Height of ``top - lam`` in the root lattice."""
    return sum(to_root_coords(datum, tuple(a - b for a, b in zip(top, lam))))


@lru_cache(maxsize=None)
def dominant_weights(datum: RootDatum, top: Weight) -> Tuple[Weight, ...]:
    """Dominant weights of the irreducible module with highest weight ``top``,
    ordered by depth below ``top``."""
    _check_dominant(top)
    found = {top}
    layer = [top]
    while layer:
        nxt = []
        for mu in layer:
            for alpha in datum.positive_roots:
                nu = tuple(x - y for x, y in zip(mu, alpha))
                if is_dominant(nu) and nu not in found:
                    found.add(nu)
                    nxt.append(nu)
        layer = nxt
    return tuple(sorted(found, key=lambda mu: (height_below(datum, top, mu), mu)))


@lru_cache(maxsize=None)
def weight_system(datum: RootDatum, top: Weight) -> Dict[Weight, int]:
    """Dominant weight multiplicities of L(top) by the Freudenthal recursion."""
    top = tuple(top)
    doms = dominant_weights(datum, top)
    top_rho = tuple(x + 1 for x in top)
    norm_top = scaled_inner(datum, top_rho, top_rho)
    roots = [np.array(a, dtype=np.int64) for a in datum.positive_roots]
    G = datum.form_int
    mult: Dict[Weight, int] = {top: 1}
    for mu in doms[1:]:
        mu_arr = np.array(mu, dtype=np.int64)
        mu_rho = mu_arr + 1
        denom = norm_top - int(mu_rho @ G @ mu_rho)
        total = 0
        for alpha in roots:
            a_g = G @ alpha
            j = 1
            while True:
                nu = mu_arr + j * alpha
                m = mult.get(to_dominant(datum, nu.tolist())[0], 0)
                if m == 0:
                    break
                total += m * int(nu @ a_g)
                j += 1
        value, rem = divmod(2 * total, denom)
        if rem:
            raise ArithmeticError(f"Freudenthal quotient not integral at {mu}")
        if value:
            mult[mu] = value
    return mult


@lru_cache(maxsize=None)
def weyl_orbit(datum: RootDatum, mu: Weight) -> np.ndarray:
    """All weights in the W-orbit of a dominant weight, as an int64 array.

    Walks down from ``mu`` applying s_i only where label i is positive, so
    each layer holds distinct elements and W is never materialized."""
    _check_dominant(mu)
    A = np.array(datum.cartan, dtype=np.int64)
    layer = np.array([mu], dtype=np.int64)
    layers = [layer]
    while len(layer):
        new = []
        for i in range(datum.rank):
            rows = layer[layer[:, i] > 0]
            if len(rows):
                new.append(rows - rows[:, i:i + 1] * A[:, i][None, :])
        if not new:
            break
        layer = np.unique(np.concatenate(new), axis=0)
        layers.append(layer)
    out = np.concatenate(layers)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def all_weights(datum: RootDatum, top: Weight) -> Tuple[np.ndarray, np.ndarray]:
    """Every weight of L(top) with its multiplicity: ``(weights, mults)``."""
    blocks, mults = [], []
    for mu, m in sorted(weight_system(datum, tuple(top)).items()):
        orb = weyl_orbit(datum, mu)
        blocks.append(orb)
        mults.append(np.full(len(orb), m, dtype=np.int64))
    w, m = np.concatenate(blocks), np.concatenate(mults)
    w.setflags(write=False)
    m.setflags(write=False)
    return w, m


def orbit_size(datum: RootDatum, mu) -> int:
    return len(weyl_orbit(datum, tuple(mu)))


@lru_cache(maxsize=None)
def long_root_index(datum: RootDatum) -> int:
    """``|P / Q_L|`` with Q_L the lattice spanned by the long roots."""
    longest = max(datum.root_lengths)
    longs = []
    for rc, lab in zip(datum.positive_roots_rc, datum.positive_roots):
        length = sum(rc[i] * rc[j] * datum.root_lengths[i] / 2 * datum.cartan[i][j]
                     for i in range(datum.rank) for j in range(datum.rank))
        if length == longest:
            longs.append(lab)
    return _lattice_index(longs)
