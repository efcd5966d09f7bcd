"""Diagonal coset C(L(k+l,0), L(k,0) x L(l,0)): module triples, simple-current
orbits, quantum dimensions, the coset S-matrix and its fusion rules."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .affine import (LevelSpec, check_modular_s, enumerate_level_weights,
                     s_matrix, simple_current_action)
from .fusion import INTEGRALITY_TOL, FusionTensor, IntegralityError, verlinde, verlinde_slab
from .liealg import RootDatum, Weight, in_root_lattice


class HypothesisError(RuntimeError):
    """A standing hypothesis of the module classification is not met."""


class ModuleTriple(NamedTuple):
    dot: Weight
    ddot: Weight
    lam: Weight

    def __str__(self):
        if len(self.dot) == 1:
            return "(" + ",".join(str(w[0]) for w in self) + ")"
        return "(" + ",".join("(" + ",".join(map(str, w)) + ")" for w in self) + ")"

    def fundamental_form(self) -> str:
        """Same triple written in fundamental weights, e.g. (Λ1,Λ1,2Λ1)."""
        def one(w):
            parts = [("" if c == 1 else str(c)) + f"Λ{i}" for i, c in enumerate(w, 1) if c]
            return "+".join(parts) or "0"
        return "(" + ",".join(one(w) for w in self) + ")"


def rationality_proven(datum: RootDatum, k: int, l: int) -> bool:
    """Rationality and C2-cofiniteness are known for E8 when one level is 2."""
    return datum.spec.series == "E" and datum.rank == 8 and 2 in (k, l)


@dataclass(frozen=True)
class CosetSpec:
    datum: RootDatum
    k: int
    l: int
    rationality_assumed: Optional[bool] = None

    def __post_init__(self):
        for name in ("k", "l"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.rationality_assumed is None:
            object.__setattr__(self, "rationality_assumed",
                               rationality_proven(self.datum, self.k, self.l))

    @property
    def levels(self) -> Tuple[LevelSpec, LevelSpec, LevelSpec]:
        d = self.datum
        return LevelSpec(d, self.k), LevelSpec(d, self.l), LevelSpec(d, self.k + self.l)


def enumerate_omega(spec: CosetSpec) -> List[ModuleTriple]:
    a, b, c = (enumerate_level_weights(s).weights for s in spec.levels)
    out = []
    for x, y, z in itertools.product(a, b, c):
        diff = tuple(p + q - r for p, q, r in zip(x, y, z))
        if in_root_lattice(spec.datum, diff):
            out.append(ModuleTriple(x, y, z))
    return out


def act(spec: CosetSpec, node: int, t: ModuleTriple) -> ModuleTriple:
    """Diagonal action of the class of h^node on a triple."""
    return ModuleTriple(*(simple_current_action(s).apply(node, w) for s, w in zip(spec.levels, t)))


@dataclass(frozen=True)
class Orbit:
    representative: ModuleTriple
    members: Tuple[ModuleTriple, ...]
    stabilizer: Tuple[int, ...]


@dataclass(frozen=True)
class OrbitSet:
    orbits: Tuple[Orbit, ...]
    group_order: int

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)


def orbit_decomposition(spec: CosetSpec) -> OrbitSet:
    omega = enumerate_omega(spec)
    classes = spec.datum.coweight_reps
    seen = set()
    orbits = []
    for t in omega:
        if t in seen:
            continue
        images = {c: act(spec, c, t) for c in classes}
        members = tuple(sorted(set(images.values())))
        stab = tuple(c for c in classes if images[c] == t)
        seen.update(members)
        orbits.append(Orbit(members[0], members, stab))
    orbits.sort(key=lambda o: o.representative)
    return OrbitSet(tuple(orbits), len(classes))


def fixed_points(spec: CosetSpec) -> List[Orbit]:
    return [o for o in orbit_decomposition(spec) if len(o.stabilizer) > 1]


def free_action_check(spec: CosetSpec) -> bool:
    """Stabilizers all trivial; the trivial group counts as acting freely."""
    return not fixed_points(spec)


def hypothesis_violations(spec: CosetSpec) -> List[str]:
    out = []
    if not spec.rationality_assumed:
        out.append(f"rationality and C2-cofiniteness of the coset for {spec.datum.spec}, "
                   f"k={spec.k}, l={spec.l} are not established (pass them as an assumption)")
    for o in fixed_points(spec):
        out.append(f"simple-current action is not free: fixed point {o.representative} "
                   f"= {o.representative.fundamental_form()} "
                   f"has stabilizer of order {len(o.stabilizer)} (classes {list(o.stabilizer)})")
    return out


def classify_irreducibles(spec: CosetSpec) -> List[ModuleTriple]:
    problems = hypothesis_violations(spec)
    if problems:
        raise HypothesisError("; ".join(problems))
    return [o.representative for o in orbit_decomposition(spec)]


def _vacuum_ratios(spec: CosetSpec):
    rows = [s_matrix(s).entries[0].real for s in spec.levels]
    listings = [enumerate_level_weights(s) for s in spec.levels]
    return rows, listings


def quantum_dimension(spec: CosetSpec, t) -> float:
    t = ModuleTriple(*(tuple(w) for w in t))
    rows, listings = _vacuum_ratios(spec)
    diff = tuple(p + q - r for p, q, r in zip(*t))
    if any(w not in lst for w, lst in zip(t, listings)) or not in_root_lattice(spec.datum, diff):
        raise ValueError(f"{t} is not in Omega")
    out = 1.0
    for w, row, lst in zip(t, rows, listings):
        out *= row[lst.index(w)] / row[0]
    return out


def global_dimension(spec: CosetSpec) -> float:
    s0 = [s_matrix(s).entries[0, 0].real for s in spec.levels]
    return 1.0 / (spec.datum.center_order ** 2 * (s0[0] * s0[1] * s0[2]) ** 2)


def global_dimension_from_qdims(spec: CosetSpec) -> float:
    return float(sum(quantum_dimension(spec, t) ** 2 for t in classify_irreducibles(spec)))


@dataclass(frozen=True, eq=False)
class CosetModularS:
    index: Tuple[ModuleTriple, ...]
    entries: np.ndarray

    @property
    def labels(self):
        return self.index

    def __len__(self):
        return len(self.index)


def _product_entry(spec: CosetSpec, mats, listings, t, u) -> complex:
    a, b, c = mats
    la, lb, lc = listings
    return (spec.datum.center_order
            * a[la.index(t.dot), la.index(u.dot)]
            * b[lb.index(t.ddot), lb.index(u.ddot)]
            * np.conj(c[lc.index(t.lam), lc.index(u.lam)]))


def coset_s_matrix(spec: CosetSpec) -> CosetModularS:
    reps = classify_irreducibles(spec)
    mats = [s_matrix(s).entries for s in spec.levels]
    listings = [enumerate_level_weights(s) for s in spec.levels]
    ia = np.array([listings[0].index(t.dot) for t in reps])
    ib = np.array([listings[1].index(t.ddot) for t in reps])
    ic = np.array([listings[2].index(t.lam) for t in reps])
    M = (spec.datum.center_order * mats[0][np.ix_(ia, ia)] * mats[1][np.ix_(ib, ib)]
         * np.conj(mats[2][np.ix_(ic, ic)]))
    M.setflags(write=False)
    S = CosetModularS(tuple(reps), M)
    check_modular_s(S)
    return S


def representative_independence_defect(spec: CosetSpec) -> float:
    """Largest change in an S-entry when a triple is replaced by another
    member of its orbit."""
    mats = [s_matrix(s).entries for s in spec.levels]
    listings = [enumerate_level_weights(s) for s in spec.levels]
    orbits = list(orbit_decomposition(spec))
    worst = 0.0
    for o1, o2 in itertools.product(orbits, repeat=2):
        base = _product_entry(spec, mats, listings, o1.representative, o2.representative)
        for m1, m2 in itertools.product(o1.members, o2.members):
            worst = max(worst, abs(_product_entry(spec, mats, listings, m1, m2) - base))
    return worst


def coset_fusion(spec: CosetSpec, tol: float = INTEGRALITY_TOL) -> FusionTensor:
    return verlinde(coset_s_matrix(spec), tol)


def _affine_tensors(spec: CosetSpec, index, tol: float):
    tensors = [verlinde(s_matrix(s), tol).coefficients for s in spec.levels]
    listings = [enumerate_level_weights(s) for s in spec.levels]
    pos = [np.array([lst.index(t[i]) for t in index]) for i, lst in enumerate(listings)]
    return tensors, pos


def affine_fusion_product(spec: CosetSpec, index, tol: float = INTEGRALITY_TOL) -> np.ndarray:
    """Entrywise product of the three affine fusion tensors, lifted to triples."""
    tensors, pos = _affine_tensors(spec, index, tol)
    out = np.ones((len(index),) * 3, dtype=np.int64)
    for N, p in zip(tensors, pos):
        out = out * N[np.ix_(p, p, p)]
    return out


@dataclass(frozen=True)
class FactorizationReport:
    ok: bool
    size: int
    max_deviation: float                 # worst distance of a Verlinde value from an integer
    mismatch: Optional[Tuple[int, int, int, int, int]] = None   # i, j, k, coset, product

    def __bool__(self):
        return self.ok


def factorization_check(spec: CosetSpec, tol: float = INTEGRALITY_TOL) -> FactorizationReport:
    """Compare Verlinde on the coset S-matrix with the product of the three
    affine fusion tensors, exactly, one slab N[i, :, :] at a time."""
    S = coset_s_matrix(spec)
    index = S.index
    tensors, pos = _affine_tensors(spec, index, tol)
    worst = 0.0
    for i in range(len(index)):
        raw = verlinde_slab(S.entries, i)
        rounded = np.rint(raw.real)
        worst = max(worst, float(np.max(np.abs(raw - rounded))))
        if worst > tol:
            raise IntegralityError(f"coset Verlinde value in row {i} is {worst:.3e} from an integer")
        prod = np.ones((len(index), len(index)), dtype=np.int64)
        for N, p in zip(tensors, pos):
            prod = prod * N[p[i]][np.ix_(p, p)]
        got = rounded.astype(np.int64)
        bad = np.argwhere(got != prod)
        if len(bad):
            j, k = (int(x) for x in bad[0])
            return FactorizationReport(False, len(index), worst, (i, j, k, int(got[j, k]), int(prod[j, k])))
    return FactorizationReport(True, len(index), worst)
