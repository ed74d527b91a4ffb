"""Kottwitz and Newton invariants, the set B(G, mu), and the dominance order."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd
from typing import Iterable, Sequence

import numpy as np

from ._linalg import ceil_frac, dot, frac_str, from_sympy, smith_decomposition, to_sympy
from .rootdata import (
    RatVec,
    RootDatum,
    WeylWord,
    as_cochar,
    dominant_representative,
    is_dominant,
    sigma_average,
    weyl_group_elements,
    weyl_matrix,
)


class KottwitzMismatchError(ValueError):
    """The Kottwitz points of two objects that must agree do not."""


@dataclass(frozen=True, order=True)
class KottwitzClass:
    """Element of ``pi_1(G)_sigma`` in its Smith presentation.

    ``moduli[i] == 0`` marks a free factor; otherwise ``coords[i]`` is
    reduced into ``[0, moduli[i])``.
    """

    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    def __add__(self, other: "KottwitzClass") -> "KottwitzClass":
        if other.moduli != self.moduli:
            raise ValueError("Kottwitz classes from different presentations")
        return KottwitzClass(_reduce(tuple(a + b for a, b in zip(self.coords, other.coords)), self.moduli), self.moduli)

    def to_list(self) -> list[int]:
        return list(self.coords)


def _reduce(coords, moduli):
    return tuple(c % m if m else c for c, m in zip(coords, moduli))


@dataclass(frozen=True)
class SigmaClass:
    """A sigma-conjugacy class, recorded by its invariants ``(kappa, nu)``."""

    kappa: KottwitzClass
    nu: RatVec

    def key(self):
        return (self.kappa.coords, self.nu.coords)

    def to_dict(self) -> dict:
        return {"kappa": self.kappa.to_list(), "nu": self.nu.to_strings()}

    def __str__(self) -> str:
        return f"[nu={self.nu}, kappa={list(self.kappa.coords)}]"


# ---------------------------------------------------------------------------
# Kottwitz point


@lru_cache(maxsize=None)
def kottwitz_presentation(datum: RootDatum) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Rows of the projection ``X_* -> pi_1(G)_sigma`` and the factor moduli.

    Smith form of ``[coroots | 1 - sigma]``; trivial factors are dropped and
    free rows are signed so their first nonzero entry is positive.
    """
    n = datum.rank
    cols = [list(c) for c in datum.simple_coroots]
    for j in range(n):
        cols.append([int(i == j) - datum.sigma_lattice[i][j] for i in range(n)])
    mat = [[col[i] for col in cols] for i in range(n)]
    diag, u, _ = smith_decomposition(mat)
    rows, moduli = [], []
    for i in range(n):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        row = list(u[i])
        if d == 0:
            lead = next((x for x in row if x), 0)
            if lead < 0:
                row = [-x for x in row]
        rows.append(tuple(row))
        moduli.append(d)
    return tuple(rows), tuple(moduli)


def kottwitz_point(datum: RootDatum, lam) -> KottwitzClass:
    lam = as_cochar(lam)
    if not lam.is_integral():
        raise ValueError(f"Kottwitz point needs an integral cocharacter, got {lam}")
    x = lam.as_ints()
    rows, moduli = kottwitz_presentation(datum)
    return KottwitzClass(_reduce(tuple(dot(row, x) for row in rows), moduli), moduli)


# ---------------------------------------------------------------------------
# Newton point


def _order_and_sum(a: np.ndarray) -> tuple[int, np.ndarray]:
    ident = np.eye(a.shape[0], dtype=np.int64)
    total = ident.copy()
    cur = a.copy()
    n = 1
    while not np.array_equal(cur, ident):
        total += cur
        cur = cur @ a
        n += 1
        if n > 10_000:
            raise ValueError("w sigma does not have finite order")
    return n, total


def newton_point(datum: RootDatum, lam, w: WeylWord = WeylWord()) -> RatVec:
    """Dominant representative of the ``(w sigma)``-average of ``lam``."""
    lam = as_cochar(lam)
    a = np.array(weyl_matrix(datum, w), dtype=np.int64) @ np.array(datum.sigma_lattice, dtype=np.int64)
    n, total = _order_and_sum(a)
    s = total @ np.array(lam.as_ints(), dtype=np.int64)
    avg = RatVec.cochar(Fraction(int(x), n) for x in s)
    return dominant_representative(datum, avg)[0]


# ---------------------------------------------------------------------------
# coroot coordinates and the dominance order


@lru_cache(maxsize=None)
def _coroot_dual(datum: RootDatum) -> tuple[tuple[Fraction, ...], ...]:
    return datum.fundamental_weights


def coroot_coefficients(datum: RootDatum, d) -> tuple[Fraction, ...] | None:
    """Coefficients of ``d`` in the simple coroots, or ``None`` if ``d`` is outside ``Q Phi^vee``."""
    d = as_cochar(d).coords
    coeffs = tuple(datum.pair(d, w) for w in _coroot_dual(datum))
    recon = [Fraction(0)] * datum.rank
    for c, cr in zip(coeffs, datum.simple_coroots):
        if c:
            recon = [x + c * y for x, y in zip(recon, cr)]
    if tuple(recon) != tuple(d):
        return None
    return coeffs


@lru_cache(maxsize=65536)
def _coroot_split(datum: RootDatum, nu: tuple) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    # nu = sum c_i alpha_i^vee + residual; differences lie in Q Phi^vee iff residuals agree
    coeffs = tuple(datum.pair(nu, w) for w in _coroot_dual(datum))
    residual = list(nu)
    for c, cr in zip(coeffs, datum.simple_coroots):
        if c:
            residual = [x - c * y for x, y in zip(residual, cr)]
    return coeffs, tuple(residual)


def dominance_leq(datum: RootDatum, b1: SigmaClass, b2: SigmaClass) -> bool:
    """``b1 <= b2``: same Kottwitz point and ``nu2 - nu1`` in the nonnegative coroot cone."""
    if b1.kappa != b2.kappa:
        return False
    c1, r1 = _coroot_split(datum, b1.nu.coords)
    c2, r2 = _coroot_split(datum, b2.nu.coords)
    return r1 == r2 and all(x <= y for x, y in zip(c1, c2))


def j_set(datum: RootDatum, nu) -> frozenset[int]:
    """Orbit indices ``i`` (1-based) with ``<nu, alpha_i> != 0``."""
    pairs = datum.root_pairings(as_cochar(nu).coords)
    return frozenset(i + 1 for i, rep in enumerate(datum.orbit_reps) if pairs[rep - 1] != 0)


def exponents(datum: RootDatum, mu, nu) -> tuple[Fraction, ...]:
    """``e_i = <mu - nu, omega_i>`` for every orbit."""
    d = (as_cochar(mu) - as_cochar(nu)).coords
    return tuple(datum.pair(d, w) for w in datum.orbit_weights)


def top_class(datum: RootDatum, mu) -> SigmaClass:
    """The class of ``varpi^mu``."""
    mu = as_cochar(mu)
    return SigmaClass(kottwitz_point(datum, mu), dominant_representative(datum, sigma_average(datum, mu))[0])


def in_bgmu(datum: RootDatum, mu, b: SigmaClass) -> bool:
    return dominance_leq(datum, b, top_class(datum, mu))


def is_hn_irreducible(datum: RootDatum, mu, b: SigmaClass) -> bool:
    """Hodge-Newton irreducibility: every ``<mu^diamond - nu, omega_i>`` is positive."""
    if not in_bgmu(datum, mu, b):
        raise ValueError(f"{b} is not in B(G, mu) for mu={as_cochar(mu)}")
    top = top_class(datum, mu)
    return all(e > 0 for e in exponents(datum, top.nu, b.nu))


# ---------------------------------------------------------------------------
# enumeration of classes with a fixed Kottwitz point


class ClassSolver:
    """Solve for the Newton point from its circle data.

    Every class ``b`` with ``kappa(b) = kappa(mu)`` is pinned down by
    ``J = J_nu(b)`` and the integers ``e_i`` for ``i`` in ``J``: the
    remaining exponents follow from ``<nu, alpha_j> = 0`` for ``j`` outside
    ``J``. Solutions are memoised, since valuation-pattern grids revisit
    the same circle data many times.
    """

    def __init__(self, datum: RootDatum, mu):
        self.datum = datum
        self.mu = as_cochar(mu)
        if not self.mu.is_integral():
            raise ValueError("mu must be integral")
        self.kappa = kottwitz_point(datum, self.mu)
        self.mu_diamond = sigma_average(datum, self.mu)
        pairs = datum.root_pairings(self.mu_diamond.coords)
        self.p = tuple(pairs[rep - 1] for rep in datum.orbit_reps)
        self.sizes = tuple(len(o) for o in datum.orbits)
        self.h = _orbit_cartan_scaled(datum)
        self._memo: dict = {}
        self._data_memo: dict = {}

    def solve(self, J: tuple[int, ...], n: tuple[int, ...]):
        """Return the exponent vector for circle data ``(J, n)``, or ``None`` if invalid.

        ``J`` holds 0-based orbit positions in increasing order.
        """
        key = (J, n)
        hit = self._memo.get(key, False)
        if hit is not False:
            return hit
        r = self.datum.r
        K = tuple(k for k in range(r) if k not in J)
        e = [Fraction(0)] * r
        for i, ni in zip(J, n):
            e[i] = Fraction(ni)
        if K:
            inv = _complement_inverse(self.datum, K)
            rhs = [self.p[k] - sum(self.h[k][i] * e[i] for i in J) for k in K]
            for row, k in zip(inv, K):
                e[k] = sum(a * b for a, b in zip(row, rhs))
        out = tuple(e)
        for i in J:
            if self.p[i] - sum(self.h[i][k] * out[k] for k in range(r)) <= 0:
                out = None
                break
        self._memo[key] = out
        return out

    def stratum_data(self, J: tuple[int, ...], n: tuple[int, ...]):
        """``(ceilings, class)`` for circle data ``(J, n)``, or ``None`` if invalid; memoised."""
        key = (J, n)
        hit = self._data_memo.get(key, False)
        if hit is not False:
            return hit
        e = self.solve(J, n)
        out = None if e is None else (tuple(ceil_frac(x) for x in e), self.sigma_class(e))
        self._data_memo[key] = out
        return out

    def newton_from_exponents(self, e: Sequence[Fraction]) -> RatVec:
        nu = list(self.mu_diamond.coords)
        for ek, size, ac in zip(e, self.sizes, self.datum.orbit_coroots):
            if ek:
                t = ek / size
                nu = [x - t * y for x, y in zip(nu, ac)]
        return RatVec.cochar(nu)

    def sigma_class(self, e: Sequence[Fraction]) -> SigmaClass:
        return SigmaClass(self.kappa, self.newton_from_exponents(e))


@lru_cache(maxsize=None)
def _orbit_cartan_scaled(datum: RootDatum) -> tuple[tuple[Fraction, ...], ...]:
    # h[j][k] = <a_k^vee, alpha_rep_j> / |O_k|, a_k^vee = orbit coroot sum
    out = []
    for rep in datum.orbit_reps:
        row = []
        for orb, ac in zip(datum.orbits, datum.orbit_coroots):
            row.append(Fraction(datum.pair(ac, datum.simple_roots[rep - 1]), len(orb)))
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def _complement_inverse(datum: RootDatum, K: tuple[int, ...]):
    h = _orbit_cartan_scaled(datum)
    sub = [[h[a][b] for b in K] for a in K]
    return from_sympy(to_sympy(sub).inv())


@lru_cache(maxsize=256)
def class_solver(datum: RootDatum, mu: tuple) -> ClassSolver:
    return ClassSolver(datum, mu)


def _solver(datum, mu) -> ClassSolver:
    return class_solver(datum, as_cochar(mu).coords)


def _subsets(r: int):
    for size in range(r + 1):
        yield from itertools.combinations(range(r), size)


def class_sort_key(datum: RootDatum, mu, b: SigmaClass):
    """Linear extension of the dominance order, largest first."""
    e = exponents(datum, mu, b.nu)
    return (sum(ceil_frac(x) for x in e), tuple(-x for x in b.nu.coords))


def enumerate_classes(datum: RootDatum, mu, lo: int, hi: int) -> list[SigmaClass]:
    """All classes with ``kappa = kappa(mu)`` whose exponents lie in ``[lo, hi]``."""
    solver = _solver(datum, mu)
    out = {}
    for J in _subsets(datum.r):
        for n in itertools.product(range(lo, hi + 1), repeat=len(J)):
            e = solver.solve(J, n)
            if e is None or any(not lo <= x <= hi for x in e):
                continue
            b = solver.sigma_class(e)
            out[b.key()] = b
    return sorted(out.values(), key=lambda b: class_sort_key(datum, mu, b))


def _check_mu(datum: RootDatum, mu) -> RatVec:
    mu = as_cochar(mu)
    if len(mu) != datum.rank:
        raise ValueError(f"mu has length {len(mu)}, expected {datum.rank}")
    if not mu.is_integral():
        raise ValueError(f"mu={mu} is not integral")
    if not is_dominant(datum, mu):
        raise ValueError(f"mu={mu} is not dominant")
    return mu


def enumerate_bgmu(datum: RootDatum, mu) -> list[SigmaClass]:
    """B(G, mu), largest class first."""
    mu = _check_mu(datum, mu)
    solver = _solver(datum, mu)
    caps = [floor(datum.pair(solver.mu_diamond.coords, w)) for w in datum.orbit_weights]
    out = {}
    for J in _subsets(datum.r):
        for n in itertools.product(*(range(0, caps[i] + 1) for i in J)):
            e = solver.solve(J, n)
            if e is None or any(x < 0 for x in e):
                continue
            b = solver.sigma_class(e)
            out[b.key()] = b
    return sorted(out.values(), key=lambda b: class_sort_key(datum, mu, b))


# ---------------------------------------------------------------------------
# brute-force oracle


def default_bound(mu) -> int:
    return max((abs(x) for x in as_cochar(mu).as_ints()), default=0) + 1


def _dominantize_batch(datum: RootDatum, v: np.ndarray) -> np.ndarray:
    f = np.array(datum._root_functionals, dtype=np.int64)
    cr = np.array(datum.simple_coroots, dtype=np.int64)
    v = v.copy()
    while True:
        pairs = v @ f.T
        neg = pairs < 0
        rows = np.nonzero(neg.any(axis=1))[0]
        if rows.size == 0:
            return v
        idx = neg[rows].argmax(axis=1)
        v[rows] -= pairs[rows, idx][:, None] * cr[idx]


def brute_force_bgmu(datum: RootDatum, mu, bound: int | None = None) -> list[SigmaClass]:
    """B(G, mu) from representatives ``varpi^lam w`` with ``lam`` in a coordinate box.

    Every ``lam`` with ``|lam_k| <= bound`` and every Weyl group element is
    tried; the invariants ``(kappa(lam), nu)`` are kept when ``kappa``
    matches and ``nu <= mu^diamond``.
    """
    mu = _check_mu(datum, mu)
    if bound is None:
        bound = default_bound(mu)
    n = datum.rank
    box = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    rows, moduli = kottwitz_presentation(datum)
    target = kottwitz_point(datum, mu).coords
    if rows:
        kap = box @ np.array(rows, dtype=np.int64).T
        for j, m in enumerate(moduli):
            if m:
                kap[:, j] %= m
        lam = box[(kap == np.array(target, dtype=np.int64)).all(axis=1)]
    else:
        lam = box
    sig = np.array(datum.sigma_lattice, dtype=np.int64)
    chunks = []
    for _, wm in weyl_group_elements(datum):
        a = np.array(wm, dtype=np.int64) @ sig
        order, total = _order_and_sum(a)
        u = np.unique(lam @ total.T, axis=0)
        chunks.append(np.hstack([np.full((len(u), 1), order, dtype=np.int64), u]))
    allv = np.unique(np.vstack(chunks), axis=0)
    dom = _dominantize_batch(datum, allv[:, 1:])
    g = np.gcd.reduce(np.hstack([allv[:, :1], dom]), axis=1)
    canon = np.unique(np.hstack([allv[:, :1] // g[:, None], dom // g[:, None]]), axis=0)
    canon = canon[_below_mask(datum, mu, canon)]
    kappa = kottwitz_point(datum, mu)
    out = {}
    for row in canon:
        den = int(row[0])
        b = SigmaClass(kappa, RatVec.cochar(Fraction(int(x), den) for x in row[1:]))
        out[b.key()] = b
    return sorted(out.values(), key=lambda b: class_sort_key(datum, mu, b))


@lru_cache(maxsize=None)
def _coroot_coordinate_matrix(datum: RootDatum) -> tuple[np.ndarray, int]:
    # integer matrix M and denominator den with den * (coroot coefficients of x) = x @ M
    cols = [[datum.pair(e, w) for w in datum.fundamental_weights] for e in np.eye(datum.rank, dtype=int).tolist()]
    den = 1
    for row in cols:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    m = np.array([[int(x * den) for x in row] for row in cols], dtype=np.int64).reshape(datum.rank, datum.ell)
    return m, den


def _below_mask(datum: RootDatum, mu: RatVec, canon: np.ndarray) -> np.ndarray:
    """Rows ``(N, u)`` with ``u / N <= mu^diamond`` in the coroot cone."""
    s = datum.sigma_order
    orbit_sum = np.zeros(datum.rank, dtype=np.int64)
    cur = mu.as_ints()
    for _ in range(s):
        orbit_sum += np.array(cur, dtype=np.int64)
        cur = datum.sigma(cur)
    # s * N * (mu^diamond - nu) as integers
    diff = canon[:, :1] * orbit_sum[None, :] - s * canon[:, 1:]
    m, den = _coroot_coordinate_matrix(datum)
    coeffs = diff @ m
    cr = np.array(datum.simple_coroots, dtype=np.int64).reshape(datum.ell, datum.rank)
    in_span = (coeffs @ cr == den * diff).all(axis=1)
    return in_span & (coeffs >= 0).all(axis=1)


def brute_force_stable(datum: RootDatum, mu, bound: int | None = None, max_bound: int = 12):
    """Grow the box from ``bound`` until two consecutive boxes give the same set.

    Returns ``(classes, bound)`` where ``bound`` is the first stable box.
    """
    mu = _check_mu(datum, mu)
    bound = default_bound(mu) if bound is None else bound
    prev = brute_force_bgmu(datum, mu, bound)
    while bound < max_bound:
        cur = brute_force_bgmu(datum, mu, bound + 1)
        if {b.key() for b in cur} == {b.key() for b in prev}:
            return prev, bound
        prev, bound = cur, bound + 1
    raise RuntimeError(f"brute force did not stabilise below bound {max_bound}")


def sigma_class_from_dict(datum: RootDatum, d: dict) -> SigmaClass:
    _, moduli = kottwitz_presentation(datum)
    return SigmaClass(KottwitzClass(tuple(int(x) for x in d["kappa"]), moduli), RatVec.cochar(Fraction(x) for x in d["nu"]))
