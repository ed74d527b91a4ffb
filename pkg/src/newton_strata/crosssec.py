"""Combinatorics of the Steinberg cross-section.

The cross-section for a sigma-Coxeter element ``c`` has one coordinate per
sigma-orbit of simple roots.  A class ``b`` meets it exactly when the
Kottwitz points agree, and then its points are described coordinate by
coordinate: valuation exactly ``e_i`` (a *circle*) or valuation at least
``ceil(e_i)`` (a *disk*), where ``e_i = <mu - nu(b), omega_i>``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from ._linalg import ceil_frac, frac_str, from_sympy, smith_decomposition, to_sympy
from .isocrystal import (
    KottwitzMismatchError,
    SigmaClass,
    _solver,
    exponents,
    j_set,
    kottwitz_point,
)
from .rootdata import RatVec, RootDatum, as_cochar, coxeter_element, weyl_act_root, weyl_matrix

CIRCLE = "circle"
DISK = "disk"


class _Infinity:
    """Valuation of the zero coordinate."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "+inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("newton_strata.INF")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


@dataclass(frozen=True)
class StratumShape:
    """Per-coordinate valuation conditions cutting out one stratum."""

    class_ref: SigmaClass
    mu: RatVec
    exponents: tuple[Fraction, ...]
    kinds: tuple[str, ...]

    @property
    def ceilings(self) -> tuple[int, ...]:
        return tuple(ceil_frac(e) for e in self.exponents)

    @property
    def codim(self) -> int:
        return sum(self.ceilings)

    def contains_pattern(self, v: Sequence) -> bool:
        """Whether a valuation pattern satisfies this shape's conditions."""
        for vi, e, kind in zip(v, self.exponents, self.kinds):
            if kind == CIRCLE:
                if vi is INF or vi != e:
                    return False
            elif vi is not INF and vi < ceil_frac(e):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "nu": self.class_ref.nu.to_strings(),
            "kappa": self.class_ref.kappa.to_list(),
            "exponents": [frac_str(e) for e in self.exponents],
            "kinds": list(self.kinds),
            "codim": self.codim,
        }


# ---------------------------------------------------------------------------
# the roots beta_i and the action of c sigma


def c_sigma_root(datum: RootDatum, beta: Sequence[int]) -> tuple[int, ...]:
    """``c sigma (beta)`` for a root in simple-root coordinates."""
    return weyl_act_root(datum, coxeter_element(datum), datum.sigma_root(beta))


@lru_cache(maxsize=None)
def beta_root_coords(datum: RootDatum) -> tuple[tuple[int, ...], ...]:
    """``beta_i = sigma^-1 s_r ... s_{i+1} (alpha_i)`` in simple-root coordinates."""
    reps = datum.orbit_reps
    out = []
    for i, rep in enumerate(reps):
        beta = tuple(int(k == rep - 1) for k in range(datum.ell))
        for j in reps[i + 1 :]:
            beta = datum.reflect_root(j, beta)
        out.append(datum.sigma_root(beta, -1))
    return tuple(out)


def beta_roots(datum: RootDatum) -> list[RatVec]:
    """The roots ``beta_1..beta_r`` as character vectors."""
    return [datum.root_to_char(b) for b in beta_root_coords(datum)]


# ---------------------------------------------------------------------------
# the lambda equation


@lru_cache(maxsize=None)
def _lambda_solver(datum: RootDatum):
    # Basis of V = Q Phi^vee + (1 - sigma) Z_Q with Z_Q the annihilator of the
    # roots; 1 - c sigma is invertible on V. Returns (Lam, Proj) with
    # lam = Lam d whenever Proj d = d.
    import sympy

    n = datum.rank
    cols = [sympy.Matrix(cr) for cr in datum.simple_coroots]
    if datum.ell:
        roots = sympy.Matrix(datum._root_functionals)
        central = roots.nullspace()
    else:
        central = [sympy.Matrix([int(i == j) for i in range(n)]) for j in range(n)]
    s = sympy.Matrix(datum.sigma_lattice)
    moved = [(sympy.eye(n) - s) * z for z in central]
    basis = sympy.Matrix.hstack(*cols, *moved) if (cols or moved) else sympy.zeros(n, 0)
    if basis.cols:
        basis = sympy.Matrix.hstack(*basis.columnspace())
    else:
        return None, None
    cs = sympy.Matrix(weyl_matrix(datum, coxeter_element(datum))) * s
    a = (sympy.eye(n) - cs) * basis
    left = (a.T * a).inv() * a.T
    return from_sympy(basis * left), from_sympy(a * left)


def solve_lambda(datum: RootDatum, mu, nu) -> RatVec:
    """The representative ``lam`` with ``(1 - c sigma) lam = mu - nu``.

    ``lam`` is taken in ``Q Phi^vee + (1 - sigma) Z_Q``; on the coroot
    span this is the only solution, and the extra summand only matters
    when sigma moves the centre.
    """
    d = (as_cochar(mu) - as_cochar(nu)).coords
    lam_m, proj = _lambda_solver(datum)
    if lam_m is None:
        if any(d):
            raise ValueError("mu - nu is not in the span of the coroots")
        return RatVec.cochar([0] * datum.rank)
    if tuple(sum(a * b for a, b in zip(row, d)) for row in proj) != tuple(d):
        raise ValueError(f"mu - nu = {RatVec.cochar(d)} is not in the span of the coroots")
    return RatVec.cochar(sum(a * b for a, b in zip(row, d)) for row in lam_m)


# ---------------------------------------------------------------------------
# stratum shapes and the valuation-pattern classification


def stratum_shape(datum: RootDatum, mu, b: SigmaClass) -> StratumShape:
    mu = as_cochar(mu)
    if kottwitz_point(datum, mu) != b.kappa:
        raise KottwitzMismatchError(f"kappa(mu)={list(kottwitz_point(datum, mu).coords)} but kappa(b)={b.kappa.to_list()}")
    e = exponents(datum, mu, b.nu)
    J = j_set(datum, b.nu)
    kinds = tuple(CIRCLE if i + 1 in J else DISK for i in range(datum.r))
    for ei, kind in zip(e, kinds):
        if kind == CIRCLE and ei.denominator != 1:
            raise ValueError(f"{b} fails the integrality condition for mu={mu}")
    return StratumShape(b, mu, e, kinds)


def matching_classes(datum: RootDatum, mu, v: Sequence) -> list[SigmaClass]:
    """Every class whose stratum contains the valuation pattern ``v``."""
    if len(v) != datum.r:
        raise ValueError(f"pattern has {len(v)} entries, expected {datum.r}")
    solver = _solver(datum, mu)
    out = []
    for size in range(datum.r + 1):
        for J in itertools.combinations(range(datum.r), size):
            if any(v[i] is INF for i in J):
                continue
            data = solver.stratum_data(J, tuple(int(v[i]) for i in J))
            if data is None:
                continue
            ceilings, b = data
            if all(v[k] is INF or v[k] >= ceilings[k] for k in range(datum.r) if k not in J):
                out.append(b)
    return out


def classify_valuation_pattern(datum: RootDatum, mu, v: Sequence) -> SigmaClass:
    """The class whose stratum contains the coordinate valuations ``v``.

    Entries of ``v`` are integers or :data:`INF`.
    """
    found = matching_classes(datum, mu, v)
    if len(found) != 1:
        raise RuntimeError(f"pattern {list(v)} matched {len(found)} classes for mu={as_cochar(mu)}")
    return found[0]


# ---------------------------------------------------------------------------
# K_xi exponents and the eta decomposition


def k_xi_exponents(datum: RootDatum, n: Sequence[int]) -> tuple[int, ...]:
    """``m_i = -n_i - sum_{j > i} n_j <alpha_j^vee, alpha_i>`` over orbit representatives."""
    reps = datum.orbit_reps
    if len(n) != len(reps):
        raise ValueError(f"expected {len(reps)} coefficients, got {len(n)}")
    out = []
    for i, ri in enumerate(reps):
        tail = sum(n[j] * datum.cartan[reps[j] - 1][ri - 1] for j in range(i + 1, len(reps)))
        out.append(-int(n[i]) - tail)
    return tuple(out)


@lru_cache(maxsize=None)
def _eta_system(datum: RootDatum):
    # columns: orbit-representative coroots, then the columns of 1 - sigma
    n = datum.rank
    cols = [datum.simple_coroots[rep - 1] for rep in datum.orbit_reps]
    cols += [tuple(int(i == j) - datum.sigma_lattice[i][j] for i in range(n)) for j in range(n)]
    mat = [[c[i] for c in cols] for i in range(n)]
    return smith_decomposition(mat)


def _solve_integer(datum: RootDatum, d: Sequence[int]):
    """Integer solution of ``sum a_i alpha_i^vee + (1 - sigma) y = d``, or ``None``."""
    diag, u, v = _eta_system(datum)
    ud = [sum(a * b for a, b in zip(row, d)) for row in u]
    z = []
    for i in range(len(v)):
        di = diag[i] if i < len(diag) else 0
        rhs = ud[i] if i < len(ud) else 0
        if di == 0:
            if rhs:
                return None
            z.append(0)
        else:
            if rhs % di:
                return None
            z.append(rhs // di)
    for i in range(len(v), len(ud)):
        if ud[i]:
            return None
    return [sum(a * b for a, b in zip(row, z)) for row in v]


def in_one_minus_sigma(datum: RootDatum, x: Sequence[int]) -> bool:
    """Whether ``x`` lies in ``(1 - sigma) X_*``."""
    diag, u = _one_minus_sigma_smith(datum)
    for i, row in enumerate(u):
        val = sum(a * b for a, b in zip(row, x))
        di = diag[i] if i < len(diag) else 0
        if (di == 0 and val) or (di and val % di):
            return False
    return True


@lru_cache(maxsize=None)
def _one_minus_sigma_smith(datum: RootDatum):
    n = datum.rank
    mat = [[int(i == j) - datum.sigma_lattice[i][j] for j in range(n)] for i in range(n)]
    diag, u, _ = smith_decomposition(mat)
    return tuple(diag), tuple(map(tuple, u))


def decompose_eta(datum: RootDatum, mu, chi) -> RatVec:
    """The cocharacter ``eta`` with ``mu - eta`` in the span of the ``alpha_i^vee``
    and ``chi - eta`` in ``(1 - sigma) X_*``."""
    mu, chi = as_cochar(mu), as_cochar(chi)
    if not (mu.is_integral() and chi.is_integral()):
        raise ValueError("mu and chi must be integral")
    if kottwitz_point(datum, mu) != kottwitz_point(datum, chi):
        raise KottwitzMismatchError(f"kappa({mu}) != kappa({chi})")
    d = (mu - chi).as_ints()
    sol = _solve_integer(datum, d)
    if sol is None:
        raise ArithmeticError("no integral solution despite matching Kottwitz points")
    eta = list(mu.as_ints())
    for a, rep in zip(sol[: datum.r], datum.orbit_reps):
        eta = [x - a * y for x, y in zip(eta, datum.simple_coroots[rep - 1])]
    return RatVec.cochar(eta)


def eta_candidates(datum: RootDatum, mu, chi, box: int) -> list[RatVec]:
    """All ``eta = mu - sum a_i alpha_i^vee`` with ``|a_i| <= box`` and ``chi - eta`` in ``(1 - sigma) X_*``."""
    mu, chi = as_cochar(mu).as_ints(), as_cochar(chi).as_ints()
    cr = [datum.simple_coroots[rep - 1] for rep in datum.orbit_reps]
    out = []
    for a in itertools.product(range(-box, box + 1), repeat=datum.r):
        eta = list(mu)
        for ai, c in zip(a, cr):
            eta = [x - ai * y for x, y in zip(eta, c)]
        if in_one_minus_sigma(datum, [x - y for x, y in zip(chi, eta)]):
            out.append(RatVec.cochar(eta))
    return out


# ---------------------------------------------------------------------------
# the Cross operator


def _check_positive(datum: RootDatum, gamma_set: Iterable) -> list[tuple[int, ...]]:
    out = []
    pos = set(datum.positive_roots)
    for g in gamma_set:
        g = tuple(int(x) for x in g)
        if g not in pos:
            raise ValueError(f"{g} is not a positive root")
        out.append(g)
    return out


def cross_operator(datum: RootDatum, gamma_set: Iterable) -> frozenset[tuple[int, ...]]:
    """``Cross(Gamma) = Phi^+ cap c sigma (Z_{>=1} gamma + Z_{>=0} Phi_{c sigma}^+)`` over ``gamma`` in ``Gamma``.

    Roots are simple-root coefficient tuples.
    """
    gammas = _check_positive(datum, gamma_set)
    betas = beta_root_coords(datum)
    top = datum.highest_height
    roots = datum.root_set
    out = set()
    for g in gammas:
        hg = sum(g)
        for k in range(1, top // hg + 1):
            base = tuple(k * x for x in g)
            _cone_walk(datum, base, betas, 0, top, roots, out)
    return frozenset(out)


def _cone_walk(datum, vec, betas, start, top, roots, out) -> None:
    if vec in roots:
        img = c_sigma_root(datum, vec)
        if sum(img) > 0:
            out.add(img)
    h = sum(vec)
    for idx in range(start, len(betas)):
        b = betas[idx]
        if h + sum(b) <= top:
            _cone_walk(datum, tuple(x + y for x, y in zip(vec, b)), betas, idx, top, roots, out)


def cross_nilpotence_depth(datum: RootDatum) -> int:
    """Least ``d`` with ``Cross^d(Phi^+)`` empty."""
    cur = frozenset(datum.positive_roots)
    cap = len(datum.positive_roots) + 1
    for d in range(1, cap + 1):
        cur = cross_operator(datum, cur)
        if not cur:
            return d
    raise RuntimeError(f"{datum.name}: Cross iterates still nonempty after {cap} steps")
