"""Based root data with a diagram automorphism.

Conventions
-----------
* Simple roots are labelled ``1..ell`` in Bourbaki numbering.
* ``X_*`` is ``Z^rank``; characters live in the dual ``Z^rank`` and the
  pairing is ``<x, y> = x^T P y`` with ``P = pairing_matrix``.
* A :class:`WeylWord` ``(i1, ..., ik)`` is the product ``s_i1 ... s_ik``;
  it acts on a vector by applying ``s_ik`` first.
* Roots used for combinatorics (heights, positivity, the Cross operator)
  are integer tuples of coefficients in the simple roots.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import sympy

from ._linalg import dot, frac_str, from_sympy, identity, int_matrix, matmul, to_frac, to_sympy, transpose

COCHAR = "cocharacter"
CHAR = "character"


class PresetError(ValueError):
    """Unknown preset or an impossible twist/isogeny combination."""


@dataclass(frozen=True)
class RatVec:
    """Exact rational vector on one side of the pairing."""

    side: str
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if self.side not in (COCHAR, CHAR):
            raise ValueError(f"unknown side {self.side!r}")
        object.__setattr__(self, "coords", tuple(to_frac(x) for x in self.coords))

    @classmethod
    def cochar(cls, coords: Iterable) -> "RatVec":
        return cls(COCHAR, tuple(coords))

    @classmethod
    def char(cls, coords: Iterable) -> "RatVec":
        return cls(CHAR, tuple(coords))

    def _check(self, other: "RatVec") -> None:
        if not isinstance(other, RatVec):
            raise TypeError("expected a RatVec")
        if other.side != self.side:
            raise ValueError(f"cannot combine {self.side} and {other.side} vectors")
        if len(other.coords) != len(self.coords):
            raise ValueError("dimension mismatch")

    def __add__(self, other: "RatVec") -> "RatVec":
        self._check(other)
        return RatVec(self.side, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RatVec") -> "RatVec":
        self._check(other)
        return RatVec(self.side, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RatVec":
        return RatVec(self.side, tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> "RatVec":
        s = to_frac(scalar)
        return RatVec(self.side, tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "RatVec":
        s = to_frac(scalar)
        return RatVec(self.side, tuple(a / s for a in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coords)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"vector {self} is not integral")
        return tuple(x.numerator for x in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_strings(self) -> list[str]:
        return [frac_str(x) for x in self.coords]

    def __str__(self) -> str:
        return "(" + ",".join(self.to_strings()) + ")"


def as_cochar(v) -> RatVec:
    """Coerce a sequence (or an existing vector) to a cocharacter vector."""
    if isinstance(v, RatVec):
        if v.side != COCHAR:
            raise ValueError("expected a cocharacter vector")
        return v
    return RatVec.cochar(v)


@dataclass(frozen=True)
class WeylWord:
    word: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(i) for i in self.word))

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        return WeylWord(self.word + other.word)

    def inverse(self) -> "WeylWord":
        return WeylWord(tuple(reversed(self.word)))


@dataclass(frozen=True)
class RootDatum:
    name: str
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]
    pairing_matrix: tuple[tuple[int, ...], ...]
    sigma_perm: tuple[int, ...]
    sigma_lattice: tuple[tuple[int, ...], ...]
    orbit_reps: tuple[int, ...]
    cartan_type: str = field(default="", compare=False)
    isogeny: str = field(default="", compare=False)

    def __post_init__(self):
        _validate(self)

    # -- sizes -----------------------------------------------------------
    @property
    def ell(self) -> int:
        return len(self.simple_roots)

    @property
    def r(self) -> int:
        return len(self.orbit_reps)

    # -- pairings --------------------------------------------------------
    @cached_property
    def _root_functionals(self) -> tuple[tuple[int, ...], ...]:
        # row j is P alpha_j, so <x, alpha_j> = x . row_j
        return tuple(tuple(dot(prow, a) for prow in self.pairing_matrix) for a in self.simple_roots)

    @cached_property
    def _coroot_functionals(self) -> tuple[tuple[int, ...], ...]:
        # row j is P^T alpha_j^vee, so <alpha_j^vee, y> = y . row_j
        cols = transpose(self.pairing_matrix)
        return tuple(tuple(dot(c, cr) for c in cols) for cr in self.simple_coroots)

    def pair(self, x: Sequence, y: Sequence):
        """``<x, y>`` for a cocharacter ``x`` and a character ``y``."""
        return dot(x, (dot(prow, y) for prow in self.pairing_matrix))

    def root_pairings(self, x: Sequence) -> tuple:
        """``(<x, alpha_1>, ..., <x, alpha_ell>)``."""
        return tuple(dot(x, f) for f in self._root_functionals)

    def coroot_pairings(self, y: Sequence) -> tuple:
        """``(<alpha_1^vee, y>, ..., <alpha_ell^vee, y>)``."""
        return tuple(dot(y, f) for f in self._coroot_functionals)

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        """``cartan[i][j] = <alpha_{i+1}^vee, alpha_{j+1}>``."""
        return tuple(
            tuple(self.pair(self.simple_coroots[i], self.simple_roots[j]) for j in range(self.ell)) for i in range(self.ell)
        )

    # -- sigma -----------------------------------------------------------
    @cached_property
    def sigma_char(self) -> tuple[tuple[int, ...], ...]:
        """Action of sigma on characters, dual to ``sigma_lattice`` under the pairing."""
        p = to_sympy(self.pairing_matrix)
        s = to_sympy(self.sigma_lattice)
        return int_matrix(p.inv() * s.T.inv() * p)

    @cached_property
    def sigma_order(self) -> int:
        return _matrix_order(self.sigma_lattice)

    def sigma(self, x: Sequence, power: int = 1) -> tuple:
        m = self.sigma_lattice if power >= 0 else _int_inverse(self.sigma_lattice)
        for _ in range(abs(power)):
            x = tuple(dot(row, x) for row in m)
        return tuple(x)

    def sigma_on_char(self, y: Sequence, power: int = 1) -> tuple:
        m = self.sigma_char if power >= 0 else _int_inverse(self.sigma_char)
        for _ in range(abs(power)):
            y = tuple(dot(row, y) for row in m)
        return tuple(y)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """sigma-orbits of simple-root labels, in the order of ``orbit_reps``."""
        out = []
        for rep in self.orbit_reps:
            orb = [rep]
            j = self.sigma_perm[rep - 1]
            while j != rep:
                orb.append(j)
                j = self.sigma_perm[j - 1]
            out.append(tuple(sorted(orb)))
        return tuple(out)

    @cached_property
    def orbit_of(self) -> dict[int, int]:
        """Map a simple-root label to its orbit index (1-based)."""
        return {j: i + 1 for i, orb in enumerate(self.orbits) for j in orb}

    # -- Weyl group ------------------------------------------------------
    @cached_property
    def reflection_matrices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Integer matrices of ``s_1..s_ell`` on ``X_*``."""
        mats = []
        for cr, f in zip(self.simple_coroots, self._root_functionals):
            mats.append(tuple(tuple(int(a == b) - cr[a] * f[b] for b in range(self.rank)) for a in range(self.rank)))
        return tuple(mats)

    def reflect(self, i: int, x: Sequence) -> tuple:
        """``s_i(x) = x - <x, alpha_i> alpha_i^vee`` on a cocharacter."""
        c = dot(x, self._root_functionals[i - 1])
        if not c:
            return tuple(x)
        return tuple(a - c * b for a, b in zip(x, self.simple_coroots[i - 1]))

    def reflect_char(self, i: int, y: Sequence) -> tuple:
        c = dot(y, self._coroot_functionals[i - 1])
        if not c:
            return tuple(y)
        return tuple(a - c * b for a, b in zip(y, self.simple_roots[i - 1]))

    # -- roots in simple-root coordinates --------------------------------
    def reflect_root(self, i: int, beta: Sequence[int]) -> tuple[int, ...]:
        c = sum(b * self.cartan[i - 1][k] for k, b in enumerate(beta))
        out = list(beta)
        out[i - 1] -= c
        return tuple(out)

    def sigma_root(self, beta: Sequence[int], power: int = 1) -> tuple[int, ...]:
        out = tuple(beta)
        perm = self.sigma_perm if power >= 0 else _inverse_perm(self.sigma_perm)
        for _ in range(abs(power)):
            nxt = [0] * self.ell
            for j, b in enumerate(out):
                nxt[perm[j] - 1] = b
            out = tuple(nxt)
        return out

    @cached_property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        """All roots, as simple-root coefficient vectors, sorted."""
        found = _generate_roots(self.cartan)
        if found is None:
            raise ValueError(f"{self.name}: Cartan matrix is not of finite type")
        return found

    @cached_property
    def root_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.roots)

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.roots if sum(b) > 0)

    @cached_property
    def highest_height(self) -> int:
        return max((sum(b) for b in self.positive_roots), default=0)

    def root_to_char(self, beta: Sequence[int]) -> RatVec:
        vec = [0] * self.rank
        for c, a in zip(beta, self.simple_roots):
            if c:
                vec = [v + c * x for v, x in zip(vec, a)]
        return RatVec.char(vec)

    # -- fundamental weights in the root span -----------------------------
    @cached_property
    def fundamental_weights(self) -> tuple[tuple[Fraction, ...], ...]:
        """``omega_alpha`` for each simple root, as character vectors in Q Phi."""
        if self.ell == 0:
            return ()
        a = to_sympy(self.cartan)
        coeff = from_sympy(a.T.inv())  # omega_j = sum_k coeff[j][k] alpha_k
        out = []
        for row in coeff:
            vec = [Fraction(0)] * self.rank
            for c, root in zip(row, self.simple_roots):
                vec = [v + c * x for v, x in zip(vec, root)]
            out.append(tuple(vec))
        return tuple(out)

    @cached_property
    def orbit_weights(self) -> tuple[tuple[Fraction, ...], ...]:
        out = []
        for orb in self.orbits:
            vec = [Fraction(0)] * self.rank
            for j in orb:
                vec = [v + w for v, w in zip(vec, self.fundamental_weights[j - 1])]
            out.append(tuple(vec))
        return tuple(out)

    @cached_property
    def orbit_coroots(self) -> tuple[tuple[int, ...], ...]:
        """Sum of the simple coroots over each sigma-orbit."""
        out = []
        for orb in self.orbits:
            vec = [0] * self.rank
            for j in orb:
                vec = [v + c for v, c in zip(vec, self.simple_coroots[j - 1])]
            out.append(tuple(vec))
        return tuple(out)

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "cartan_type": self.cartan_type,
            "isogeny": self.isogeny,
            "rank": self.rank,
            "simple_roots": [list(v) for v in self.simple_roots],
            "simple_coroots": [list(v) for v in self.simple_coroots],
            "pairing_matrix": [list(v) for v in self.pairing_matrix],
            "sigma_perm": list(self.sigma_perm),
            "sigma_lattice": [list(v) for v in self.sigma_lattice],
            "orbit_reps": list(self.orbit_reps),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RootDatum":
        tup = lambda rows: tuple(tuple(int(x) for x in row) for row in rows)  # noqa: E731
        return cls(
            name=d["name"],
            rank=int(d["rank"]),
            simple_roots=tup(d["simple_roots"]),
            simple_coroots=tup(d["simple_coroots"]),
            pairing_matrix=tup(d["pairing_matrix"]),
            sigma_perm=tuple(int(x) for x in d["sigma_perm"]),
            sigma_lattice=tup(d["sigma_lattice"]),
            orbit_reps=tuple(int(x) for x in d["orbit_reps"]),
            cartan_type=d.get("cartan_type", ""),
            isogeny=d.get("isogeny", ""),
        )

    def __repr__(self) -> str:
        return f"RootDatum({self.name!r})"


# ---------------------------------------------------------------------------
# internal helpers


def _inverse_perm(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for j, img in enumerate(perm):
        inv[img - 1] = j + 1
    return tuple(inv)


def _int_inverse(m):
    return int_matrix(to_sympy(m).inv())


def _matrix_order(m, cap: int = 1000) -> int:
    ident = identity(len(m))
    cur = tuple(tuple(row) for row in m)
    for k in range(1, cap + 1):
        if cur == ident:
            return k
        cur = matmul(m, cur)
    raise ValueError("matrix does not have finite order")


def _generate_roots(cartan, cap: int = 2000):
    ell = len(cartan)
    simple = [tuple(int(i == j) for j in range(ell)) for i in range(ell)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(ell):
                c = sum(b * cartan[i][k] for k, b in enumerate(beta))
                if c == 0:
                    continue
                img = list(beta)
                img[i] -= c
                img = tuple(img)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return tuple(sorted(seen, key=lambda b: (-sum(b), tuple(-x for x in b))))


def _validate(d: RootDatum) -> None:
    n, ell = d.rank, len(d.simple_roots)
    if n <= 0:
        raise ValueError("rank must be positive")
    for v in d.simple_roots + d.simple_coroots:
        if len(v) != n:
            raise ValueError("root vectors must have length rank")
    if len(d.simple_coroots) != ell:
        raise ValueError("need one coroot per simple root")
    for m in (d.pairing_matrix, d.sigma_lattice):
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError("lattice matrices must be rank x rank")
    if abs(to_sympy(d.pairing_matrix).det()) != 1:
        raise ValueError("pairing matrix must be unimodular")
    if sorted(d.sigma_perm) != list(range(1, ell + 1)):
        raise ValueError("sigma_perm must be a permutation of 1..ell")
    cartan = d.cartan
    for i in range(ell):
        if cartan[i][i] != 2:
            raise ValueError("Cartan diagonal must be 2")
        for j in range(ell):
            if i != j and (cartan[i][j] > 0 or (cartan[i][j] == 0) != (cartan[j][i] == 0)):
                raise ValueError("not a generalized Cartan matrix")
    if _generate_roots(cartan) is None:
        raise ValueError("Cartan matrix is not of finite type")
    _matrix_order(d.sigma_lattice)
    for j in range(ell):
        img = tuple(dot(row, d.simple_coroots[j]) for row in d.sigma_lattice)
        if img != d.simple_coroots[d.sigma_perm[j] - 1]:
            raise ValueError("sigma_lattice does not permute the simple coroots as sigma_perm")
    # the dual action must be integral and permute simple roots the same way
    sc = d.sigma_char
    for j in range(ell):
        img = tuple(dot(row, d.simple_roots[j]) for row in sc)
        if img != d.simple_roots[d.sigma_perm[j] - 1]:
            raise ValueError("sigma does not permute the simple roots as sigma_perm")
    reps = list(d.orbit_reps)
    seen = set()
    for rep in reps:
        if not 1 <= rep <= ell:
            raise ValueError("orbit representative out of range")
        orb = {rep}
        j = d.sigma_perm[rep - 1]
        while j != rep:
            orb.add(j)
            j = d.sigma_perm[j - 1]
        if orb & seen:
            raise ValueError("two orbit representatives share an orbit")
        seen |= orb
    if seen != set(range(1, ell + 1)):
        raise ValueError("orbit_reps must contain one index per sigma-orbit")


# ---------------------------------------------------------------------------
# presets


def cartan_matrix(family: str, ell: int) -> list[list[int]]:
    """Bourbaki Cartan matrix, ``a[i][j] = <alpha_i^vee, alpha_j>``."""
    a = [[2 if i == j else 0 for j in range(ell)] for i in range(ell)]

    def link(i, j, aij=-1, aji=-1):
        a[i - 1][j - 1] = aij
        a[j - 1][i - 1] = aji

    if family == "A" and ell >= 1:
        for i in range(1, ell):
            link(i, i + 1)
    elif family == "B" and ell >= 2:
        for i in range(1, ell - 1):
            link(i, i + 1)
        link(ell - 1, ell, -1, -2)
    elif family == "C" and ell >= 2:
        for i in range(1, ell - 1):
            link(i, i + 1)
        link(ell - 1, ell, -2, -1)
    elif family == "D" and ell >= 4:
        for i in range(1, ell - 1):
            link(i, i + 1)
        link(ell - 2, ell)
    elif family == "G" and ell == 2:
        link(1, 2, -3, -1)
    elif family == "F" and ell == 4:
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    else:
        raise PresetError(f"unsupported Cartan type {family}{ell}")
    return a


def _twist_perm(family: str, ell: int, order: int) -> list[int]:
    if order == 1:
        return list(range(1, ell + 1))
    if order == 2 and family == "A" and ell >= 2:
        return [ell + 1 - j for j in range(1, ell + 1)]
    if order == 2 and family == "D" and ell >= 4:
        return list(range(1, ell - 1)) + [ell, ell - 1]
    if order == 3 and family == "D" and ell == 4:
        return [3, 2, 4, 1]
    raise PresetError(f"no diagram automorphism of order {order} on {family}{ell}")


_NAME = re.compile(r"^(?P<twist>[23])?(?P<family>GL|SL|PGL|U|[ABCDFG])(?P<n>\d+)(?:_(?P<iso>sc|ad|gl))?$")

ISOGENIES = ("sc", "ad", "gl")


def preset_names() -> list[str]:
    """A representative catalogue of preset strings (not exhaustive)."""
    names = [f"GL{n}" for n in (2, 3, 4)] + [f"SL{n}" for n in (2, 3, 4)] + [f"PGL{n}" for n in (2, 3, 4)]
    for fam, ranks in (("A", (1, 2, 3, 4)), ("B", (2, 3, 4)), ("C", (2, 3, 4)), ("D", (4,)), ("G", (2,)), ("F", (4,))):
        for ell in ranks:
            names += [f"{fam}{ell}", f"{fam}{ell}_ad"]
    names += ["2A2", "2A2_ad", "2A2_gl", "2A3", "2A3_ad", "2A3_gl", "2A4", "2D4", "2D4_ad", "3D4", "3D4_ad", "U3", "U4"]
    return names


@lru_cache(maxsize=None)
def build_root_datum(name: str, isogeny: str | None = None, twist: int | None = None) -> RootDatum:
    """Build a preset root datum (memoised; the result is immutable).

    ``name`` is a preset string such as ``"GL3"``, ``"SL4"``, ``"PGL2"``,
    ``"B2"`` (simply connected), ``"B2_ad"`` (adjoint), ``"2A3"`` or
    ``"3D4"`` (leading digit = order of the diagram automorphism), or
    ``"U3"`` (twisted ``A_2`` in ``GL_3`` coordinates). ``isogeny`` and
    ``twist`` override what the string encodes.
    """
    m = _NAME.match(name.strip())
    if not m:
        raise PresetError(f"unknown preset {name!r}")
    fam, n = m.group("family"), int(m.group("n"))
    name_twist = int(m.group("twist") or 1)
    iso = m.group("iso")
    if fam in ("GL", "SL", "PGL", "U"):
        if n < 2:
            raise PresetError(f"unknown preset {name!r}")
        if m.group("iso") or m.group("twist"):
            raise PresetError(f"preset {name!r} does not take a twist prefix or isogeny suffix")
        family, ell = "A", n - 1
        iso = {"GL": "gl", "SL": "sc", "PGL": "ad", "U": "gl"}[fam]
        name_twist = 2 if fam == "U" else 1
    else:
        family, ell = fam, n
        iso = iso or "sc"
    if isogeny is not None:
        iso = isogeny
    if twist is not None:
        name_twist = int(twist)
    if iso not in ISOGENIES:
        raise PresetError(f"unknown isogeny flavour {iso!r}")
    if iso == "gl" and family != "A":
        raise PresetError("the 'gl' flavour exists only for type A")
    a = cartan_matrix(family, ell)
    perm = _twist_perm(family, ell, name_twist)

    if iso == "gl":
        rank = ell + 1
        vecs = []
        for i in range(ell):
            v = [0] * rank
            v[i], v[i + 1] = 1, -1
            vecs.append(tuple(v))
        roots = coroots = tuple(vecs)
        if name_twist == 1:
            sig = identity(rank)
        else:
            sig = tuple(tuple(-1 if i + j == rank - 1 else 0 for j in range(rank)) for i in range(rank))
    elif iso == "sc":
        rank = ell
        coroots = identity(ell)
        roots = tuple(tuple(a[k][j] for k in range(ell)) for j in range(ell))
        sig = tuple(tuple(int(perm[j] - 1 == i) for j in range(ell)) for i in range(ell))
    else:
        rank = ell
        roots = identity(ell)
        coroots = tuple(tuple(a[j][k] for k in range(ell)) for j in range(ell))
        sig = tuple(tuple(int(perm[j] - 1 == i) for j in range(ell)) for i in range(ell))

    reps = []
    covered: set[int] = set()
    for j in range(1, ell + 1):
        if j in covered:
            continue
        reps.append(j)
        k = j
        while True:
            covered.add(k)
            k = perm[k - 1]
            if k == j:
                break

    if fam in ("GL", "SL", "PGL", "U") and isogeny is None and twist is None:
        label = name.strip()
    else:
        label = (f"{name_twist}" if name_twist > 1 else "") + f"{family}{ell}" + ("" if iso == "sc" else f"_{iso}")
    return RootDatum(
        name=label,
        rank=rank,
        simple_roots=tuple(roots),
        simple_coroots=tuple(coroots),
        pairing_matrix=identity(rank),
        sigma_perm=tuple(perm),
        sigma_lattice=tuple(sig),
        orbit_reps=tuple(reps),
        cartan_type=f"{family}{ell}",
        isogeny=iso,
    )


# ---------------------------------------------------------------------------
# operations


def sigma_orbits(datum: RootDatum) -> list[frozenset[int]]:
    return [frozenset(orb) for orb in datum.orbits]


def orbit_weight(datum: RootDatum, i: int) -> RatVec:
    """Sum of the fundamental weights over the i-th sigma-orbit (1-based)."""
    if not 1 <= i <= datum.r:
        raise IndexError(f"orbit index {i} out of range 1..{datum.r}")
    return RatVec.char(datum.orbit_weights[i - 1])


def coxeter_element(datum: RootDatum) -> WeylWord:
    return WeylWord(datum.orbit_reps)


def weyl_act(datum: RootDatum, w: WeylWord, v) -> RatVec:
    """Apply a Weyl word to a cocharacter vector."""
    x = as_cochar(v).coords
    for i in reversed(w.word):
        x = datum.reflect(i, x)
    return RatVec.cochar(x)


def weyl_act_char(datum: RootDatum, w: WeylWord, v) -> RatVec:
    y = v.coords if isinstance(v, RatVec) else tuple(to_frac(t) for t in v)
    for i in reversed(w.word):
        y = datum.reflect_char(i, y)
    return RatVec.char(y)


def weyl_matrix(datum: RootDatum, w: WeylWord) -> tuple[tuple[int, ...], ...]:
    m = identity(datum.rank)
    for i in w.word:
        m = matmul(m, datum.reflection_matrices[i - 1])
    return m


def weyl_act_root(datum: RootDatum, w: WeylWord, beta: Sequence[int]) -> tuple[int, ...]:
    out = tuple(beta)
    for i in reversed(w.word):
        out = datum.reflect_root(i, out)
    return out


def is_dominant(datum: RootDatum, v) -> bool:
    return all(p >= 0 for p in datum.root_pairings(as_cochar(v).coords))


def dominant_representative(datum: RootDatum, v) -> tuple[RatVec, WeylWord]:
    """Return ``(v', w)`` with ``v'`` dominant and ``w . v = v'``."""
    x = as_cochar(v).coords
    applied = []
    while True:
        pairs = datum.root_pairings(x)
        neg = next((i for i, p in enumerate(pairs) if p < 0), None)
        if neg is None:
            break
        x = datum.reflect(neg + 1, x)
        applied.append(neg + 1)
    return RatVec.cochar(x), WeylWord(tuple(reversed(applied)))


@lru_cache(maxsize=None)
def weyl_group_elements(datum: RootDatum) -> tuple[tuple[WeylWord, tuple[tuple[int, ...], ...]], ...]:
    """Every Weyl group element once, as ``(reduced word, matrix on X_*)``."""
    ident = identity(datum.rank)
    seen = {ident: WeylWord()}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for i, s in enumerate(datum.reflection_matrices, start=1):
                img = matmul(s, m)
                if img not in seen:
                    seen[img] = WeylWord((i,)) * seen[m]
                    nxt.append(img)
        frontier = nxt
    return tuple((w, m) for m, w in seen.items())


def sigma_average(datum: RootDatum, v) -> RatVec:
    """Average of ``v`` over the sigma-orbit of ``v`` (the ``mu^diamond`` of ``mu``)."""
    x = as_cochar(v).coords
    total = [Fraction(0)] * datum.rank
    cur = x
    for _ in range(datum.sigma_order):
        total = [t + c for t, c in zip(total, cur)]
        cur = datum.sigma(cur)
    return RatVec.cochar(tuple(t / datum.sigma_order for t in total))
