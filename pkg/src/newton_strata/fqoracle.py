"""Brute-force check of the cross-section strata for split GL_n over F_p((varpi)).

Every cross-section point modulo ``varpi^M`` is written down as an honest
matrix, classified through its characteristic polynomial, and tallied.
Series carry an absolute precision, so a valuation is only trusted when a
nonzero coefficient below the precision witnesses it; anything the
truncation cannot decide raises :class:`TruncationError`.
"""

from __future__ import annotations

import io
import itertools
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .crosssec import INF, classify_valuation_pattern
from .isocrystal import SigmaClass, enumerate_bgmu, kottwitz_point
from .rootdata import RatVec, build_root_datum
from .strata import count_precondition, point_count


class TruncationError(ArithmeticError):
    """A decision needed information beyond the available precision."""


# ---------------------------------------------------------------------------
# truncated series


@dataclass(frozen=True)
class TruncSeries:
    """``varpi^val_offset * sum coeffs[k] varpi^k`` known modulo ``varpi^M``.

    ``M`` is the absolute precision. After normalisation either
    ``coeffs[0] != 0`` or ``coeffs`` is empty and ``val_offset == M``.
    """

    p: int
    M: int
    coeffs: tuple[int, ...] = ()
    val_offset: int = 0

    def __post_init__(self):
        cs = [c % self.p for c in self.coeffs][: max(self.M - self.val_offset, 0)]
        off = self.val_offset
        while cs and cs[0] == 0:
            cs.pop(0)
            off += 1
        if not cs:
            off = self.M
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "val_offset", off)

    @classmethod
    def from_poly(cls, p: int, M: int, coeffs: Sequence[int], shift: int = 0) -> "TruncSeries":
        return cls(p, M, tuple(coeffs), shift)

    @classmethod
    def const(cls, p: int, M: int, c: int) -> "TruncSeries":
        return cls(p, M, (c,), 0)

    @classmethod
    def monomial(cls, p: int, M: int, k: int, c: int = 1) -> "TruncSeries":
        return cls(p, M, (c,), k)

    @classmethod
    def zero(cls, p: int, M: int) -> "TruncSeries":
        return cls(p, M, (), M)

    def valuation(self):
        """Witnessed valuation, or :data:`INF` when nothing below ``M`` is nonzero."""
        return self.val_offset if self.coeffs else INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        if k >= self.M:
            raise TruncationError(f"coefficient of varpi^{k} is beyond precision {self.M}")
        i = k - self.val_offset
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "TruncSeries") -> None:
        if other.p != self.p:
            raise ValueError("series over different residue fields")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        prec = min(self.M, other.M)
        lo = min(self.val_offset, other.val_offset)
        if lo >= prec:
            return TruncSeries.zero(self.p, prec)
        out = [0] * (prec - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.val_offset + i - lo
                if k < len(out):
                    out[k] += c
        return TruncSeries(self.p, prec, tuple(out), lo)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.p, self.M, tuple(-c for c in self.coeffs), self.val_offset)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        prec = min(self.M + other.val_offset, other.M + self.val_offset)
        lo = self.val_offset + other.val_offset
        if lo >= prec or not self.coeffs or not other.coeffs:
            return TruncSeries.zero(self.p, prec)
        width = prec - lo
        out = [0] * width
        for i, a in enumerate(self.coeffs[:width]):
            if a:
                for j, b in enumerate(other.coeffs[: width - i]):
                    out[i + j] += a * b
        return TruncSeries(self.p, prec, tuple(out), lo)

    def unit_inverse(self) -> "TruncSeries":
        """Inverse of a series of valuation 0."""
        if self.valuation() != 0:
            raise TruncationError("not a witnessed unit")
        inv0 = pow(self.coeffs[0], -1, self.p)
        out = [inv0]
        for k in range(1, self.M):
            s = sum(self.coeffs[j] * out[k - j] for j in range(1, min(k, len(self.coeffs) - 1) + 1))
            out.append(-s * inv0 % self.p)
        return TruncSeries(self.p, self.M, tuple(out), 0)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``varpi^k`` (``k`` may be negative)."""
        return TruncSeries(self.p, self.M + k, self.coeffs, self.val_offset + k)

    def __str__(self) -> str:
        terms = [f"{c}*w^{self.val_offset + i}" for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O(w^{self.M})"


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class TruncMatrix:
    """Square matrix of :class:`TruncSeries` over a common residue field."""

    rows: tuple[tuple[TruncSeries, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")
        ps = {x.p for r in self.rows for x in r}
        if len(ps) > 1:
            raise ValueError("entries over different residue fields")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> int:
        return self.rows[0][0].p

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "TruncMatrix") -> "TruncMatrix":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][0] * other.rows[0][j]
                for k in range(1, n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(tuple(row))
        return TruncMatrix(tuple(out))

    def minor_det(self, idx: Sequence[int]) -> TruncSeries:
        """Determinant of the principal submatrix on ``idx`` by full expansion."""
        total = None
        for perm in itertools.permutations(range(len(idx))):
            term = None
            for a, b in enumerate(perm):
                x = self.rows[idx[a]][idx[b]]
                term = x if term is None else term * x
            if _parity(perm):
                term = -term
            total = term if total is None else total + term
        return total

    def det(self) -> TruncSeries:
        return self.minor_det(range(self.n))

    def charpoly(self) -> list[TruncSeries]:
        """Coefficients ``a_1..a_n`` of ``det(t - g) = t^n + a_1 t^(n-1) + ... + a_n``."""
        out = []
        for k in range(1, self.n + 1):
            acc = None
            for idx in itertools.combinations(range(self.n), k):
                m = self.minor_det(idx)
                acc = m if acc is None else acc + m
            out.append(-acc if k % 2 else acc)
        return out

    def valuations(self) -> list[list]:
        return [[x.valuation() for x in r] for r in self.rows]


def _parity(perm) -> int:
    odd = 0
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, size = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                size += 1
            odd ^= (size - 1) & 1
    return odd


def _times_int(g: TruncMatrix, m: Sequence[Sequence[int]]) -> TruncMatrix:
    # g @ m for a sparse integer matrix m
    n = g.n
    cols = [[(k, m[k][j]) for k in range(n) if m[k][j]] for j in range(n)]
    out = []
    for row in g.rows:
        new = []
        for j in range(n):
            acc = None
            for k, c in cols[j]:
                term = row[k] if c == 1 else -row[k] if c == -1 else row[k] * TruncSeries.const(row[k].p, row[k].M, c)
                acc = term if acc is None else acc + term
            new.append(acc if acc is not None else TruncSeries.zero(row[0].p, min(x.M for x in row)))
        out.append(tuple(new))
    return TruncMatrix(tuple(out))


def _times_unipotent(g: TruncMatrix, i: int, x: TruncSeries) -> TruncMatrix:
    # g @ U_i(x): column i+1 gains x times column i (0-based i)
    rows = []
    for row in g.rows:
        row = list(row)
        row[i + 1] = row[i + 1] + row[i] * x
        rows.append(tuple(row))
    return TruncMatrix(tuple(rows))


def _elementary(n: int, i: int, j: int, c: int) -> list[list[int]]:
    m = [[int(a == b) for b in range(n)] for a in range(n)]
    m[i][j] = c
    return m


def _imatmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def simple_reflection_lift(n: int, i: int) -> list[list[int]]:
    """``U_i(-1) U_{-i}(1) U_i(-1)`` in ``GL_n`` for the simple root ``e_i - e_{i+1}`` (1-based)."""
    up = _elementary(n, i - 1, i, -1)
    down = _elementary(n, i, i - 1, 1)
    return _imatmul(_imatmul(up, down), up)


def cross_section_matrix(n: int, mu: Sequence[int], coords: Sequence[TruncSeries], L: int | None = None) -> TruncMatrix:
    """``diag(varpi^mu) s_1 U_1(x_1) ... s_{n-1} U_{n-1}(x_{n-1})``.

    Constant entries are given absolute precision ``L`` (default: large
    enough that only the coordinates limit precision).
    """
    if len(coords) != n - 1:
        raise ValueError(f"expected {n - 1} coordinates, got {len(coords)}")
    if len(mu) != n:
        raise ValueError(f"mu has length {len(mu)}, expected {n}")
    if not coords:
        raise ValueError("need n >= 2")
    p = coords[0].p
    if L is None:
        L = max(c.M for c in coords) + sum(abs(x) for x in mu) + 1
    zero = TruncSeries.zero(p, L)
    rows = [[zero] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = TruncSeries.monomial(p, L, mu[k])
    g = TruncMatrix(tuple(tuple(r) for r in rows))
    for i, x in enumerate(coords, start=1):
        g = _times_int(g, _lift_cached(n, i))
        g = _times_unipotent(g, i - 1, x)
    return g


@lru_cache(maxsize=None)
def _lift_cached(n: int, i: int) -> tuple[tuple[int, ...], ...]:
    return tuple(map(tuple, simple_reflection_lift(n, i)))


# ---------------------------------------------------------------------------
# Newton polygons


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_slopes(val_seq: Sequence) -> RatVec:
    """Slopes of the lower hull of ``(0, 0)`` and ``(i, val_seq[i-1])``, largest first."""
    n = len(val_seq)
    if not n or val_seq[-1] is INF:
        raise ValueError("constant term must have finite valuation")
    pts = [(0, Fraction(0))] + [(i, Fraction(v)) for i, v in enumerate(val_seq, start=1) if v is not INF]
    hull = _lower_hull(pts)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([(y2 - y1) / (x2 - x1)] * (x2 - x1))
    return RatVec.cochar(sorted(slopes, reverse=True))


def _hull_height(hull, x: int) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + (y2 - y1) * Fraction(x - x1, x2 - x1)
    raise ValueError("point outside the hull")


def determined_slopes(coeffs: Sequence[TruncSeries]) -> RatVec:
    """Newton slopes of ``t^n + a_1 t^(n-1) + ... + a_n``, checking that truncation cannot change them."""
    vals = [a.valuation() for a in coeffs]
    if vals[-1] is INF:
        raise TruncationError(f"constant term vanishes modulo varpi^{coeffs[-1].M}")
    pts = [(0, Fraction(0))] + [(i, Fraction(v)) for i, v in enumerate(vals, start=1) if v is not INF]
    hull = _lower_hull(pts)
    for i, (v, a) in enumerate(zip(vals, coeffs), start=1):
        if v is INF and _hull_height(hull, i) > a.M:
            raise TruncationError(f"a_{i} is only known modulo varpi^{a.M}, below the polygon")
    return newton_polygon_slopes(vals)


def classify_matrix(g: TruncMatrix) -> SigmaClass:
    """``(kappa, nu) = (v(det g), Newton slopes)`` for a matrix in ``GL_n``."""
    datum = build_root_datum(f"GL{g.n}")
    coeffs = g.charpoly()
    nu = determined_slopes(coeffs)
    vdet = coeffs[-1].valuation()
    kappa = kottwitz_point(datum, [vdet] + [0] * (g.n - 1))
    return SigmaClass(kappa, nu)


# ---------------------------------------------------------------------------
# Smith form over the truncated valuation ring


def invariant_factors(g: TruncMatrix) -> tuple[int, ...]:
    """Valuations of the Smith form diagonal, largest first."""
    a = [list(r) for r in g.rows]
    n = g.n
    out = []
    for step in range(n):
        best = None
        for i in range(step, n):
            for j in range(step, n):
                v = a[i][j].valuation()
                if v is not INF and (best is None or v < best[0]):
                    best = (v, i, j)
        bound = min((a[i][j].M for i in range(step, n) for j in range(step, n) if a[i][j].is_zero()), default=None)
        if best is None or (bound is not None and bound < best[0]):
            raise TruncationError("pivot valuation not determined by the truncation")
        v, pi, pj = best
        a[step], a[pi] = a[pi], a[step]
        for row in a:
            row[step], row[pj] = row[pj], row[step]
        inv = a[step][step].shift(-v).unit_inverse()
        for i in range(step + 1, n):
            if a[i][step].is_zero() and a[i][step].M >= a[step][step].M:
                continue
            f = a[i][step].shift(-v) * inv
            a[i] = [x - f * y for x, y in zip(a[i], a[step])]
        for j in range(step + 1, n):
            f = a[step][j].shift(-v) * inv
            for i in range(step, n):
                a[i][j] = a[i][j] - f * a[i][step]
        out.append(v)
    return tuple(sorted(out, reverse=True))


# ---------------------------------------------------------------------------
# tallies


def enumerate_coordinates(p: int, M: int, count: int):
    """Every tuple of ``count`` polynomials of degree below ``M`` over ``F_p``."""
    polys = list(itertools.product(range(p), repeat=M))
    return itertools.product(polys, repeat=count)


def _pattern(xs: Sequence[TruncSeries]) -> tuple:
    return tuple(x.valuation() for x in xs)


def _tally_chunk(n: int, mu: tuple[int, ...], p: int, M: int, first: tuple[int, ...] | None):
    datum = build_root_datum(f"GL{n}")
    counts: Counter = Counter()
    mismatches = []
    bad_factors = []
    target = tuple(sorted(mu, reverse=True))
    polys = list(itertools.product(range(p), repeat=M))
    heads = [first] if first is not None else polys
    for head in heads:
        for tail in itertools.product(polys, repeat=n - 2):
            raw = (head,) + tail
            xs = [TruncSeries.from_poly(p, M, c) for c in raw]
            g = cross_section_matrix(n, mu, xs)
            b = classify_matrix(g)
            counts[b.key()] += 1
            expected = classify_valuation_pattern(datum, mu, _pattern(xs))
            if expected.key() != b.key():
                mismatches.append((raw, b.key(), expected.key()))
            if invariant_factors(g) != target:
                bad_factors.append(raw)
    return counts, mismatches, bad_factors


@dataclass
class TallyReport:
    group: str
    mu: tuple[int, ...]
    p: int
    M: int
    classes: list[SigmaClass]
    observed: dict = field(default_factory=dict)
    predicted: dict = field(default_factory=dict)
    total: int = 0
    mismatches: list = field(default_factory=list)
    bad_factors: list = field(default_factory=list)

    @property
    def counts_ok(self) -> bool:
        keys = {b.key() for b in self.classes}
        return set(self.observed) <= keys and all(self.observed.get(k, 0) == self.predicted[k] for k in keys)

    @property
    def total_ok(self) -> bool:
        return self.total == self.p ** (self.M * (len(self.mu) - 1))

    @property
    def ok(self) -> bool:
        return self.counts_ok and self.total_ok and not self.mismatches and not self.bad_factors

    def rows(self):
        for b in self.classes:
            yield b, self.predicted[b.key()], self.observed.get(b.key(), 0)

    def to_tsv(self) -> str:
        out = io.StringIO()
        out.write("nu\tkappa\tpredicted\tobserved\n")
        for b, pred, obs in self.rows():
            out.write(f"{','.join(b.nu.to_strings())}\t{','.join(map(str, b.kappa.coords))}\t{pred}\t{obs}\n")
        out.write(f"total\t\t{self.p ** (self.M * (len(self.mu) - 1))}\t{self.total}\n")
        return out.getvalue()

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "mu": list(self.mu),
            "q": self.p,
            "M": self.M,
            "strata": [{**b.to_dict(), "predicted": pred, "observed": obs} for b, pred, obs in self.rows()],
            "total": self.total,
            "classification_mismatches": len(self.mismatches),
            "invariant_factor_failures": len(self.bad_factors),
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def tally_strata(n: int, mu: Sequence[int], p: int, M: int, workers: int | None = None) -> TallyReport:
    """Classify every cross-section point modulo ``varpi^M`` and compare with the count formula."""
    mu = tuple(int(x) for x in mu)
    datum = build_root_datum(f"GL{n}")
    if len(mu) != n:
        raise ValueError(f"mu has length {len(mu)}, expected {n}")
    if list(mu) != sorted(mu, reverse=True):
        raise ValueError("mu must be dominant")
    if M < 1:
        raise ValueError("M must be positive")
    if not count_precondition(datum, mu, M):
        raise ValueError(f"M={M} is below the stratum ceilings for mu={mu}")
    classes = enumerate_bgmu(datum, mu)
    heads = list(itertools.product(range(p), repeat=M))
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_tally_chunk, *zip(*[(n, mu, p, M, h) for h in heads])))
    else:
        parts = [_tally_chunk(n, mu, p, M, None)]
    counts: Counter = Counter()
    report = TallyReport(f"GL{n}", mu, p, M, classes)
    for c, mm, bf in parts:
        counts.update(c)
        report.mismatches.extend(mm)
        report.bad_factors.extend(bf)
    report.mismatches.sort()
    report.bad_factors.sort()
    report.observed = dict(counts)
    report.predicted = {b.key(): int(point_count(datum, mu, b, M)(p)) for b in classes}
    report.total = sum(counts.values())
    return report
