"""The dominance poset on B(G, mu), closure relations, lengths and point counts."""

from __future__ import annotations

import io
import itertools
import json
from typing import Sequence

from ._linalg import ceil_frac, frac_str
from .crosssec import CIRCLE, INF, StratumShape, matching_classes, stratum_shape
from .isocrystal import (
    KottwitzMismatchError,
    SigmaClass,
    dominance_leq,
    enumerate_bgmu,
    exponents,
    is_hn_irreducible,
    j_set,
    kottwitz_point,
)
from .laurent import Q, LaurentPolyZ
from .rootdata import RootDatum, as_cochar

SAMPLE_QS = (2, 3, 4, 5)


def _codim(datum: RootDatum, mu, b: SigmaClass) -> int:
    return sum(ceil_frac(e) for e in exponents(datum, mu, b.nu))


def _raw_length(datum: RootDatum, mu, b: SigmaClass, b2: SigmaClass) -> int:
    return _codim(datum, mu, b2) - _codim(datum, mu, b)


def length_formula(datum: RootDatum, mu, b: SigmaClass, b2: SigmaClass) -> int:
    """Length of the interval ``[b2, b]`` computed from stratum codimensions.

    The value is recomputed with ``mu`` shifted by the first simple coroot
    and the two results must agree.
    """
    mu = as_cochar(mu)
    if kottwitz_point(datum, mu) != b.kappa:
        raise KottwitzMismatchError("kappa(mu) differs from kappa(b)")
    if not dominance_leq(datum, b2, b):
        raise ValueError(f"{b2} is not below {b}")
    val = _raw_length(datum, mu, b, b2)
    if datum.ell:
        shifted = mu + as_cochar(datum.simple_coroots[0])
        if _raw_length(datum, shifted, b, b2) != val:
            raise AssertionError("length depends on the choice of mu")
    return val


def leng_from_top(datum: RootDatum, mu, b: SigmaClass) -> int:
    """``leng([varpi^mu], b)``, which equals the codimension of the stratum of ``b``."""
    return _codim(datum, mu, b)


# ---------------------------------------------------------------------------
# Hasse diagrams


def cover_pairs(datum: RootDatum, classes: Sequence[SigmaClass]) -> list[tuple[int, int]]:
    """Index pairs ``(lo, hi)`` with ``classes[lo]`` covered by ``classes[hi]``."""
    n = len(classes)
    less = [[i != j and dominance_leq(datum, classes[i], classes[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][k] and less[k][j] for k in range(n)):
                edges.append((i, j))
    return edges


def hasse_diagram(datum: RootDatum, classes: Sequence[SigmaClass]) -> list[tuple[SigmaClass, SigmaClass]]:
    """Cover edges ``(lower, upper)``, in the order of ``classes``."""
    return [(classes[i], classes[j]) for i, j in cover_pairs(datum, classes)]


def chain_lengths(datum: RootDatum, classes: Sequence[SigmaClass], lo: int, hi: int) -> set[int]:
    """Lengths of all maximal chains from ``classes[lo]`` up to ``classes[hi]``."""
    ups: dict[int, list[int]] = {}
    for i, j in cover_pairs(datum, classes):
        ups.setdefault(i, []).append(j)
    memo: dict[int, set[int]] = {}

    def walk(i: int) -> set[int]:
        if i == hi:
            return {0}
        if i not in memo:
            memo[i] = {1 + x for j in ups.get(i, []) for x in walk(j)}
        return memo[i]

    return walk(lo)


# ---------------------------------------------------------------------------
# closure and Mazur


def closure_contains(shape_b: StratumShape, shape_b2: StratumShape) -> bool:
    """Whether the stratum of ``b2`` lies in the closure box of the stratum of ``b``."""
    if shape_b.mu != shape_b2.mu or shape_b.class_ref.kappa != shape_b2.class_ref.kappa:
        raise KottwitzMismatchError("shapes come from different mu or Kottwitz points")
    for e, e2, kind2 in zip(shape_b.exponents, shape_b2.exponents, shape_b2.kinds):
        floor_val = ceil_frac(e)
        if kind2 == CIRCLE:
            if e2 < floor_val:
                return False
        elif ceil_frac(e2) < floor_val:
            return False
    return True


def mazur_check(datum: RootDatum, mu, b: SigmaClass) -> bool:
    """All exponents of the stratum shape are nonnegative."""
    return all(e >= 0 for e in stratum_shape(datum, mu, b).exponents)


# ---------------------------------------------------------------------------
# the q-identities and point counts


def _term(datum, mu, b: SigmaClass, shift: int) -> LaurentPolyZ:
    nj = len(j_set(datum, b.nu))
    return (Q - 1) ** nj * Q ** (shift - nj - leng_from_top(datum, mu, b))


def _checked_one(poly: LaurentPolyZ) -> bool:
    return poly == 1 and all(poly(q) == 1 for q in SAMPLE_QS)


def verify_identity_full(datum: RootDatum, mu) -> tuple[LaurentPolyZ, bool]:
    """Sum of ``(q-1)^#J q^(-#J - leng)`` over B(G, mu), and whether it is 1."""
    total = LaurentPolyZ()
    for b in enumerate_bgmu(datum, mu):
        total = total + _term(datum, mu, b, 0)
    return total, _checked_one(total)


def irreducible_classes(datum: RootDatum, mu) -> list[SigmaClass]:
    return [b for b in enumerate_bgmu(datum, mu) if is_hn_irreducible(datum, mu, b)]


def verify_identity_irr(datum: RootDatum, mu) -> tuple[LaurentPolyZ, bool] | None:
    """Sum of ``(q-1)^#J q^(r - #J - leng)`` over the Hodge-Newton irreducible
    classes, or ``None`` when there are none."""
    irr = irreducible_classes(datum, mu)
    if not irr:
        return None
    total = LaurentPolyZ()
    for b in irr:
        total = total + _term(datum, mu, b, datum.r)
    return total, _checked_one(total)


def point_count(datum: RootDatum, mu, b: SigmaClass, m: int) -> LaurentPolyZ:
    """Number of points of the stratum of ``b`` in the cross-section modulo level ``m``.

    Valid when every circle exponent is below ``m`` and every disk ceiling is
    at most ``m``.
    """
    shape = stratum_shape(datum, mu, b)
    if m < 1:
        raise ValueError("m must be positive")
    if any(e < 0 for e in shape.exponents):
        raise ValueError(f"{b} is not in B(G, mu); its stratum has no integral points")
    if not _level_ok(shape, m):
        raise ValueError(f"m={m} is too small for exponents {[frac_str(e) for e in shape.exponents]}")
    nj = sum(1 for k in shape.kinds if k == CIRCLE)
    return (Q - 1) ** nj * Q ** (m * datum.r - nj - shape.codim)


def count_precondition(datum: RootDatum, mu, m: int) -> bool:
    """Whether ``point_count`` is valid at level ``m`` for every class of B(G, mu)."""
    return all(_level_ok(stratum_shape(datum, mu, b), m) for b in enumerate_bgmu(datum, mu))


def _level_ok(shape: StratumShape, m: int) -> bool:
    # circles need e < m so a unit times varpi^e survives; disks need ceil(e) <= m
    return all(
        (e < m) if kind == CIRCLE else (ceil_frac(e) <= m) for e, kind in zip(shape.exponents, shape.kinds)
    )


def hn_cover_classes(datum: RootDatum, mu) -> list[SigmaClass]:
    """Classes met by the cross-section points whose coordinates all have positive valuation.

    Found by classifying every valuation pattern with entries in
    ``1..max_ceiling+1`` or infinity.
    """
    classes = enumerate_bgmu(datum, mu)
    top = max((_codim(datum, mu, b) for b in classes), default=0) + 1
    seen = {}
    for v in itertools.product([*range(1, top + 1), INF], repeat=datum.r):
        for b in matching_classes(datum, mu, v):
            seen[b.key()] = b
    order = {b.key(): i for i, b in enumerate(classes)}
    return sorted(seen.values(), key=lambda b: order.get(b.key(), len(order)))


def boundary_cover_counts(datum: RootDatum, mu) -> list[tuple[SigmaClass, int, int]]:
    """For each class: the number of classes it covers and ``#J``."""
    classes = enumerate_bgmu(datum, mu)
    below = [0] * len(classes)
    for i, j in cover_pairs(datum, classes):
        below[j] += 1
    return [(b, below[k], len(j_set(datum, b.nu))) for k, b in enumerate(classes)]


# ---------------------------------------------------------------------------
# reports


def _j_string(datum, b) -> str:
    return ",".join(str(i) for i in sorted(j_set(datum, b.nu)))


def stratum_table_tsv(datum: RootDatum, mu) -> str:
    out = io.StringIO()
    out.write("nu\tkappa\tJ\texponents\tcodim\tleng\n")
    for b in enumerate_bgmu(datum, mu):
        shape = stratum_shape(datum, mu, b)
        out.write(
            "\t".join(
                [
                    ",".join(b.nu.to_strings()),
                    ",".join(str(x) for x in b.kappa.coords),
                    _j_string(datum, b),
                    ",".join(frac_str(e) for e in shape.exponents),
                    str(shape.codim),
                    str(leng_from_top(datum, mu, b)),
                ]
            )
            + "\n"
        )
    return out.getvalue()


def hasse_dot(datum: RootDatum, mu) -> str:
    classes = enumerate_bgmu(datum, mu)
    lines = [f'digraph "B({datum.name}, {as_cochar(mu)})" {{', "  rankdir=BT;"]
    for k, b in enumerate(classes):
        label = f"nu=({', '.join(b.nu.to_strings())})\\nleng={leng_from_top(datum, mu, b)}"
        lines.append(f'  n{k} [label="{label}"];')
    for i, j in cover_pairs(datum, classes):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def identity_report(datum: RootDatum, mu) -> dict:
    """Both identities as JSON-ready dictionaries."""
    mu_v = as_cochar(mu)
    classes = enumerate_bgmu(datum, mu)
    full_terms = [
        {"nu": b.nu.to_strings(), "J": sorted(j_set(datum, b.nu)), "leng": leng_from_top(datum, mu, b), "term": str(_term(datum, mu, b, 0))}
        for b in classes
    ]
    full, ok = verify_identity_full(datum, mu)
    report = {
        "group": datum.name,
        "mu": mu_v.to_strings(),
        "full": {"terms": full_terms, "sum": str(full), "ok": ok},
    }
    irr = verify_identity_irr(datum, mu)
    if irr is None:
        report["irr"] = {"applicable": False, "ok": True}
    else:
        irr_terms = [
            {"nu": b.nu.to_strings(), "J": sorted(j_set(datum, b.nu)), "leng": leng_from_top(datum, mu, b), "term": str(_term(datum, mu, b, datum.r))}
            for b in irreducible_classes(datum, mu)
        ]
        report["irr"] = {"applicable": True, "terms": irr_terms, "sum": str(irr[0]), "ok": irr[1]}
    return report


def identity_report_json(datum: RootDatum, mu) -> str:
    return json.dumps(identity_report(datum, mu), indent=2) + "\n"
