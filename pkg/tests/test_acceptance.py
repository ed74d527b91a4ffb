"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import itertools

import pytest
import sympy

from newton_strata.crosssec import (
    INF,
    beta_root_coords,
    beta_roots,
    c_sigma_root,
    cross_nilpotence_depth,
    decompose_eta,
    eta_candidates,
    in_one_minus_sigma,
    k_xi_exponents,
    matching_classes,
    solve_lambda,
    stratum_shape,
)
from newton_strata.fqoracle import tally_strata
from newton_strata.isocrystal import (
    brute_force_stable,
    dominance_leq,
    enumerate_bgmu,
    enumerate_classes,
    exponents,
    in_bgmu,
    kottwitz_point,
)
from newton_strata.rootdata import build_root_datum, coxeter_element, preset_names, weyl_matrix
from newton_strata.strata import (
    chain_lengths,
    closure_contains,
    count_precondition,
    cover_pairs,
    irreducible_classes,
    length_formula,
    mazur_check,
    verify_identity_full,
    verify_identity_irr,
)

from conftest import GRID_PRESETS, RECORDED_DEPTHS, dominant_grid, grid_instances

ALL = preset_names()
TALLY_MUS = {2: [(1, 0), (2, 0), (1, 1), (2, 1)], 3: [(1, 0, 0), (2, 0, 0), (1, 1, 0), (2, 1, 0)]}


def finish(record, k, failures, detail):
    record(k, not failures, detail if not failures else f"{len(failures)} failures, first: {failures[0]}")
    assert not failures, failures[:5]


@pytest.fixture(scope="module")
def tallies():
    out = []
    for n, mus in TALLY_MUS.items():
        datum = build_root_datum(f"GL{n}")
        for mu in mus:
            for p in (2, 3, 5):
                for M in (1, 2, 3):
                    if count_precondition(datum, mu, M):
                        out.append(tally_strata(n, mu, p, M))
    return out


def test_criterion_1_enumeration_matches_brute_force(record):
    failures, count = [], 0
    for d, mu in grid_instances():
        count += 1
        brute, _ = brute_force_stable(d, mu)
        if {b.key() for b in brute} != {b.key() for b in enumerate_bgmu(d, mu)}:
            failures.append((d.name, mu))
    finish(record, 1, failures, f"{count} instances over {len(GRID_PRESETS)} presets")


def test_criterion_2_identities(record):
    failures, count, irr_count = [], 0, 0
    for d, mu in grid_instances():
        count += 1
        poly, ok = verify_identity_full(d, mu)
        if not (ok and poly == 1):
            failures.append(("full", d.name, mu, str(poly)))
        has_irr = any(all(e > 0 for e in exponents(d, mu, b.nu)) for b in enumerate_bgmu(d, mu))
        irr = verify_identity_irr(d, mu)
        if has_irr != bool(irreducible_classes(d, mu)):
            failures.append(("irr set", d.name, mu))
        if has_irr:
            irr_count += 1
            if irr is None or not (irr[1] and irr[0] == 1):
                failures.append(("irr", d.name, mu))
        elif irr is not None:
            failures.append(("irr should be n/a", d.name, mu))
    finish(record, 2, failures, f"{count} full identities, {irr_count} irreducible identities, exact")


def test_criterion_3_oracle_tallies(record, tallies):
    failures = [(r.group, r.mu, r.p, r.M) for r in tallies if not r.ok]
    points = sum(r.total for r in tallies)
    spot = next(r for r in tallies if (r.mu, r.p, r.M) == ((1, 0), 3, 2))
    if [obs for _, _, obs in spot.rows()] != [6, 3]:
        failures.append(("spot GL2 (1,0) p=3 M=2", [obs for _, _, obs in spot.rows()]))
    finish(record, 3, failures, f"{len(tallies)} tallies, {points} points classified")


def test_criterion_4_ranked_poset(record):
    failures, pairs = [], 0
    for d, mu in grid_instances():
        classes = enumerate_bgmu(d, mu)
        for lo, hi in cover_pairs(d, classes):
            if length_formula(d, mu, classes[hi], classes[lo]) != 1:
                failures.append(("cover", d.name, mu, lo, hi))
        for lo, hi in itertools.product(range(len(classes)), repeat=2):
            if lo != hi and dominance_leq(d, classes[lo], classes[hi]):
                pairs += 1
                expect = length_formula(d, mu, classes[hi], classes[lo])
                if chain_lengths(d, classes, lo, hi) != {expect}:
                    failures.append(("chain", d.name, mu, lo, hi))
    finish(record, 4, failures, f"{pairs} comparable pairs")


def test_criterion_5_closure_and_codimension(record):
    failures, pairs, edges = [], 0, 0
    for d, mu in grid_instances():
        classes = enumerate_classes(d, mu, -3, 3)
        shapes = [stratum_shape(d, mu, b) for b in classes]
        for (b, sb), (b2, sb2) in itertools.product(zip(classes, shapes), repeat=2):
            pairs += 1
            if closure_contains(sb, sb2) != dominance_leq(d, b2, b):
                failures.append(("closure", d.name, mu, b.nu.to_strings(), b2.nu.to_strings()))
        for lo, hi in cover_pairs(d, classes):
            edges += 1
            if shapes[lo].codim != shapes[hi].codim + 1:
                failures.append(("codim", d.name, mu, lo, hi))
    finish(record, 5, failures, f"{pairs} class pairs, {edges} cover edges")


def test_criterion_6_mazur(record, tallies):
    failures, count = [], 0
    for d, mu in grid_instances():
        for b in enumerate_classes(d, mu, -3, 3):
            count += 1
            if mazur_check(d, mu, b) != in_bgmu(d, mu, b):
                failures.append((d.name, mu, b.nu.to_strings()))
    for r in tallies:
        failures.extend((r.group, r.mu, r.p, r.M, raw) for raw in r.bad_factors)
    points = sum(r.total for r in tallies)
    finish(record, 6, failures, f"{count} boxed classes, invariant factors on {points} points")


def test_criterion_7_cross_depth(record):
    failures = []
    for name in ALL:
        d = build_root_datum(name)
        first = cross_nilpotence_depth(d)
        beta_root_coords.cache_clear()
        second = cross_nilpotence_depth(d)
        if not first == second == RECORDED_DEPTHS.get(name, first) or first > len(d.positive_roots):
            failures.append((name, first, second))
    exact = [cross_nilpotence_depth(build_root_datum(n)) for n in ("GL2", "GL3")]
    if exact != [1, 2]:
        failures.append(("GL2/GL3", exact))
    finish(record, 7, failures, f"{len(ALL)} presets, GL2 -> {exact[0]}, GL3 -> {exact[1]}")


def test_criterion_8_partition(record):
    failures, count = [], 0
    for name in ALL:
        d = build_root_datum(name)
        values = [*range(-3, 4), INF]
        for mu in dominant_grid(d, 2):
            for v in itertools.product(values, repeat=d.r):
                count += 1
                found = matching_classes(d, mu, v)
                if len(found) != 1:
                    failures.append((name, mu, v, len(found)))
    finish(record, 8, failures, f"{count} patterns over {len(ALL)} presets")


def _lambda_failures(d):
    out = []
    w = weyl_matrix(d, coxeter_element(d))
    cs = [[sum(w[i][k] * d.sigma_lattice[k][j] for k in range(d.rank)) for j in range(d.rank)] for i in range(d.rank)]
    alpha1 = d.simple_roots[d.orbit_reps[0] - 1]
    betas = beta_roots(d)
    images = {g: c_sigma_root(d, g) for g in d.roots}
    for mu in dominant_grid(d, 1):
        for b in enumerate_bgmu(d, mu):
            nu = b.nu.coords
            lam = solve_lambda(d, mu, b.nu).coords
            img = [sum(c * x for c, x in zip(row, lam)) for row in cs]
            if [x - y for x, y in zip(lam, img)] != [m - v for m, v in zip(mu, nu)]:
                out.append(("equation", d.name, mu, b.nu.to_strings()))
            # pairings are linear in the root, so pair with simple roots once
            pl, pm, pn = (d.root_pairings(x) for x in (lam, mu, nu))
            for g, cg in images.items():
                lhs = sum(a * x for a, x in zip(g, pl)) + sum(a * (y - x) for a, x, y in zip(cg, pl, pm))
                if lhs != sum(a * x for a, x in zip(cg, pn)):
                    out.append(("(1)", d.name, mu, g))
                    break
            if [d.pair(lam, bt.coords) for bt in betas] != list(exponents(d, mu, b.nu)):
                out.append(("(2)", d.name, mu))
            if d.pair(mu, alpha1) - d.pair(lam, betas[0].coords) - d.pair(lam, alpha1) != d.pair(nu, alpha1):
                out.append(("(3)", d.name, mu))
    return out


def _k_xi_by_peeling(d, n):
    if not n:
        return ()
    reps = d.orbit_reps
    head = _k_xi_by_peeling(d, n[:-1])
    last = n[-1]
    return tuple(m - last * d.cartan[reps[len(n) - 1] - 1][reps[i] - 1] for i, m in enumerate(head)) + (-last,)


def _eta_failures(d):
    out = []
    reps = d.orbit_reps
    coroots = [d.simple_coroots[rep - 1] for rep in reps]
    cr = sympy.Matrix([list(c) for c in coroots]).T
    # uniqueness: only a = 0 puts sum a_i alpha_i^vee into (1 - sigma) X_*
    for a in itertools.product(range(-2, 3), repeat=d.r):
        x = [sum(ai * c[k] for ai, c in zip(a, coroots)) for k in range(d.rank)]
        if in_one_minus_sigma(d, x) != (not any(a)):
            out.append(("box", d.name, a))
    mu = dominant_grid(d, 1)[-1]
    kappa = kottwitz_point(d, mu)
    for chi in itertools.product(range(-1, 2), repeat=d.rank):
        if kottwitz_point(d, chi) != kappa:
            continue
        eta = decompose_eta(d, mu, chi).as_ints()
        if not in_one_minus_sigma(d, [a - b for a, b in zip(chi, eta)]):
            out.append(("chi - eta", d.name, chi))
        diff = sympy.Matrix([a - b for a, b in zip(mu, eta)])
        coeffs = cr.solve_least_squares(diff) if d.r else sympy.zeros(0, 1)
        if cr * coeffs != diff or not all(c.is_integer for c in coeffs):
            out.append(("mu - eta", d.name, chi))
            continue
        # the residue box around the solution holds no other candidate
        if [e.as_ints() for e in eta_candidates(d, eta, chi, 2)] != [eta]:
            out.append(("candidates near eta", d.name, chi))
        box = max((abs(int(c)) for c in coeffs), default=0) + 1
        if box <= 3 and [e.as_ints() for e in eta_candidates(d, mu, chi, box)] != [eta]:
            out.append(("candidates from mu", d.name, chi))
    return out


def test_criterion_9_structural_checks(record):
    failures = []
    for name in ALL:
        d = build_root_datum(name)
        betas = beta_root_coords(d)
        for i, bt in enumerate(betas):
            if bt not in d.positive_roots or sum(c_sigma_root(d, bt)) >= 0:
                failures.append(("beta sign", name, i))
        for a, b in itertools.combinations(betas, 2):
            if tuple(x + y for x, y in zip(a, b)) in d.root_set:
                failures.append(("beta sum", name, a, b))
        failures.extend(_lambda_failures(d))
        for n in itertools.product(range(-2, 3), repeat=d.r):
            if k_xi_exponents(d, n) != _k_xi_by_peeling(d, n):
                failures.append(("k_xi", name, n))
                break
        failures.extend(_eta_failures(d))
    finish(record, 9, failures, f"beta, lambda, K_xi and eta checks on {len(ALL)} presets")
