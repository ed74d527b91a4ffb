import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from newton_strata.crosssec import (
    CIRCLE,
    DISK,
    INF,
    beta_root_coords,
    beta_roots,
    c_sigma_root,
    classify_valuation_pattern,
    cross_nilpotence_depth,
    cross_operator,
    decompose_eta,
    eta_candidates,
    in_one_minus_sigma,
    k_xi_exponents,
    matching_classes,
    solve_lambda,
    stratum_shape,
)
from newton_strata.isocrystal import KottwitzMismatchError, SigmaClass, enumerate_bgmu, kottwitz_point, top_class
from newton_strata.rootdata import RatVec, build_root_datum, coxeter_element, preset_names, weyl_matrix

from conftest import RECORDED_DEPTHS, dominant_grid

ALL = preset_names()
GL2, GL3 = build_root_datum("GL2"), build_root_datum("GL3")
F = Fraction


def cls(d, mu, nu):
    return SigmaClass(kottwitz_point(d, mu), RatVec.cochar(nu))


class TestBetaRoots:
    def test_gl2(self):
        assert [b.coords for b in beta_roots(GL2)] == [(1, -1)]

    def test_gl3(self):
        assert beta_root_coords(GL3) == ((1, 1), (0, 1))

    def test_a2_sum_is_not_a_root(self):
        b1, b2 = beta_root_coords(GL3)
        assert tuple(x + y for x, y in zip(b1, b2)) == (1, 2)
        assert (1, 2) not in GL3.root_set

    @pytest.mark.parametrize("name", ALL)
    def test_inversion_set(self, name):
        d = build_root_datum(name)
        inverted = {b for b in d.positive_roots if sum(c_sigma_root(d, b)) < 0}
        assert set(beta_root_coords(d)) == inverted
        assert len(inverted) == d.r

    @pytest.mark.parametrize("name", ALL)
    def test_pairwise_sums_not_roots(self, name):
        d = build_root_datum(name)
        for a, b in itertools.combinations(beta_root_coords(d), 2):
            assert tuple(x + y for x, y in zip(a, b)) not in d.root_set


class TestSolveLambda:
    def test_gl2_basic(self):
        lam = solve_lambda(GL2, (1, 0), ("1/2", "1/2"))
        assert lam.coords == (F(1, 4), F(-1, 4))
        assert GL2.pair(lam.coords, beta_roots(GL2)[0].coords) == F(1, 2)

    def test_gl2_top(self):
        assert solve_lambda(GL2, (1, 0), (1, 0)).coords == (0, 0)

    def test_gl3_basic(self):
        lam = solve_lambda(GL3, (1, 0, 0), ("1/3", "1/3", "1/3"))
        assert [GL3.pair(lam.coords, b.coords) for b in beta_roots(GL3)] == [F(2, 3), F(1, 3)]

    def test_outside_span(self):
        with pytest.raises(ValueError):
            solve_lambda(GL2, (1, 0), (0, 0))

    @pytest.mark.parametrize("name", ["GL3", "SL4", "B3_ad", "G2", "2A3", "3D4", "U3", "U4", "2A2_gl"])
    def test_equation_holds(self, name):
        d = build_root_datum(name)
        w = weyl_matrix(d, coxeter_element(d))
        cs = [[sum(w[i][k] * d.sigma_lattice[k][j] for k in range(d.rank)) for j in range(d.rank)] for i in range(d.rank)]
        for mu in dominant_grid(d, 1):
            for b in enumerate_bgmu(d, mu):
                lam = solve_lambda(d, mu, b.nu).coords
                img = [sum(c * x for c, x in zip(row, lam)) for row in cs]
                assert tuple(x - y for x, y in zip(lam, img)) == (RatVec.cochar(mu) - b.nu).coords

    def test_split_solution_in_coroot_span(self):
        d = build_root_datum("GL3")
        lam = solve_lambda(d, (2, 1, 0), (1, 1, 1))
        assert sum(lam.coords) == 0


class TestStratumShape:
    def test_gl2_top(self):
        s = stratum_shape(GL2, (1, 0), cls(GL2, (1, 0), (1, 0)))
        assert s.exponents == (0,) and s.kinds == (CIRCLE,)

    def test_gl2_basic(self):
        s = stratum_shape(GL2, (1, 0), cls(GL2, (1, 0), ("1/2", "1/2")))
        assert s.exponents == (F(1, 2),) and s.kinds == (DISK,) and s.ceilings == (1,)

    def test_gl3_middle(self):
        s = stratum_shape(GL3, (1, 0, 0), cls(GL3, (1, 0, 0), ("1/2", "1/2", 0)))
        assert s.exponents == (F(1, 2), 0) and s.kinds == (DISK, CIRCLE)

    def test_kappa_mismatch(self):
        with pytest.raises(KottwitzMismatchError):
            stratum_shape(GL2, (1, 0), cls(GL2, (1, 1), (1, 1)))

    def test_json(self):
        s = stratum_shape(GL2, (1, 0), cls(GL2, (1, 0), ("1/2", "1/2")))
        assert s.to_dict() == {"nu": ["1/2", "1/2"], "kappa": [1], "exponents": ["1/2"], "kinds": ["disk"], "codim": 1}

    @pytest.mark.parametrize("name", ["GL3", "B2", "2A3", "3D4", "U3"])
    def test_top_class_has_zero_exponents(self, name):
        d = build_root_datum(name)
        for mu in dominant_grid(d, 2):
            s = stratum_shape(d, mu, top_class(d, mu))
            assert all(e == 0 for e in s.exponents)


class TestValuationPatterns:
    def test_unit(self):
        assert classify_valuation_pattern(GL2, (1, 0), (0,)).nu.coords == (1, 0)

    def test_zero_coordinate(self):
        assert classify_valuation_pattern(GL2, (1, 0), (INF,)).nu.coords == (F(1, 2),) * 2

    def test_negative_valuation(self):
        assert classify_valuation_pattern(GL2, (1, 0), (-3,)).nu.coords == (4, -3)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            classify_valuation_pattern(GL3, (1, 0, 0), (0,))

    @pytest.mark.parametrize("name", ["GL3", "2A2", "U3", "B2_ad"])
    def test_shape_contains_its_pattern(self, name):
        d = build_root_datum(name)
        for mu in dominant_grid(d, 2):
            for v in itertools.product([*range(-2, 3), INF], repeat=d.r):
                b = classify_valuation_pattern(d, mu, v)
                assert stratum_shape(d, mu, b).contains_pattern(v)

    def test_infinity_marker(self):
        assert INF > 10**9 and not INF < 0 and INF == INF and INF is type(INF)()
        assert str(INF) == "+inf"

    def test_all_matches_used_for_uniqueness(self):
        assert len(matching_classes(GL3, (1, 0, 0), (INF, INF))) == 1


def k_xi_by_peeling(d, n):
    """Exponents from peeling off the last coordinate one step at a time."""
    reps = d.orbit_reps
    if not n:
        return ()
    head = k_xi_by_peeling(d, n[:-1])
    last = n[-1]
    shifted = tuple(m - last * d.cartan[reps[len(n) - 1] - 1][reps[i] - 1] for i, m in enumerate(head))
    return shifted + (-last,)


class TestKXi:
    def test_gl2(self):
        assert k_xi_exponents(GL2, (1,)) == (-1,)

    def test_gl3(self):
        assert k_xi_exponents(GL3, (1, 1)) == (0, -1)

    @pytest.mark.parametrize("name", ["GL3", "3D4", "G2", "F4"])
    def test_zero(self, name):
        d = build_root_datum(name)
        assert k_xi_exponents(d, (0,) * d.r) == (0,) * d.r

    @pytest.mark.parametrize("name", ["GL4", "B3", "G2", "F4", "2A4", "3D4"])
    @given(data=st.data())
    def test_matches_peeling(self, name, data):
        d = build_root_datum(name)
        n = tuple(data.draw(st.lists(st.integers(-5, 5), min_size=d.r, max_size=d.r)))
        assert k_xi_exponents(d, n) == k_xi_by_peeling(d, n)


class TestEta:
    def test_gl2_swap(self):
        assert decompose_eta(GL2, (1, 0), (0, 1)).coords == (0, 1)

    def test_gl2_same(self):
        assert decompose_eta(GL2, (1, 0), (1, 0)).coords == (1, 0)

    def test_gl2_mismatch(self):
        with pytest.raises(KottwitzMismatchError):
            decompose_eta(GL2, (1, 0), (2, 0))

    @pytest.mark.parametrize("name", ["2A2", "2A3_gl", "U3", "3D4_ad", "GL3"])
    def test_conditions_and_uniqueness(self, name):
        d = build_root_datum(name)
        mu = dominant_grid(d, 1)[-1]
        for chi in itertools.product(range(-1, 2), repeat=d.rank):
            if kottwitz_point(d, chi) != kottwitz_point(d, mu):
                continue
            eta = decompose_eta(d, mu, chi)
            assert in_one_minus_sigma(d, [a - b for a, b in zip(chi, eta.as_ints())])
            cr = sympy.Matrix([list(d.simple_coroots[rep - 1]) for rep in d.orbit_reps]).T
            diff = sympy.Matrix([a - b for a, b in zip(mu, eta.as_ints())])
            coeffs = cr.solve_least_squares(diff)
            assert cr * coeffs == diff and all(c.is_integer for c in coeffs)
            box = max((abs(int(c)) for c in coeffs), default=0) + 1
            assert eta_candidates(d, mu, chi, box) == [eta]


class TestCross:
    def test_a1(self):
        assert cross_operator(GL2, [(1,)]) == frozenset()

    def test_a2(self):
        assert cross_operator(GL3, [(1, 0)]) == {(0, 1)}
        assert cross_operator(GL3, [(0, 1)]) == frozenset()
        assert cross_operator(GL3, [(1, 1)]) == frozenset()

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            cross_operator(GL3, [(-1, 0)])

    @pytest.mark.parametrize("name", ["GL4", "B3", "C3", "G2", "D4", "2A3", "3D4", "2D4"])
    def test_against_linear_solve(self, name):
        d = build_root_datum(name)
        betas = sympy.Matrix([list(b) for b in beta_root_coords(d)]).T
        inv_cs = {c_sigma_root(d, g): g for g in d.roots}
        for gamma in d.positive_roots:
            expect = set()
            for delta in d.positive_roots:
                pre = inv_cs[delta]
                for k in range(1, d.highest_height + 1):
                    rest = sympy.Matrix([a - k * b for a, b in zip(pre, gamma)])
                    sol = betas.solve_least_squares(rest) if betas.cols else None
                    if sol is not None and betas * sol == rest and all(x.is_integer and x >= 0 for x in sol):
                        expect.add(delta)
                        break
            assert cross_operator(d, [gamma]) == expect, gamma

    def test_depths_small(self):
        assert cross_nilpotence_depth(GL2) == 1
        assert cross_nilpotence_depth(GL3) == 2

    @pytest.mark.parametrize("name", sorted(RECORDED_DEPTHS))
    def test_recorded_depths(self, name):
        d = build_root_datum(name)
        depth = cross_nilpotence_depth(d)
        assert depth == RECORDED_DEPTHS[name]
        assert depth <= len(d.positive_roots)
