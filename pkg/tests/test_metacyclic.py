from __future__ import annotations

import numpy as np
import pytest

from endotrivial import groups
from endotrivial.errors import BadParameters, CapExceeded, FormulaMismatch, HypothesisFailed, NotSplit
from endotrivial.metacyclic import (
    MetacyclicPresentation,
    construct,
    expected_shape,
    local_table,
    power_rule,
    pprime_automorphism_exists,
    presentation_grid,
    recognize,
    shape_violations,
    structural_data,
)
from endotrivial.perm import centralizer, conjugate_subgroup, is_normal, normalizer, quotient
from endotrivial.subgroups import PLocalContext, nontrivial_subgroups


def test_presentation_validation():
    assert MetacyclicPresentation(3, 2, 1, 1).split
    assert MetacyclicPresentation(3, 1, 1, 1).abelian
    with pytest.raises(BadParameters, match="l, q <= m"):
        MetacyclicPresentation(3, 3, 1, 1)
    with pytest.raises(BadParameters, match="odd prime"):
        MetacyclicPresentation(2, 2, 1, 1)
    with pytest.raises(BadParameters, match="l < q < n"):
        MetacyclicPresentation(3, 2, 2, 1, 1)
    with pytest.raises(BadParameters, match=r"p\^\(q\+l\)"):
        MetacyclicPresentation(3, 3, 2, 1, 1, strict=False)
    MetacyclicPresentation(3, 2, 2, 1, 1, strict=False)


def test_grid_contents():
    grid = presentation_grid()
    assert len(grid) == 58
    assert [g.as_tuple() for g in grid if not g.split] == [(3, 3, 3, 1, 2), (5, 3, 3, 1, 2)]


@pytest.mark.parametrize("pres", presentation_grid(primes=(3,), max_total=4), ids=lambda p: str(p.as_tuple()))
def test_construct_relations_and_order(pres):
    M = construct(pres)
    G, x, y = M.permutation_group()
    assert G.order == pres.order
    # arithmetic index equals the image of point 0 of the regular permutation
    assert G.element(x).images[0] == M.x and G.element(y).images[0] == M.y
    assert G.power(x, M.pm) == 0 and G.element_orders[x] == M.pm
    assert G.power(y, M.pn) == G.power(x, pres.p**pres.q % M.pm)
    assert G.conj(y, x) == G.power(x, pres.multiplier)


def test_construct_examples():
    M = construct(MetacyclicPresentation(3, 1, 1, 1))
    G, _, _ = M.permutation_group()
    assert G.order == 9 and G.is_abelian()
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    G, _, _ = M.permutation_group()
    assert G.order == 27 and not G.is_abelian() and G.element_orders.max() == 9
    M = construct(MetacyclicPresentation(3, 2, 2, 1, 1, strict=False))
    assert int(M.power(M.y, 9)) == int(M.power(M.x, 3))


def test_arithmetic_group_axioms_small():
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    ar = np.arange(M.order)
    A, B, C = np.meshgrid(ar, ar, ar, indexing="ij")
    assert (M.mul(M.mul(A, B), C) == M.mul(A, M.mul(B, C))).all()
    assert (M.mul(ar, M.inverse) == 0).all()


def test_power_rule_examples():
    m27 = MetacyclicPresentation(3, 2, 1, 1)
    assert power_rule(2, 1, 1, m27) == (2, 1)
    assert power_rule(4, 0, 5, m27) == (20 % 9, 0)
    assert power_rule(1, 1, 3, m27) == (3, 0)
    with pytest.raises(NotSplit):
        power_rule(1, 1, 2, MetacyclicPresentation(3, 3, 3, 1, 2))


def test_power_rule_permutation_oracle_m27():
    pres = MetacyclicPresentation(3, 2, 1, 1)
    M = construct(pres)
    X, Y = M.regular_permutation(M.x), M.regular_permutation(M.y)
    for a in range(9):
        for c in range(3):
            g = (X**a) * (Y**c)
            for alpha in range(1, 28):
                A, C = power_rule(a, c, alpha, pres)
                assert g**alpha == (X**A) * (Y**C)


@pytest.mark.parametrize("params", [(3, 2, 2, 1), (5, 2, 2, 1)])
def test_power_rule_random(params):
    pres = MetacyclicPresentation(*params)
    M = construct(pres)
    rng = np.random.default_rng(7)
    for a, c, alpha in rng.integers(1, [M.pm, M.pn, 60], size=(300, 3)):
        A, C = power_rule(int(a), int(c), int(alpha), pres)
        assert int(M.power(M.element(int(a), int(c)), int(alpha))) == M.element(A, C)


def test_structural_examples():
    d = structural_data(construct(MetacyclicPresentation(3, 1, 1, 1)))
    assert d.e_central and d.cse_scan == frozenset(range(9))
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    d = structural_data(M)
    assert d.center_scan == M.span([M.power(M.x, 3)])
    assert d.omega_scan == M.span([M.power(M.x, 3), M.y])
    assert len(d.cse_scan) == 9 and not d.e_central


def test_structural_nonsplit_mismatch_is_reported():
    M = construct(MetacyclicPresentation(3, 3, 3, 1, 2))
    d = structural_data(M, strict=False)
    assert d.mismatches == ["cse"]
    assert not d.e_central and d.center_cyclic and not d.criterion
    # the centraliser is <x, y^p> rather than <x^p, y>
    assert d.cse_scan == M.span([M.x, M.power(M.y, 3)])
    with pytest.raises(FormulaMismatch):
        structural_data(M)


def test_split_grid_structural_agreement():
    for pres in presentation_grid():
        if pres.split:
            d = structural_data(construct(pres))
            assert d.equivalence_holds, pres.as_tuple()


def test_recognize():
    C9 = groups.cyclic(9)
    assert recognize(C9.whole(), 3).kind == "cyclic"
    r = recognize(groups.c3_squared().whole(), 3)
    assert r.kind == "split" and r.presentation.as_tuple() == (3, 1, 1, 1, 1)
    assert recognize(groups.extraspecial27().whole(), 3) is None
    r = recognize(groups.m27().whole(), 3)
    assert r.presentation.as_tuple() == (3, 2, 1, 1, 2)
    r = recognize(groups.nonsplit729().whole(), 3)
    assert r.kind == "nonsplit" and r.presentation.as_tuple() == (3, 3, 3, 1, 2)
    assert recognize(groups.symmetric3().whole(), 3) is None


def test_extraspecial_has_no_cyclic_normal_with_cyclic_quotient():
    G = groups.extraspecial27()
    for H in nontrivial_subgroups(G):
        if G.element_orders[H.sorted].max() == H.order and H.order < 27:
            if is_normal(G.whole(), H):
                Q = quotient(G, H).as_group()
                assert Q.element_orders.max() < Q.order


def test_presented81_is_split():
    r = recognize(groups.presented81().whole(), 3)
    assert r.kind == "split" and r.presentation.as_tuple() == (3, 3, 1, 2, 3)


@pytest.mark.parametrize("params", [(3, 2, 1, 1, None), (3, 2, 2, 1, None), (3, 3, 3, 1, 2)])
def test_subquotients_recognise(params):
    G = groups.metacyclic(*params)
    for H in nontrivial_subgroups(G)[::5]:
        assert recognize(H, 3) is not None
        if is_normal(G.whole(), H) and H.order < G.order and G.order // H.order <= 81:
            Q = quotient(G, H).as_group()
            assert Q.order == 1 or recognize(Q.whole(), 3) is not None


def test_pprime_automorphisms():
    ok, w = pprime_automorphism_exists(construct(MetacyclicPresentation(3, 1, 1, 1)))
    assert ok and w.order % 3
    ok, w = pprime_automorphism_exists(construct(MetacyclicPresentation(3, 2, 1, 1)))
    assert ok and w.order == 2
    with pytest.raises(CapExceeded):
        pprime_automorphism_exists(construct(MetacyclicPresentation(3, 3, 3, 1, 2)))
    ok, w = pprime_automorphism_exists(construct(MetacyclicPresentation(3, 3, 3, 1, 2)), cap=3**6)
    assert not ok


def test_inversion_is_an_automorphism_of_m27():
    # x -> x^-1 keeps y x y^-1 = x^4 because (x^-1)^4 = x^-4
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    images = M.endomorphism_images(int(M.inverse[M.x]), M.y)
    ar = np.arange(M.order)
    A, B = np.meshgrid(ar, ar, indexing="ij")
    assert (images[M.mul(A, B)] == M.mul(images[A], images[B])).all()


def test_shape_constraints_nonabelian_split():
    small = [*presentation_grid(primes=(3,), max_total=5), *presentation_grid(primes=(5,), max_total=3)]
    for pres in small:
        if pres.split and not pres.abelian:
            assert shape_violations(construct(pres)) == [], pres.as_tuple()


def test_shape_constraints_abelian_boundary_flagged():
    """For l = m the literal n > l rule would force d = 1; abelian groups break it."""
    pres = MetacyclicPresentation(3, 1, 2, 1)
    assert expected_shape(pres) == "upper"
    assert shape_violations(construct(pres))
    assert expected_shape(MetacyclicPresentation(3, 2, 2, 2)) == "free"
    assert shape_violations(construct(MetacyclicPresentation(3, 2, 2, 2))) == []


def test_local_table_semidirect():
    G = groups.m27_inverted()
    ctx = PLocalContext(G, 3)
    rec = recognize(ctx.sylow, 3)
    t = local_table(ctx, rec)
    assert t.ok, {k: v for k, v in t.checks.items() if not v}
    assert normalizer(G, t.Z) == G.whole() and centralizer(G, t.Z).order == 27
    assert normalizer(G, t.Q[0]) == centralizer(G, t.Q[0]) and centralizer(G, t.Q[0]).order == 18
    assert t.action.d == 1 and t.action.b % 3 == 0


def test_local_table_p_group():
    G = groups.m27()
    ctx = PLocalContext(G, 3)
    rec = recognize(ctx.sylow, 3)
    t = local_table(ctx, rec)
    assert t.ok and t.w is None
    for Q in t.Q:
        assert normalizer(G, Q) == centralizer(G, Q) == t.S_E and t.S_E.order == 9


def test_q_cycling_direction():
    G = groups.m27()
    rec = recognize(G.whole(), 3)
    t = local_table(PLocalContext(G, 3), rec)
    # left conjugation by x steps the index down; its inverse steps it up
    assert conjugate_subgroup(rec.x, t.Q[0]) == t.Q[2]
    assert conjugate_subgroup(int(G.inverse[rec.x]), t.Q[0]) == t.Q[1]


def test_local_table_guards():
    ctx = PLocalContext(groups.metacyclic(3, 2, 2, 1), 3)
    with pytest.raises(HypothesisFailed):
        local_table(ctx, recognize(ctx.sylow, 3))
