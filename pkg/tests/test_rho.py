from __future__ import annotations

import pytest

import oracles
from endotrivial import groups
from endotrivial.errors import NotSplitMetacyclic, StronglyEmbeddedProper
from endotrivial.perm import quotient
from endotrivial.rho import (
    abelianized_kernel,
    chain_closure,
    closed_form_central,
    j_equals_derived_times_r,
    pprime_part,
    rho1,
    rho_infinity,
    split_metacyclic_kernel,
)
from endotrivial.subgroups import PLocalContext

PAIRS = [("S3", 3), ("A4", 2), ("SL(2,3)", 3), ("M27:C2", 3), ("C3xC3:inv", 3), ("S4", 2), ("C7:M27", 3)]


def elements(G, H):
    return frozenset(map(tuple, G.perms[H.sorted].tolist()))


def test_rho1_examples():
    ctx = PLocalContext(groups.m27(), 3)
    assert rho1(ctx, ctx.sylow) == ctx.group.whole()
    ctx = PLocalContext(groups.symmetric3(), 3)
    assert rho1(ctx, ctx.sylow).order == 3
    ctx = PLocalContext(groups.alternating4(), 2)
    assert rho1(ctx, ctx.sylow).order == 4


@pytest.mark.parametrize("name,p,order", [("M27", 3, 27), ("S3", 3, 3), ("A4", 2, 4)])
def test_rho_infinity(name, p, order):
    series = rho_infinity(PLocalContext(groups.NAMED[name](), p))
    assert series.limit.order == order
    orders = [L.order for L in series.levels]
    assert orders == sorted(orders)


@pytest.mark.parametrize("name,p", PAIRS)
def test_chain_closure_matches_oracle(name, p):
    G = groups.NAMED[name]()
    ctx = PLocalContext(G, p)
    res = chain_closure(ctx)
    T = frozenset(map(tuple, G.perms.tolist()))
    assert elements(G, res.subgroup) == oracles.chain_closure_subgroup(T, elements(G, ctx.sylow), p)
    assert res.normal
    assert res.quotient_order * res.subgroup.order == ctx.normalizer.order
    for w in res.witnesses:
        assert w.verify(ctx)
        assert w.product in ctx.normalizer


def test_chain_closure_examples():
    res = chain_closure(PLocalContext(groups.m27(), 3))
    assert res.subgroup.order == 27 and res.quotient_order == 1
    res = chain_closure(PLocalContext(groups.alternating4(), 2))
    assert (res.subgroup.order, res.quotient_order, res.abelianization) == (4, 3, [3])
    res = chain_closure(PLocalContext(groups.symmetric3(), 3))
    assert (res.subgroup.order, res.quotient_order, res.abelianization) == (3, 2, [2])


@pytest.mark.parametrize("name,p", PAIRS)
def test_reach_sets_shrink_with_larger_start(name, p):
    ctx = PLocalContext(groups.NAMED[name](), p)
    reach = chain_closure(ctx).reach
    for A in reach:
        for B in reach:
            if A <= B:
                assert reach[B] <= reach[A]


def test_closed_form_flags():
    c = closed_form_central(PLocalContext(groups.alternating4(), 2))
    assert c.subgroup.order == 4 and c.applicable
    c = closed_form_central(PLocalContext(groups.symmetric3(), 3))
    assert c.subgroup.order == 3 and c.applicable
    c = closed_form_central(PLocalContext(groups.m27_inverted(), 3))
    assert (c.omega1_central, c.normalizer_controls_fusion) == (False, True)


@pytest.mark.parametrize("name,p,order", [("M27", 3, 27), ("S3", 3, 3), ("A4", 2, 4)])
def test_abelianized_kernel(name, p, order):
    ctx = PLocalContext(groups.NAMED[name](), p)
    J = abelianized_kernel(ctx)
    assert J.order == order
    assert j_equals_derived_times_r(ctx, J, chain_closure(ctx).subgroup)


def test_split_metacyclic_kernel():
    ctx = PLocalContext(groups.m27(), 3)
    r = split_metacyclic_kernel(ctx)
    assert r.subgroup == ctx.group.whole() and r.case == "noncentral"
    ctx = PLocalContext(groups.m27_inverted(), 3)
    r = split_metacyclic_kernel(ctx)
    assert r.subgroup.order == 27 and r.case == "noncentral" and r.choice_independent
    assert quotient(ctx.normalizer, r.subgroup).order == 2
    ctx = PLocalContext(groups.metacyclic(3, 2, 2, 1), 3)
    r = split_metacyclic_kernel(ctx)
    assert r.case == "central" and r.subgroup == closed_form_central(ctx).subgroup


def test_split_metacyclic_kernel_errors():
    with pytest.raises(NotSplitMetacyclic):
        split_metacyclic_kernel(PLocalContext(groups.nonsplit729(), 3))
    with pytest.raises(NotSplitMetacyclic):
        split_metacyclic_kernel(PLocalContext(groups.alternating4(), 2))
    with pytest.raises(NotSplitMetacyclic):
        split_metacyclic_kernel(PLocalContext(groups.alternating5(), 5))


def test_strongly_embedded_guard():
    # A6 at p = 3: Sylow C3 x C3 (split metacyclic), G0 is the Borel subgroup of order 36
    from endotrivial.fusion import strongly_embedded_core
    from endotrivial.perm import FiniteGroup

    A6 = FiniteGroup(6, [[1, 2, 3, 4, 0, 5], [0, 2, 3, 4, 5, 1]])
    assert A6.order == 360
    ctx = PLocalContext(A6, 3)
    G0, proper = strongly_embedded_core(ctx)
    assert proper and G0.order == 36
    with pytest.raises(StronglyEmbeddedProper):
        split_metacyclic_kernel(ctx)


def test_pprime_part():
    assert pprime_part([2, 6], 3) == [2, 2]
    assert pprime_part([3, 9], 3) == []
