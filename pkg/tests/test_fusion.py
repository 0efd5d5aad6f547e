from __future__ import annotations

import pytest

import oracles
from endotrivial import groups
from endotrivial.errors import SylowNotContained
from endotrivial.fusion import (
    controls_fusion,
    fusion_violation,
    is_strongly_p_embedded,
    orbit_poset_components,
    strongly_embedded_core,
)
from endotrivial.perm import generate, join
from endotrivial.subgroups import PLocalContext, sylow_p


def tuples(G):
    return [tuple(r) for r in G.perms.tolist()]


def test_p_group_controls_itself():
    ctx = PLocalContext(groups.m27(), 3)
    assert controls_fusion(ctx, ctx.group.whole()) == (True, None)


def test_s4_negative_control():
    G = groups.symmetric4()
    ctx = PLocalContext(G, 2)
    ok, v = controls_fusion(ctx, ctx.normalizer)
    assert not ok
    assert v.holds(ctx, ctx.normalizer)
    assert v.subgroup <= ctx.sylow
    # the normal Klein four group is fused by a 3-cycle as well
    V = generate(G, [G.index([1, 0, 3, 2]), G.index([2, 3, 0, 1])])
    w = fusion_violation(ctx, ctx.normalizer, V)
    assert w is not None and w.holds(ctx, ctx.normalizer)
    assert G.element_orders[w.element] in (3, 6) or not generate(G, [w.element]) <= ctx.normalizer
    assert not oracles.controls_fusion(frozenset(tuples(G)), frozenset(map(tuple, G.perms[ctx.sylow.sorted].tolist())),
                                       frozenset(map(tuple, G.perms[ctx.normalizer.sorted].tolist())))


def test_sylow_not_contained():
    G = groups.symmetric4()
    ctx = PLocalContext(G, 2)
    with pytest.raises(SylowNotContained):
        controls_fusion(ctx, G.trivial())


@pytest.mark.parametrize("name,p", [("A4", 2), ("A5", 2), ("SL(2,3)", 3), ("M27:C2", 3), ("C3xC3:inv", 3), ("S4", 2)])
def test_controls_fusion_matches_oracle(name, p):
    G = groups.NAMED[name]()
    ctx = PLocalContext(G, p)
    T = frozenset(tuples(G))
    S = frozenset(map(tuple, G.perms[ctx.sylow.sorted].tolist()))
    N = frozenset(map(tuple, G.perms[ctx.normalizer.sorted].tolist()))
    assert controls_fusion(ctx, ctx.normalizer)[0] == oracles.controls_fusion(T, S, N)
    assert controls_fusion(ctx, G.whole())[0]


def test_monotone():
    G = groups.symmetric4()
    ctx = PLocalContext(G, 2)
    bigger = join(G, ctx.normalizer, generate(G, [G.index([1, 2, 0, 3])]))
    assert bigger.order == 24
    assert controls_fusion(ctx, bigger)[0]


def test_strongly_embedded_core():
    A4 = PLocalContext(groups.alternating4(), 2)
    G0, proper = strongly_embedded_core(A4)
    assert G0.order == 12 and not proper
    A5 = groups.alternating5()
    ctx = PLocalContext(A5, 2)
    G0, proper = strongly_embedded_core(ctx)
    assert G0.order == 12 and proper
    assert is_strongly_p_embedded(A5, G0, 2)
    S3 = PLocalContext(groups.symmetric3(), 3)
    assert strongly_embedded_core(S3) == (groups.symmetric3().whole(), False) or strongly_embedded_core(S3)[0].order == 6


def test_is_strongly_embedded_examples():
    A5 = groups.alternating5()
    assert is_strongly_p_embedded(A5, A5.whole(), 2)
    stab = generate(A5, [i for i in range(A5.order) if A5.perms[i][4] == 4])
    assert stab.order == 12 and is_strongly_p_embedded(A5, stab, 2)
    A4 = groups.alternating4()
    V = sylow_p(A4, 2)
    assert not is_strongly_p_embedded(A4, V, 2)


def test_poset_components():
    c = orbit_poset_components(groups.symmetric3(), 3)
    assert (c.orbit_count, c.component_count) == (0, 0)
    c = orbit_poset_components(groups.alternating4(), 2)
    assert (c.orbit_count, c.component_count) == (1, 1)
    c = orbit_poset_components(groups.m27_inverted(), 3)
    assert c.component_count == 1
    for R in c.representatives:
        assert R.is_abelian() and R.order >= 9
    c = orbit_poset_components(groups.symmetric4(), 2)
    assert c.component_count <= c.orbit_count
