from __future__ import annotations

import numpy as np
import pytest

from endotrivial import groups
from endotrivial.characters import (
    CyclicCharacter,
    FieldSpec,
    WeakHomTable,
    build_weak_hom,
    characters_vanishing_on,
    extension_count,
    hom_to_units,
    k_group,
    rho2_characters,
    verify_weak_hom,
)
from endotrivial.errors import BadFieldSpec, HypothesisFailed, NotNormal
from endotrivial.perm import generate
from endotrivial.subgroups import PLocalContext, omega1


def test_field_spec():
    assert FieldSpec(3).mode == "algebraically-closed"
    assert FieldSpec(2, 4).mode == "finite"
    assert FieldSpec.parse("closed", 5).q is None
    assert FieldSpec.parse("9", 3).q == 9
    for bad in [(4, None), (3, 6), (2, 1)]:
        with pytest.raises(BadFieldSpec):
            FieldSpec(*bad)
    with pytest.raises(BadFieldSpec):
        FieldSpec.parse("big", 3)


def test_hom_to_units():
    assert hom_to_units([6], FieldSpec(3)).invariants == (2,)
    assert hom_to_units([2], FieldSpec(2, 2)).invariants == ()
    assert hom_to_units([3], FieldSpec(2, 4)).invariants == (3,)
    assert hom_to_units([2, 6], FieldSpec(3)).order == 4
    assert hom_to_units([4, 12], FieldSpec(3, 3)).invariants == (2, 2)
    with pytest.raises(ValueError):
        hom_to_units([4, 6], FieldSpec(3))


def test_hom_to_units_orders():
    for inv in ([2, 6, 12], [5], [3, 3, 9], [4, 8]):
        order = int(np.prod(inv))
        for field in (FieldSpec(3), FieldSpec(3, 9), FieldSpec(2, 8)):
            out = hom_to_units(inv, field)
            assert order % out.order == 0
            if field.q is None:
                pp = 1
                while order % (pp * field.p) == 0:
                    pp *= field.p
                assert out.order == order // pp


def test_character_law_checked():
    G = groups.symmetric3()
    with pytest.raises(ValueError):
        CyclicCharacter(G.whole(), 2, {g: 1 for g in range(6)})


def test_characters_vanishing_on():
    S3 = groups.symmetric3()
    C3 = generate(S3, [i for i in range(6) if S3.element_orders[i] == 3])
    assert len(characters_vanishing_on(S3, S3.whole(), FieldSpec(3))) == 1
    chis = characters_vanishing_on(S3, C3, FieldSpec(3))
    assert len(chis) == 2 and sum(c.is_trivial() for c in chis) == 1
    for c in chis:
        CyclicCharacter(c.domain, c.modulus, c.values)  # law holds
    A4 = groups.alternating4()
    V = generate(A4, [A4.index([1, 0, 3, 2]), A4.index([2, 3, 0, 1])])
    assert len(characters_vanishing_on(A4, V, FieldSpec(2))) == 3
    assert len(characters_vanishing_on(A4, V, FieldSpec(2, 2))) == 1
    with pytest.raises(NotNormal):
        characters_vanishing_on(S3, generate(S3, [S3.index([1, 0, 2])]), FieldSpec(3))


@pytest.mark.parametrize("name,p,inv", [("S3", 3, (2,)), ("A4", 2, (3,)), ("M27:C2", 3, (2,))])
def test_k_group(name, p, inv):
    K, NJ = k_group(PLocalContext(groups.NAMED[name](), p), FieldSpec(p))
    assert K.invariants == inv


def test_weak_hom_trivial_character():
    ctx = PLocalContext(groups.alternating4(), 2)
    triv = [c for c in rho2_characters(ctx, FieldSpec(2)) if c.is_trivial()][0]
    th = build_weak_hom(ctx, triv)
    assert not th.values.any()
    assert verify_weak_hom(ctx, th) == (True, None)


def test_weak_hom_s3_agrees_with_character():
    ctx = PLocalContext(groups.symmetric3(), 3)
    for chi in rho2_characters(ctx, FieldSpec(3)):
        th = build_weak_hom(ctx, chi)
        assert all(th.values[g] == chi(g) for g in range(6))


@pytest.mark.parametrize("name,p", [("A4", 2), ("A5", 2), ("SL(2,3)", 3), ("C3xC3:inv", 3)])
def test_weak_hom_extends_and_verifies(name, p):
    ctx = PLocalContext(groups.NAMED[name](), p)
    field = FieldSpec(p)
    chis = rho2_characters(ctx, field)
    tables = []
    for chi in chis:
        th = build_weak_hom(ctx, chi, field)
        assert verify_weak_hom(ctx, th)[0]
        assert all(th.values[n] == chi(n) for n in ctx.normalizer.elements)
        tables.append(th.values.tobytes())
    assert len(set(tables)) == len(chis)


def test_extension_unique():
    ctx = PLocalContext(groups.alternating5(), 2)
    for chi in rho2_characters(ctx, FieldSpec(2)):
        for Q in ctx.omega1_subgroups:
            assert extension_count(ctx, chi, omega1(Q, 2), FieldSpec(2)) == 1


def test_weak_hom_negative_control():
    ctx = PLocalContext(groups.alternating4(), 2)
    G = ctx.group
    values = np.where(ctx.sylow.mask, 0, 1)
    ok, witness = verify_weak_hom(ctx, WeakHomTable(values, 3))
    assert not ok and witness.axiom == 2 and witness.h is not None
    # the witness really breaks the rule
    gh = G.table[witness.g, witness.h]
    assert (values[witness.g] + values[witness.h]) % 3 != values[gh]


def test_weak_hom_axiom1_violation():
    ctx = PLocalContext(groups.alternating4(), 2)
    values = np.zeros(12, dtype=np.int64)
    values[ctx.sylow.sorted[1]] = 1
    ok, witness = verify_weak_hom(ctx, WeakHomTable(values, 3))
    assert not ok and witness.axiom == 1


def test_hypothesis_guard():
    ctx = PLocalContext(groups.m27_inverted(), 3)
    chi = characters_vanishing_on(ctx.normalizer, ctx.normalizer, FieldSpec(3))[0]
    with pytest.raises(HypothesisFailed):
        build_weak_hom(ctx, chi)
