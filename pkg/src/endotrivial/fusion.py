"""Control of p-fusion, the strongly p-embedded core, and the poset of elementary abelian subgroups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SylowNotContained
from .perm import FiniteGroup, Subgroup, as_subgroup, conjugate, generate, product_mask
from .subgroups import PLocalContext, nontrivial_subgroups, sylow_p


@dataclass(frozen=True)
class FusionViolation:
    subgroup: Subgroup
    element: int
    explanation: str

    def holds(self, ctx: PLocalContext, H: Subgroup) -> bool:
        """Re-check the witness from scratch: gQg^-1 <= S and g not in H*C_G(Q)."""
        G = ctx.group
        Q, g = self.subgroup, self.element
        if not (Q <= ctx.sylow and conjugate(G, g, Q) <= ctx.sylow.elements):
            return False
        C = ctx.centralizer_of(Q)
        # g = hc  <=>  h^-1 g in C for some h in H
        return not C.mask[G.table[G.inverse[H.sorted], g]].any()


def sylow_classes(ctx: PLocalContext) -> list[Subgroup]:
    """One subgroup per S-conjugacy class of nontrivial subgroups of S (the canonically smallest)."""
    G, S = ctx.group, ctx.sylow
    seen: set[frozenset] = set()
    reps = []
    for Q in ctx.subgroups:
        if Q.elements in seen:
            continue
        reps.append(Q)
        for s in S.sorted:
            seen.add(conjugate(G, int(s), Q))
    return reps


def fusion_violation(ctx: PLocalContext, H: Subgroup, Q: Subgroup) -> FusionViolation | None:
    G, S = ctx.group, ctx.sylow
    ar = np.arange(G.order)
    into_s = np.ones(G.order, dtype=bool)
    for q in Q.generators:
        into_s &= S.mask[G.conj(ar, q)]
    allowed = product_mask(G, H, ctx.centralizer_of(Q))
    bad = np.flatnonzero(into_s & ~allowed)
    if len(bad) == 0:
        return None
    g = int(bad[0])
    return FusionViolation(
        Q, g,
        f"g conjugates Q (order {Q.order}) into S but lies outside H*C_G(Q), "
        f"|H*C_G(Q)| = {int(allowed.sum())}",
    )


def controls_fusion(ctx: PLocalContext, H: FiniteGroup | Subgroup) -> tuple[bool, FusionViolation | None]:
    H = as_subgroup(H)
    if not ctx.sylow <= H:
        raise SylowNotContained("H must contain the Sylow subgroup")
    # failure is invariant under S-conjugation of Q, so class representatives suffice
    for Q in sylow_classes(ctx):
        v = fusion_violation(ctx, H, Q)
        if v is not None:
            return False, v
    return True, None


def strongly_embedded_core(ctx: PLocalContext) -> tuple[Subgroup, bool]:
    """G_0 = <N_G(Q) : 1 < Q <= S> and whether it is proper."""
    seeds: list[int] = []
    for Q in ctx.subgroups:
        seeds.extend(ctx.normalizer_of(Q).generators)
    G0 = generate(ctx.group, seeds)
    return G0, G0.order != ctx.group.order


def is_strongly_p_embedded(G: FiniteGroup | Subgroup, H: Subgroup, p: int) -> bool:
    G_ = as_subgroup(G)
    group = G_.group
    if H.order % p:
        return False
    done = H.mask.copy()
    for g in G_.sorted:
        if done[g]:
            continue
        done[group.table[g, H.sorted]] = True
        meet = len(H.elements & conjugate(group, int(g), H))
        if meet % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PosetOrbitComponents:
    orbit_count: int
    component_count: int
    representatives: tuple[Subgroup, ...]


def _elementary_abelian_rank2(S: Subgroup, p: int) -> list[Subgroup]:
    G = S.group
    out = []
    for A in nontrivial_subgroups(S):
        if A.order < p * p or not A.is_abelian():
            continue
        if (G.element_orders[A.sorted] <= p).all():
            out.append(A)
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def orbit_poset_components(G: FiniteGroup, p: int, sylow: Subgroup | None = None) -> PosetOrbitComponents:
    if G.order % p:
        return PosetOrbitComponents(0, 0, ())
    S = sylow if sylow is not None else sylow_p(G, p)
    subs = _elementary_abelian_rank2(S, p)
    if not subs:
        return PosetOrbitComponents(0, 0, ())
    pos = {A.elements: i for i, A in enumerate(subs)}
    orbits = _UnionFind(len(subs))
    # every G-orbit meets S, so orbits = classes of "G-conjugate inside S"
    for i, A in enumerate(subs):
        for g in range(G.order):
            j = pos.get(conjugate(G, g, A))
            if j is not None:
                orbits.union(i, j)
    orbit_count = len({orbits.find(i) for i in range(len(subs))})
    comps = _UnionFind(len(subs))
    for i in range(len(subs)):
        comps.union(i, orbits.find(i))
    for i, A in enumerate(subs):
        for j, B in enumerate(subs):
            if i != j and A <= B:
                comps.union(i, j)
    roots = sorted({comps.find(i) for i in range(len(subs))})
    return PosetOrbitComponents(orbit_count, len(roots), tuple(subs[r] for r in roots))
