"""The rho-series of p-local subgroups and the chain-closure subgroup whose
quotient of N_G(S) is the fundamental group of the orbit category on
nontrivial p-subgroups.  Also the closed forms that apply when Omega_1(S) is
central, or when S is split metacyclic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import abelian_invariants
from .errors import (
    CapExceeded,
    NotSplitMetacyclic,
    StronglyEmbeddedProper,
    TrivialSubgroupError,
)
from .fusion import controls_fusion, strongly_embedded_core
from .perm import (
    Subgroup,
    conjugate,
    derived_subgroup,
    generate,
    is_normal,
    product_set,
    quotient,
)
from .subgroups import PLocalContext, o_pprime_residual, sylow_p


# rho-series


def rho1(ctx: PLocalContext, P: Subgroup) -> Subgroup:
    """S_P N_G(P)' with S_P a Sylow p-subgroup of N_G(P)."""
    if P.is_trivial():
        raise TrivialSubgroupError("rho^1 is defined for nontrivial P only")
    N = ctx.normalizer_of(P)
    S_P = sylow_p(N, ctx.p)
    return generate(ctx.group, list(S_P.generators) + list(derived_subgroup(N).generators))


@dataclass(frozen=True)
class RhoSeries:
    base: Subgroup
    levels: tuple[Subgroup, ...]
    stabilized_at: int

    @property
    def limit(self) -> Subgroup:
        return self.levels[-1]

    def level(self, i: int) -> Subgroup:
        """rho^i(base), 1-based; constant past stabilisation."""
        return self.levels[min(i, len(self.levels)) - 1]


def rho_series(ctx: PLocalContext, restrict_to_omega1: bool = False,
               max_passes: int = 1000) -> dict[Subgroup, RhoSeries]:
    """Simultaneous iteration of rho^{i+1}(P) = <N_G(P) & rho^i(Q) : Q>.

    Q ranges over all nontrivial subgroups of S, or only those of
    Omega_1(S) when ``restrict_to_omega1`` is set (then the series is
    produced for those Q and for S itself)."""
    G = ctx.group
    sources = ctx.omega1_subgroups if restrict_to_omega1 else ctx.subgroups
    targets = list(sources)
    if ctx.sylow not in targets:
        targets.append(ctx.sylow)
    levels = {P: [rho1(ctx, P)] for P in targets}
    for _ in range(max_passes):
        current = {P: levels[P][-1] for P in targets}
        changed = False
        for P in targets:
            NP = ctx.normalizer_of(P)
            seeds = []
            for Q in sources:
                seeds.extend(sorted(NP.elements & current[Q].elements))
            nxt = generate(G, seeds)
            if nxt != current[P]:
                changed = True
            levels[P].append(nxt)
        if not changed:
            break
    else:
        raise CapExceeded("rho-series did not stabilise within the pass budget")
    stable = len(next(iter(levels.values()))) - 1
    return {P: RhoSeries(P, tuple(levels[P][:stable]), stable) for P in targets}


def rho_infinity(ctx: PLocalContext, restrict_to_omega1: bool = False) -> RhoSeries:
    return rho_series(ctx, restrict_to_omega1)[ctx.sylow]


# chain closure


@dataclass(frozen=True)
class ChainWitness:
    """Q_0 <= Q_1, g_i in O^{p'}(N_G(Q_i)) and Q_0^{g_1...g_i} <= Q_{i+1}."""

    start: Subgroup
    subgroups: tuple[Subgroup, ...]
    elements: tuple[int, ...]
    product: int

    def verify(self, ctx: PLocalContext) -> bool:
        G = ctx.group
        if len(self.subgroups) != len(self.elements):
            return False
        w = 0
        for Qi, gi in zip(self.subgroups, self.elements):
            moved = conjugate(G, int(G.inverse[w]), self.start)  # Q_0^w = w^-1 Q_0 w
            if not moved <= Qi.elements or not Qi <= ctx.sylow or Qi.is_trivial():
                return False
            if gi not in ctx.residual_of_normalizer(Qi):
                return False
            w = G.mul(w, gi)
        return w == self.product

    def to_dict(self) -> dict:
        return {
            "start": self.start.sorted.tolist(),
            "subgroups": [Q.sorted.tolist() for Q in self.subgroups],
            "elements": list(self.elements),
            "product": self.product,
        }


@dataclass
class PiOneResult:
    subgroup: Subgroup
    normalizer: Subgroup
    quotient_order: int
    abelianization: list[int]
    witnesses: list[ChainWitness] = field(default_factory=list)
    normal: bool = True
    reach: dict[Subgroup, frozenset[int]] = field(default_factory=dict, repr=False)


def chain_closure(ctx: PLocalContext, max_passes: int | None = None) -> PiOneResult:
    """R = subgroup of N_G(S) generated by all admissible chain products.

    For each nontrivial Q_0 <= S the set M(Q_0) of admissible products is
    grown from the identity: w in M(Q_0) extends to w*g for every
    g in O^{p'}(N_G(Q')) with Q_0^w <= Q' <= S.  The sets only grow, so the
    search stops when a pass adds nothing."""
    G, N = ctx.group, ctx.normalizer
    subs = ctx.subgroups
    sid = {Q.elements: i for i, Q in enumerate(subs)}
    residual = [ctx.residual_of_normalizer(Q) for Q in subs]
    supers = [[j for j, Qp in enumerate(subs) if Q <= Qp] for Q in subs]
    steps = [np.unique(np.concatenate([residual[j].sorted for j in supers[i]])) for i in range(len(subs))]
    budget = max_passes if max_passes is not None else G.order + 1
    t, inv = G.table, G.inverse

    reach_sets: dict[Subgroup, frozenset[int]] = {}
    first_owner: dict[int, tuple[int, np.ndarray, np.ndarray]] = {}
    for i0, Q0 in enumerate(subs):
        reach = np.zeros(G.order, dtype=bool)
        reach[0] = True
        parent_w = np.full(G.order, -1, dtype=np.int64)
        parent_g = np.full(G.order, -1, dtype=np.int64)
        frontier = [0]
        passes = 0
        while frontier:
            passes += 1
            if passes > budget:
                raise CapExceeded("chain closure exceeded its iteration budget")
            by_state: dict[int, list[int]] = {}
            for w in frontier:
                moved = frozenset(t[t[inv[w], Q0.sorted], w].tolist())
                by_state.setdefault(sid[moved], []).append(w)
            nxt = []
            for x_id, ws in sorted(by_state.items()):
                ws_arr = np.array(ws)
                U = steps[x_id]
                prods = t[ws_arr[:, None], U[None, :]].ravel()
                fresh = ~reach[prods]
                if not fresh.any():
                    continue
                vals, first = np.unique(prods[fresh], return_index=True)
                rows, cols = np.divmod(np.flatnonzero(fresh)[first], len(U))
                reach[vals] = True
                parent_w[vals] = ws_arr[rows]
                parent_g[vals] = U[cols]
                nxt.extend(vals.tolist())
            frontier = sorted(nxt)
        members = np.flatnonzero(reach & N.mask)
        reach_sets[Q0] = frozenset(np.flatnonzero(reach).tolist())
        for g in members.tolist():
            first_owner.setdefault(g, (i0, parent_w, parent_g))

    R = generate(G, sorted(first_owner))
    witnesses = []
    for g in R.generators:
        i0, pw, pg = first_owner[g]
        witnesses.append(_rebuild_witness(ctx, subs, residual, supers, i0, pw, pg, g))
    normal = is_normal(N, R)
    return PiOneResult(
        subgroup=R,
        normalizer=N,
        quotient_order=N.order // R.order,
        abelianization=_abelianization_of_quotient(N, R) if normal else [],
        witnesses=witnesses,
        normal=normal,
        reach=reach_sets,
    )


def _abelianization_of_quotient(N: Subgroup, K: Subgroup) -> list[int]:
    """Invariants of (N/K)^ab = N / N'K."""
    G = N.group
    L = generate(G, list(K.generators) + list(derived_subgroup(N).generators))
    return abelian_invariants(quotient(N, L))


def _rebuild_witness(ctx, subs, residual, supers, i0, pw, pg, g) -> ChainWitness:
    G = ctx.group
    path = []
    cur = g
    while cur != 0:
        path.append(int(pg[cur]))
        cur = int(pw[cur])
    path.reverse()
    Q0 = subs[i0]
    chosen = []
    w = 0
    for gi in path:
        moved = conjugate(G, int(G.inverse[w]), Q0)
        j = next(j for j in supers[_index_of(subs, moved)] if gi in residual[j])
        chosen.append(subs[j])
        w = G.mul(w, gi)
    return ChainWitness(Q0, tuple(chosen), tuple(path), g)


def _index_of(subs: list[Subgroup], elements: frozenset[int]) -> int:
    for i, Q in enumerate(subs):
        if Q.elements == elements:
            return i
    raise KeyError("subgroup not found")


# closed forms


@dataclass(frozen=True)
class ClosedFormResult:
    subgroup: Subgroup
    omega1_central: bool
    normalizer_controls_fusion: bool

    @property
    def applicable(self) -> bool:
        return self.omega1_central and self.normalizer_controls_fusion


def closed_form_central(ctx: PLocalContext) -> ClosedFormResult:
    """<N ∩ O^{p'}(N_G(Q)) : 1 < Q <= Omega_1(S)> plus the two hypothesis flags."""
    N = ctx.normalizer
    seeds = []
    for Q in ctx.omega1_subgroups:
        seeds.extend(sorted(N.elements & ctx.residual_of_normalizer(Q).elements))
    sub = generate(ctx.group, seeds)
    central = ctx.omega1 <= ctx.center
    controls, _ = controls_fusion(ctx, N)
    return ClosedFormResult(sub, central, controls)


def abelianized_kernel(ctx: PLocalContext) -> Subgroup:
    """J = <N ∩ S N_G(Q)' : 1 < Q <= Omega_1(S)>; N/J is the abelianised fundamental group
    when the central closed form applies."""
    G, S, N = ctx.group, ctx.sylow, ctx.normalizer
    seeds = []
    for Q in ctx.omega1_subgroups:
        D = derived_subgroup(ctx.normalizer_of(Q))
        seeds.extend(sorted(N.elements & product_set(G, S, D)))
    return generate(G, seeds)


@dataclass(frozen=True)
class SplitMetacyclicResult:
    subgroup: Subgroup
    case: str  # "central" or "noncentral"
    choice_independent: bool = True


def split_metacyclic_kernel(ctx: PLocalContext, recognition=None) -> SplitMetacyclicResult:
    """Closed form for R when S is split metacyclic, p odd and G has no proper
    strongly p-embedded subgroup.

    Central Omega_1: <N ∩ O^{p'}(N_G(P)) : 1 < P <= E>.  Otherwise R is
    generated by N ∩ O^{p'}(N_G(Z)) and N ∩ (O^{p'}(N_G(E)) ∩ C_G(Q)) O^{p'}(C_G(Q)) S
    for a noncentral Q of order p in E."""
    from .metacyclic import recognize

    G, S, N, p = ctx.group, ctx.sylow, ctx.normalizer, ctx.p
    if recognition is None:
        recognition = recognize(S, p)
    if p == 2 or recognition is None or recognition.kind == "cyclic" or not recognition.split:
        raise NotSplitMetacyclic("Sylow subgroup is not split metacyclic for an odd prime")
    _, proper = strongly_embedded_core(ctx)
    if proper:
        raise StronglyEmbeddedProper("G has a proper strongly p-embedded subgroup")
    E, Zs = ctx.omega1, ctx.center
    if E <= Zs:
        seeds = []
        for P in ctx.omega1_subgroups:
            seeds.extend(sorted(N.elements & ctx.residual_of_normalizer(P).elements))
        return SplitMetacyclicResult(generate(G, seeds), "central")
    Z = E & Zs
    base = sorted(N.elements & ctx.residual_of_normalizer(Z).elements)
    noncentral = [Q for Q in ctx.omega1_subgroups if Q.order == p and not Q <= Zs]
    results = [generate(G, base + _hht_elements(ctx, E, Q)) for Q in noncentral]
    return SplitMetacyclicResult(results[0], "noncentral", all(r == results[0] for r in results))


def _hht_elements(ctx: PLocalContext, E: Subgroup, Q: Subgroup) -> list[int]:
    G, S, N, p = ctx.group, ctx.sylow, ctx.normalizer, ctx.p
    C = ctx.centralizer_of(Q)
    h_part = ctx.residual_of_normalizer(E) & C
    h_prime = o_pprime_residual(C, p)
    first = product_set(G, h_part, h_prime)
    full = product_set(G, first, S)
    return sorted(N.elements & full)


def j_equals_derived_times_r(ctx: PLocalContext, J: Subgroup, R: Subgroup) -> bool:
    """J == N' R as element sets."""
    D = derived_subgroup(ctx.normalizer)
    return product_set(ctx.group, D, R) == J.elements


def pprime_part(invariants: list[int], p: int) -> list[int]:
    from .abelian import normalize_invariants

    out = []
    for d in invariants:
        while d % p == 0:
            d //= p
        out.append(d)
    return normalize_invariants([d for d in out if d > 1])
