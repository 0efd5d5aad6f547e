"""Sylow, characteristic and p-local subgroups."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .abelian import p_part
from .errors import CapExceeded, NotPGroup, PrimeNotDividing
from .perm import (
    FiniteGroup,
    Subgroup,
    as_subgroup,
    centralizer,
    derived_subgroup,
    generate,
    normal_closure,
    normalizer,
)

SUBGROUP_CAP = 3**6


def is_p_group(H: FiniteGroup | Subgroup, p: int) -> bool:
    return p_part(as_subgroup(H).order, p) == as_subgroup(H).order


def p_elements(H: FiniteGroup | Subgroup, p: int) -> np.ndarray:
    H = as_subgroup(H)
    orders = H.group.element_orders[H.sorted]
    return H.sorted[[p_part(int(o), p) == o for o in orders]]


def sylow_p(G: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown greedily from the first p-element."""
    H = as_subgroup(G)
    target = p_part(H.order, p)
    if target == 1:
        raise PrimeNotDividing(f"{p} does not divide {H.order}")
    group = H.group
    pel = p_elements(H, p)
    P = generate(group, pel[1:2])
    while P.order < target:
        N = normalizer(H, P)
        ext = next(int(x) for x in pel if N.mask[x] and not P.mask[x])
        P = generate(group, list(P.generators) + [ext])
    return P


def _require_p_group(P: Subgroup, p: int) -> None:
    if p_part(P.order, p) != P.order:
        raise NotPGroup(f"subgroup of order {P.order} is not a {p}-group")


def omega1(P: FiniteGroup | Subgroup, p: int) -> Subgroup:
    P = as_subgroup(P)
    _require_p_group(P, p)
    orders = P.group.element_orders[P.sorted]
    return generate(P.group, P.sorted[orders <= p])


def center(P: FiniteGroup | Subgroup) -> Subgroup:
    P = as_subgroup(P)
    return centralizer(P, P)


def frattini_subgroup(P: FiniteGroup | Subgroup, p: int) -> Subgroup:
    P = as_subgroup(P)
    G = P.group
    powers = [G.power(g, p) for g in P.sorted]
    return generate(G, list(derived_subgroup(P).generators) + powers)


def o_pprime_residual(H: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """O^{p'}(H): generated by the p-elements of H."""
    H = as_subgroup(H)
    return generate(H.group, p_elements(H, p))


def conjugacy_classes(H: FiniteGroup | Subgroup) -> list[np.ndarray]:
    H = as_subgroup(H)
    G = H.group
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for x in H.sorted:
        if seen[x]:
            continue
        cls = np.unique(G.conj(H.sorted, x))
        seen[cls] = True
        out.append(cls)
    return out


def o_pprime_core(H: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """O_{p'}(H): the elements whose normal closure in H has order prime to p."""
    H = as_subgroup(H)
    seeds = []
    for cls in conjugacy_classes(H):
        x = int(cls[0])
        if x == 0 or H.group.element_orders[x] % p == 0:
            continue
        if normal_closure(H, [x]).order % p:
            seeds.append(x)
    return generate(H.group, seeds)


def is_p_nilpotent(G: FiniteGroup | Subgroup, p: int) -> bool:
    H = as_subgroup(G)
    return o_pprime_core(H, p).order * p_part(H.order, p) == H.order


@dataclass(frozen=True)
class PGroupClass:
    kind: str  # cyclic | generalized-quaternion | semidihedral | other
    witness: dict = field(default_factory=dict)


def classify_p_group(P: FiniteGroup | Subgroup, p: int) -> PGroupClass:
    P = as_subgroup(P)
    _require_p_group(P, p)
    G = P.group
    n = P.order
    orders = G.element_orders[P.sorted]
    if int(orders.max()) == n:
        return PGroupClass("cyclic", {"generator": int(P.sorted[int(np.argmax(orders))])})
    if p != 2 or P.is_abelian():
        return PGroupClass("other")
    involutions = P.sorted[orders == 2]
    if len(involutions) == 1:
        return PGroupClass("generalized-quaternion", {"unique_involution": int(involutions[0])})
    if n >= 16 and int(orders.max()) == n // 2 and len(involutions) == n // 4 + 1:
        # confirm b a b^-1 = a^(n/4 - 1) for some a of order n/2, involution b outside <a>
        for a in P.sorted[orders == n // 2]:
            a = int(a)
            cyc = generate(G, [a])
            target = G.power(a, n // 4 - 1)
            for b in involutions:
                b = int(b)
                if not cyc.mask[b] and G.conj(b, a) == target:
                    return PGroupClass("semidihedral", {"rotation": a, "reflection": b})
    return PGroupClass("other")


def nontrivial_subgroups(P: FiniteGroup | Subgroup, cap: int = SUBGROUP_CAP,
                         within: Subgroup | None = None) -> list[Subgroup]:
    """All nontrivial subgroups of P in canonical order (optionally only those inside ``within``)."""
    P = as_subgroup(P)
    if P.order > cap:
        raise CapExceeded(f"subgroup enumeration capped at order {cap}, got {P.order}")
    G = P.group
    found: dict[frozenset, Subgroup] = {}
    prime = None
    if P.order > 1 and len(_primes(P.order)) == 1:
        prime = _primes(P.order)[0]
    if prime is not None:
        layer = {}
        for x in P.sorted[G.element_orders[P.sorted] == prime]:
            C = generate(G, [int(x)])
            layer.setdefault(C.elements, C)
        while layer:
            found.update(layer)
            nxt = {}
            for H in layer.values():
                N = normalizer(P, H)
                covered = H.mask.copy()
                for x in N.sorted:
                    if covered[x] or not H.mask[G.power(int(x), prime)]:
                        continue
                    K = generate(G, list(H.generators) + [int(x)])
                    covered |= K.mask
                    nxt.setdefault(K.elements, K)
            layer = nxt
    else:
        cyclic = {}
        for x in P.sorted[1:]:
            C = generate(G, [int(x)])
            cyclic.setdefault(C.elements, C)
        found.update(cyclic)
        frontier = list(cyclic.values())
        while frontier:
            nxt = []
            for H in frontier:
                for C in cyclic.values():
                    if C <= H:
                        continue
                    K = generate(G, list(H.generators) + list(C.generators))
                    if K.elements not in found:
                        found[K.elements] = K
                        nxt.append(K)
            frontier = nxt
    subs = found.values()
    if within is not None:
        subs = [H for H in subs if H <= within]
    return sorted(subs, key=lambda H: H.sort_key)


def _primes(n: int) -> list[int]:
    from .abelian import prime_factors

    return prime_factors(n)


class PLocalContext:
    """A group with a chosen Sylow p-subgroup and its normalizer, plus cached local data."""

    def __init__(self, group: FiniteGroup, p: int, sylow: Subgroup | None = None,
                 subgroup_cap: int = SUBGROUP_CAP):
        if group.order % p:
            raise PrimeNotDividing(f"{p} does not divide |G| = {group.order}")
        self.group = group
        self.p = p
        self.sylow = sylow if sylow is not None else sylow_p(group, p)
        if self.sylow.order != p_part(group.order, p):
            raise ValueError("supplied subgroup is not a Sylow subgroup")
        self.normalizer = normalizer(group, self.sylow)
        self.subgroup_cap = subgroup_cap
        self._normalizers: dict[Subgroup, Subgroup] = {}
        self._centralizers: dict[Subgroup, Subgroup] = {}
        self._residuals: dict[Subgroup, Subgroup] = {}

    def __repr__(self) -> str:
        return f"<p-local context p={self.p} |S|={self.sylow.order} in {self.group!r}>"

    @cached_property
    def subgroups(self) -> list[Subgroup]:
        """Nontrivial subgroups of the Sylow subgroup, canonical order."""
        return nontrivial_subgroups(self.sylow, cap=self.subgroup_cap)

    @cached_property
    def omega1(self) -> Subgroup:
        return omega1(self.sylow, self.p)

    @cached_property
    def center(self) -> Subgroup:
        return center(self.sylow)

    @cached_property
    def omega1_subgroups(self) -> list[Subgroup]:
        return [Q for Q in self.subgroups if Q <= self.omega1]

    @cached_property
    def sylow_class(self) -> PGroupClass:
        return classify_p_group(self.sylow, self.p)

    def normalizer_of(self, Q: Subgroup) -> Subgroup:
        if Q not in self._normalizers:
            self._normalizers[Q] = normalizer(self.group, Q)
        return self._normalizers[Q]

    def centralizer_of(self, Q: Subgroup) -> Subgroup:
        if Q not in self._centralizers:
            self._centralizers[Q] = centralizer(self.group, Q)
        return self._centralizers[Q]

    def residual_of_normalizer(self, Q: Subgroup) -> Subgroup:
        """O^{p'}(N_G(Q))."""
        if Q not in self._residuals:
            self._residuals[Q] = o_pprime_residual(self.normalizer_of(Q), self.p)
        return self._residuals[Q]
