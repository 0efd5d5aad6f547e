"""Characters with values in a cyclic group of roots of unity standing in for k^x.

A value ``v`` modulo ``d`` means the root of unity exp(2 pi i v / d); the
field itself is never built."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

import numpy as np

from .abelian import abelian_invariants, basis, coordinates, normalize_invariants, p_part
from .errors import BadFieldSpec, HypothesisFailed, NoFactorization, NotNormal
from .perm import FiniteGroup, QuotientGroup, Subgroup, as_subgroup, derived_subgroup, generate, is_normal, quotient
from .subgroups import PLocalContext, omega1


@dataclass(frozen=True)
class FieldSpec:
    p: int
    q: int | None = None  # None: algebraically closed

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise BadFieldSpec(f"characteristic {self.p} is not prime")
        if self.q is not None and (self.q < self.p or p_part(self.q, self.p) != self.q):
            raise BadFieldSpec(f"field size {self.q} is not a power of {self.p}")

    @classmethod
    def parse(cls, text: str | int, p: int) -> FieldSpec:
        if isinstance(text, str) and text.strip().lower() == "closed":
            return cls(p)
        try:
            return cls(p, int(text))
        except (TypeError, ValueError):
            raise BadFieldSpec(f"field must be 'closed' or an integer, got {text!r}") from None

    @property
    def mode(self) -> str:
        return "algebraically-closed" if self.q is None else "finite"

    def describe(self) -> str | int:
        return "closed" if self.q is None else self.q

    def cap(self, d: int) -> int:
        """Largest cyclic group of units of order dividing d."""
        d = d // p_part(d, self.p)
        return d if self.q is None else gcd(d, self.q - 1)


@dataclass(frozen=True)
class HomGroupDescriptor:
    invariants: tuple[int, ...]

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariants:
            n *= d
        return n


def hom_to_units(invariants: list[int], field: FieldSpec) -> HomGroupDescriptor:
    """Hom(A, k^x) for the abelian group A with the given invariant factors."""
    for a, b in zip(invariants, invariants[1:]):
        if b % a:
            raise ValueError(f"{invariants} is not an invariant factor list")
    return HomGroupDescriptor(tuple(normalize_invariants([field.cap(d) for d in invariants if field.cap(d) > 1])))


class CyclicCharacter:
    """A homomorphism from a subgroup into Z/d; the law is checked on construction."""

    def __init__(self, domain: Subgroup, modulus: int, values: dict[int, int], check: bool = True):
        self.domain = domain
        self.modulus = modulus
        self.values = {int(g): int(v) % modulus for g, v in values.items()}
        if check:
            self._check()

    def _check(self) -> None:
        G = self.domain.group
        s = self.domain.sorted
        v = np.array([self.values[g] for g in s.tolist()])
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[s] = np.arange(len(s))
        prod = v[pos[G.table[np.ix_(s, s)]]]
        if self.values.get(0, 0) != 0 or ((v[:, None] + v[None, :]) % self.modulus != prod).any():
            raise ValueError("values do not define a homomorphism")

    def __call__(self, g: int) -> int:
        return self.values[int(g)]

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain.group, [g for g, v in self.values.items() if v == 0])

    def is_trivial(self) -> bool:
        return not any(self.values.values())

    def restrict(self, H: Subgroup) -> CyclicCharacter:
        return CyclicCharacter(H, self.modulus, {g: self.values[g] for g in H.elements}, check=False)

    def key(self) -> tuple:
        return (self.modulus, tuple(self.values[g] for g in self.domain.sorted.tolist()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclicCharacter) and self.domain == other.domain and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"<character mod {self.modulus} on subgroup of order {self.domain.order}>"

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "domain": self.domain.sorted.tolist(),
                "values": [self.values[g] for g in self.domain.sorted.tolist()]}


def characters_vanishing_on(N: FiniteGroup | Subgroup, K: Subgroup, field: FieldSpec,
                            modulus: int | None = None) -> list[CyclicCharacter]:
    """All characters N -> k^x whose kernel contains K.

    Values live in Z/d with d the exponent of the p'-part of (N/K)^ab
    (further cut down by q-1 for a finite field), unless ``modulus`` is
    given explicitly."""
    N = as_subgroup(N)
    if not K <= N or not is_normal(N, K):
        raise NotNormal("K must be a normal subgroup of N")
    G = N.group
    L = generate(G, list(K.generators) + list(derived_subgroup(N).generators))
    A = quotient(N, L)
    b = [(e, o) for e, o in basis(A.table) if o % field.p]
    if modulus is None:
        exponent = 1
        for _, o in b:
            exponent = exponent * o // gcd(exponent, o)
        modulus = field.cap(exponent)
    coords = coordinates(A.table, basis(A.table))
    full = basis(A.table)
    keep = [i for i, (_, o) in enumerate(full) if o % field.p]
    choices = []
    for i in keep:
        g = gcd(full[i][1], modulus)
        choices.append([k * (modulus // g) for k in range(g)])
    out = []
    elems = N.sorted
    cos = A.coset_of[elems]
    for vals in itertools.product(*choices):
        vec = np.zeros(len(full), dtype=np.int64)
        vec[keep] = vals
        per_coset = (coords @ vec) % modulus
        out.append(CyclicCharacter(N, modulus, dict(zip(elems.tolist(), per_coset[cos].tolist())), check=False))
    return out


def k_group(ctx: PLocalContext, field: FieldSpec) -> tuple[HomGroupDescriptor, QuotientGroup]:
    """Hom(N/J, k^x) together with the quotient N/J."""
    from .rho import abelianized_kernel

    J = abelianized_kernel(ctx)
    Q = quotient(ctx.normalizer, J)
    inv = abelian_invariants(quotient(ctx.normalizer, generate(
        ctx.group, list(J.generators) + list(derived_subgroup(ctx.normalizer).generators))))
    return hom_to_units(inv, field), Q


@dataclass
class WeakHomTable:
    values: np.ndarray  # indexed by element of G
    modulus: int

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "values": self.values.tolist()}


class _SylowIntersections:
    """Bit rows: row g marks the nonidentity elements of S ∩ gSg^-1."""

    def __init__(self, ctx: PLocalContext):
        G, S = ctx.group, ctx.sylow
        self.ctx = ctx
        s = S.sorted
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[s] = np.arange(len(s))
        ar = np.arange(G.order)
        rows = np.zeros((G.order, len(s)), dtype=bool)
        for j, x in enumerate(s.tolist()):
            # x in gSg^-1  <=>  g^-1 x g in S
            rows[:, j] = S.mask[G.table[G.table[G.inverse[ar], x], ar]]
        rows[:, 0] = False  # identity
        self.rows = rows
        self.sylow_sorted = s

    def meet(self, g: int) -> np.ndarray:
        return self.sylow_sorted[self.rows[g]]


def build_weak_hom(ctx: PLocalContext, chi: CyclicCharacter, field: FieldSpec | None = None,
                   check_alternative: bool = True) -> WeakHomTable:
    """Extend a character of N killing rho^2(S) to a weak S-homomorphism of G.

    theta(g) = 0 if S ∩ gSg^-1 = 1; otherwise Q = Omega_1(S ∩ gSg^-1),
    g = c n with c in C_G(Q), n in N, and theta(g) = psi_Q(c) + chi(n) where
    psi_Q is the unique extension of chi on N ∩ C_G(Q) to C_G(Q) killing
    S C_G(Q)'."""
    from .fusion import controls_fusion

    G, N, p = ctx.group, ctx.normalizer, ctx.p
    field = field or FieldSpec(p)
    if not ctx.omega1 <= ctx.center or not controls_fusion(ctx, N)[0]:
        raise HypothesisFailed("needs Omega_1(S) central and N_G(S) controlling fusion")
    if chi.domain != N:
        raise ValueError("character must be defined on N_G(S)")
    d = chi.modulus
    meets = _SylowIntersections(ctx)
    psi_cache: dict[Subgroup, CyclicCharacter] = {}
    values = np.zeros(G.order, dtype=np.int64)
    for g in range(G.order):
        meet = meets.meet(g)
        if len(meet) == 0:
            continue
        I = generate(G, np.concatenate(([0], meet)))
        Q = omega1(I, p)
        C = ctx.centralizer_of(Q)
        if Q not in psi_cache:
            psi_cache[Q] = _extension(ctx, chi, Q, C, field)
        psi = psi_cache[Q]
        # c^-1 g in N for c in C
        cand = G.table[G.inverse[C.sorted], g]
        hits = np.flatnonzero(N.mask[cand])
        if len(hits) == 0:
            raise NoFactorization(f"no factorisation g = c n for element {g}")
        c, n = int(C.sorted[hits[0]]), int(cand[hits[0]])
        values[g] = (psi(c) + chi(n)) % d
        if check_alternative and len(hits) > 1:
            c2, n2 = int(C.sorted[hits[-1]]), int(cand[hits[-1]])
            if (psi(c2) + chi(n2)) % d != values[g]:
                raise ArithmeticError("value depends on the chosen factorisation")
    return WeakHomTable(values, d)


def _extension(ctx: PLocalContext, chi: CyclicCharacter, Q: Subgroup, C: Subgroup,
               field: FieldSpec) -> CyclicCharacter:
    """The unique psi on C_G(Q) killing S C_G(Q)' and agreeing with chi on N ∩ C_G(Q)."""
    G = ctx.group
    K = generate(G, list(ctx.sylow.generators) + list(derived_subgroup(C).generators))
    meet = ctx.normalizer & C
    found = [psi for psi in characters_vanishing_on(C, K, field, modulus=chi.modulus)
             if all(psi(x) == chi(x) for x in meet.elements)]
    if len(found) != 1:
        raise ArithmeticError(f"expected exactly one extension, found {len(found)}")
    return found[0]


def extension_count(ctx: PLocalContext, chi: CyclicCharacter, Q: Subgroup, field: FieldSpec) -> int:
    G = ctx.group
    C = ctx.centralizer_of(Q)
    K = generate(G, list(ctx.sylow.generators) + list(derived_subgroup(C).generators))
    meet = ctx.normalizer & C
    return sum(all(psi(x) == chi(x) for x in meet.elements)
               for psi in characters_vanishing_on(C, K, field, modulus=chi.modulus))


@dataclass(frozen=True)
class WeakHomViolation:
    axiom: int
    g: int
    h: int | None = None


def verify_weak_hom(ctx: PLocalContext, theta: WeakHomTable) -> tuple[bool, WeakHomViolation | None]:
    """Exhaustive check of both axioms; the first violation in (g, h) order is reported."""
    G, S = ctx.group, ctx.sylow
    v, d = theta.values % theta.modulus, theta.modulus
    meets = _SylowIntersections(ctx)
    trivial_meet = ~meets.rows.any(axis=1)
    bad1 = np.flatnonzero((S.mask | trivial_meet) & (v != 0))
    if len(bad1):
        return False, WeakHomViolation(1, int(bad1[0]))
    rows = meets.rows.astype(np.float32)
    # shared[g, k] > 0  <=>  S ∩ gSg^-1 ∩ kSk^-1 nontrivial
    shared = (rows @ rows.T) > 0.5
    T = G.table
    ar = np.arange(G.order)
    cond = shared[ar[:, None], T]
    wrong = cond & (v[T] != (v[:, None] + v[None, :]) % d)
    if wrong.any():
        g, h = divmod(int(np.argmax(wrong)), G.order)
        return False, WeakHomViolation(2, g, h)
    return True, None


def rho2_characters(ctx: PLocalContext, field: FieldSpec) -> list[CyclicCharacter]:
    """Characters of N_G(S) with rho^2(S) in the kernel."""
    from .rho import rho_series

    rho2 = rho_series(ctx)[ctx.sylow].level(2)
    return characters_vanishing_on(ctx.normalizer, rho2, field)
