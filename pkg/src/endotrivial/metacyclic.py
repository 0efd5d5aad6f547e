"""Metacyclic p-groups for odd p: normal-form arithmetic, recognition, automorphisms.

Presentation: x^(p^m) = 1, y^(p^n) = x^(p^q), y x y^-1 = x^(1+p^l).
Elements are x^i y^j stored as the integer i * p^n + j."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .abelian import p_part, prime_factors
from .errors import BadParameters, CapExceeded, FormulaMismatch, HypothesisFailed, NotSplit
from .perm import FiniteGroup, Permutation, Subgroup, centralizer, conjugate_subgroup, generate, is_normal, join, normalizer
from .subgroups import PLocalContext, is_p_group

AUTOMORPHISM_CAP = 3**5


def _is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == [p]


@dataclass(frozen=True)
class MetacyclicPresentation:
    p: int
    m: int
    n: int
    l: int
    q: int | None = None  # None means split (q = m)
    strict: bool = True  # also demand the normal form l < q < n for nonsplit tuples

    def __post_init__(self):
        if self.q is None:
            object.__setattr__(self, "q", self.m)
        for problem in self.problems():
            raise BadParameters(problem)

    def problems(self) -> list[str]:
        p, m, n, l, q = self.p, self.m, self.n, self.l, self.q
        out = []
        if not _is_prime(p) or p == 2:
            out.append(f"p = {p} must be an odd prime")
            return out
        if min(m, n, l, q) < 1:
            out.append("exponents m, n, l, q must be positive")
            return out
        if not (l <= m and q <= m and m <= l + n):
            out.append(f"need l, q <= m <= l + n, got m={m}, n={n}, l={l}, q={q}")
        if pow(1 + p**l, p**n, p**m) != 1 % p**m:
            out.append(f"(1+p^l)^(p^n) = {pow(1 + p**l, p**n, p**m)} mod p^m, expected 1")
        if q + l < m:
            out.append(f"p^(q+l) is not 0 mod p^m (q + l = {q + l} < m = {m})")
        if self.strict and q < m and not (l < q < n):
            out.append(f"nonsplit parameters need l < q < n, got l={l}, q={q}, n={n}")
        return out

    @property
    def split(self) -> bool:
        return self.q == self.m

    @property
    def abelian(self) -> bool:
        return self.l == self.m

    @property
    def order(self) -> int:
        return self.p ** (self.m + self.n)

    @property
    def multiplier(self) -> int:
        return 1 + self.p**self.l

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.m, self.n, self.l, self.q)

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "l": self.l, "q": self.q, "split": self.split}


def presentation_grid(primes=(3, 5), max_total: int = 6) -> list[MetacyclicPresentation]:
    """All valid (p, m, n, l, q) with m + n <= max_total, in lexicographic order."""
    out = []
    for p in primes:
        for m in range(1, max_total):
            for n in range(1, max_total - m + 1):
                for l in range(1, m + 1):
                    for q in range(1, m + 1):
                        try:
                            out.append(MetacyclicPresentation(p, m, n, l, q))
                        except BadParameters:
                            pass
    return out


class MetacyclicGroup:
    """Vectorised normal-form arithmetic; works for any order, no multiplication table."""

    def __init__(self, pres: MetacyclicPresentation):
        self.pres = pres
        p = pres.p
        self.p = p
        self.pm, self.pn = p**pres.m, p**pres.n
        self.order = self.pm * self.pn
        self.carry = p**pres.q % self.pm
        self.rpow = np.array([pow(pres.multiplier, j, self.pm) for j in range(self.pn)], dtype=np.int64)
        self.x = self.element(1, 0)
        self.y = self.element(0, 1)

    def __repr__(self) -> str:
        return f"<metacyclic group {self.pres.as_tuple()} of order {self.order}>"

    def element(self, i: int, j: int) -> int:
        if 0 <= j < self.pn:
            return (i % self.pm) * self.pn + j
        return int(self.mul(self.power(self.pn, i % self.pm), self.power(1, j)))

    def split_index(self, g):
        return np.divmod(np.asarray(g, dtype=np.int64), self.pn)

    def mul(self, a, b):
        i1, j1 = self.split_index(a)
        i2, j2 = self.split_index(b)
        i = i1 + i2 * self.rpow[j1]
        j = j1 + j2
        over = j >= self.pn
        i = i + over * self.carry
        j = j - over * self.pn
        return (i % self.pm) * self.pn + j

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.zeros_like(a)
        base = a.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    @cached_property
    def inverse(self) -> np.ndarray:
        return self.power(np.arange(self.order), self.order - 1)

    def conj(self, g, h):
        """g h g^-1"""
        return self.mul(self.mul(g, h), self.inverse[np.asarray(g)])

    @cached_property
    def element_orders(self) -> np.ndarray:
        ar = np.arange(self.order)
        orders = np.ones(self.order, dtype=np.int64)
        k = 1
        while k < self.order:
            hit = (orders == k) & (self.power(ar, k) != 0)
            if not hit.any():
                break
            orders[hit] = k * self.p
            k *= self.p
        return orders

    def span(self, gens) -> frozenset[int]:
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while len(frontier):
            nxt = self.mul(frontier[:, None], gens[None, :]).ravel()
            nxt = np.unique(nxt[~seen[nxt]])
            seen[nxt] = True
            frontier = nxt
        return frozenset(np.flatnonzero(seen).tolist())

    def commuting_with(self, gens) -> frozenset[int]:
        ar = np.arange(self.order)
        ok = np.ones(self.order, dtype=bool)
        for g in gens:
            ok &= self.mul(ar, g) == self.mul(g, ar)
        return frozenset(np.flatnonzero(ok).tolist())

    def verify(self) -> None:
        """Relations and (on a sample for large groups) associativity."""
        pres = self.pres
        x, y = self.x, self.y
        if int(self.power(x, self.pm)) != 0 or int(self.element_orders[x]) != self.pm:
            raise ArithmeticError("x does not have order p^m")
        if int(self.power(y, self.pn)) != int(self.power(x, self.p**pres.q)):
            raise ArithmeticError("y^(p^n) != x^(p^q)")
        if int(self.conj(y, x)) != int(self.power(x, pres.multiplier)):
            raise ArithmeticError("y x y^-1 != x^(1+p^l)")
        rng = np.random.default_rng(0)
        a, b, c = (rng.integers(0, self.order, 2000) for _ in range(3))
        if (self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))).any():
            raise ArithmeticError("multiplication is not associative")

    def regular_permutation(self, g: int) -> Permutation:
        """Left multiplication by g; its image of point 0 is g itself."""
        return Permutation(self.mul(g, np.arange(self.order)).tolist())

    def automorphism_permutation(self, images: np.ndarray) -> Permutation:
        return Permutation(np.asarray(images).tolist())

    def permutation_group(self, name: str | None = None) -> tuple[FiniteGroup, int, int]:
        G = FiniteGroup(self.order, [self.regular_permutation(self.x), self.regular_permutation(self.y)],
                        name=name or f"metacyclic{self.pres.as_tuple()}", cap=max(self.order, 20000))
        return G, G.generator_indices[0], G.generator_indices[1]

    def power_table(self, g: int, count: int) -> np.ndarray:
        out = np.zeros(count, dtype=np.int64)
        for k in range(1, count):
            out[k] = self.mul(out[k - 1], g)
        return out

    def endomorphism_images(self, X: int, Y: int) -> np.ndarray:
        """images[x^i y^j] = X^i Y^j."""
        I, J = np.divmod(np.arange(self.order), self.pn)
        return self.mul(self.power_table(X, self.pm)[I], self.power_table(Y, self.pn)[J])


def construct(pres: MetacyclicPresentation) -> MetacyclicGroup:
    M = MetacyclicGroup(pres)
    M.verify()
    return M


def power_rule(a: int, c: int, alpha: int, pres: MetacyclicPresentation) -> tuple[int, int]:
    """(x^a y^c)^alpha = x^A y^C for split presentations."""
    if not pres.split:
        raise NotSplit("the power rule is stated for split presentations")
    p, r = pres.p, pres.multiplier
    pm, pn = p**pres.m, p**pres.n
    total = sum(pow(r, i * c, pm) for i in range(alpha)) % pm
    return a * total % pm, alpha * c % pn


@dataclass(frozen=True)
class StructuralData:
    presentation: MetacyclicPresentation
    center_scan: frozenset
    center_formula: frozenset
    omega_scan: frozenset
    omega_formula: frozenset
    cse_scan: frozenset  # C_S(E)
    cse_formula: frozenset
    e_central: bool
    center_cyclic: bool

    @property
    def mismatches(self) -> list[str]:
        out = []
        for name in ("center", "omega", "cse"):
            if getattr(self, f"{name}_scan") != getattr(self, f"{name}_formula"):
                out.append(name)
        return out

    @property
    def criterion(self) -> bool:
        pr = self.presentation
        return pr.m == pr.n + pr.l

    @property
    def equivalence_holds(self) -> bool:
        return (not self.e_central) == self.center_cyclic == self.criterion


def structural_data(M: MetacyclicGroup, strict: bool = True) -> StructuralData:
    pres = M.pres
    p, m, n, l, q = pres.as_tuple()
    x, y = M.x, M.y

    center_scan = M.commuting_with([x, y])
    omega_scan = M.span(np.flatnonzero(M.element_orders <= p))
    cse_scan = M.commuting_with(sorted(omega_scan))

    k = p ** (m - l)
    center_formula = M.span([M.power(x, k), M.power(y, k)])
    second = M.mul(M.power(M.inverse[x], p ** (q - 1)), M.power(y, p ** (n - 1)))
    omega_formula = M.span([M.power(x, p ** (m - 1)), second])
    if m == n + l:
        cse_formula = M.span([M.power(x, p), y])
    else:
        cse_formula = frozenset(range(M.order))

    zs = np.array(sorted(center_scan))
    data = StructuralData(
        pres, center_scan, center_formula, omega_scan, omega_formula, cse_scan, cse_formula,
        e_central=omega_scan <= center_scan,
        center_cyclic=int(M.element_orders[zs].max()) == len(zs),
    )
    if strict and data.mismatches:
        raise FormulaMismatch(f"{pres.as_tuple()}: closed form disagrees with scan for {data.mismatches}")
    return data


@dataclass(frozen=True)
class Recognition:
    kind: str  # cyclic | split | nonsplit
    presentation: MetacyclicPresentation | None
    x: int | None
    y: int | None

    @property
    def split(self) -> bool:
        return self.kind == "split"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "presentation": self.presentation.to_dict() if self.presentation else None}


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def recognize(S: Subgroup, p: int) -> Recognition | None:
    """Find x, y realising a standard presentation, preferring split ones and then small m."""
    G = S.group
    if not is_p_group(S, p):
        return None
    orders = G.element_orders[S.sorted]
    if int(orders.max()) == S.order:
        return Recognition("cyclic", None, int(S.sorted[int(np.argmax(orders))]), None)
    if p == 2:
        return None
    best = None
    seen: set[frozenset] = set()
    for x in S.sorted[np.argsort(orders, kind="stable")].tolist():
        X = generate(G, [x])
        if X.elements in seen or X.is_trivial():
            continue
        seen.add(X.elements)
        if not is_normal(S, X):
            continue
        m = _log(X.order, p)
        pn = S.order // X.order
        n = _log(pn, p)
        if best is not None and best[:2] <= (0, m):
            continue
        xpow = {}
        e = 0
        for k in range(X.order):
            xpow[e] = k
            e = int(G.table[e, x])
        for y in S.sorted.tolist():
            # y must generate S/<x>
            if X.mask[G.power(y, pn // p)]:
                continue
            cand = _normalise(G, p, x, y, m, n, xpow)
            if cand is None:
                continue
            pres, xx, yy = cand
            key = (0 if pres.split else 1, m, xx, yy)
            if best is None or key < best[:4]:
                best = key + (pres,)
            if pres.split:
                break
    if best is None:
        return None
    pres, xx, yy = best[4], best[2], best[3]
    return Recognition("split" if pres.split else "nonsplit", pres, xx, yy)


def _normalise(G: FiniteGroup, p: int, x: int, y: int, m: int, n: int, xpow: dict):
    pm, pn = p**m, p**n
    s = xpow[G.conj(y, x)]
    if s % p != 1 % p:
        return None
    l = m if s % pm == 1 % pm else _log(p_part((s - 1) % pm, p), p)
    target = (1 + p**l) % pm
    # replace y by y^k so that conjugation is exactly x -> x^(1+p^l)
    k = next((k for k in range(1, pn) if k % p and pow(s, k, pm) == target), None)
    if k is None:
        if pn == 1 or s % pm != target:
            return None
        k = 1
    y2 = G.power(y, k)
    t = xpow[G.power(y2, pn)]
    if t == 0:
        q, x2 = m, x
    else:
        q = _log(p_part(t, p), p)
        v = t // p**q
        x2 = G.power(x, v % pm)  # then x2^(p^q) = x^t
        if gcd(v, p) != 1:
            return None
    try:
        pres = MetacyclicPresentation(p, m, n, l, q)
    except BadParameters:
        return None
    # relation check in G
    if G.conj(y2, x2) != G.power(x2, pres.multiplier) or G.power(y2, pn) != G.power(x2, p**q % pm):
        return None
    return pres, int(x2), int(y2)


def coordinates_in(G: FiniteGroup, rec: Recognition) -> dict[int, tuple[int, int]]:
    """Element of S -> (i, j) with the element equal to x^i y^j."""
    pres = rec.presentation
    pm, pn = pres.p**pres.m, pres.p**pres.n
    out = {}
    xi = 0
    for i in range(pm):
        e = xi
        for j in range(pn):
            out[e] = (i, j)
            e = int(G.table[e, rec.y])
        xi = int(G.table[xi, rec.x])
    return out


@dataclass(frozen=True)
class AutActionData:
    a: int
    b: int
    c: int
    d: int
    order: int
    w: int | None = None  # realising element in an ambient group, if any

    def reduced(self, p: int) -> tuple[int, int, int, int]:
        return self.a % p, self.b % p, self.c % p, self.d % p

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "order": self.order, "w": self.w}


def automorphisms(M: MetacyclicGroup, cap: int = AUTOMORPHISM_CAP):
    """Yield (X, Y, images) for every automorphism x -> X, y -> Y, in canonical order."""
    if M.order > cap:
        raise CapExceeded(f"automorphism search capped at order {cap}, got {M.order}")
    pres, p = M.pres, M.p
    ar = np.arange(M.order)
    xs = ar[M.power(ar, M.pm) == 0]
    r = pres.multiplier
    for X in xs.tolist():
        Xq = int(M.power(X, p**pres.q))
        Xr = int(M.power(X, r))
        ys = ar[(M.power(ar, M.pn) == Xq) & (M.conj(ar, X) == Xr)]
        if not len(ys):
            continue
        i1, j1 = divmod(X, M.pn)
        i2, j2 = np.divmod(ys, M.pn)
        ys = ys[(i1 * j2 - i2 * j1) % p != 0]  # images span the Frattini quotient
        for Y in ys.tolist():
            yield X, Y, M.endomorphism_images(X, Y)


def _automorphism_order(M: MetacyclicGroup, images: np.ndarray) -> int:
    gx, gy, k = int(images[M.x]), int(images[M.y]), 1
    while (gx, gy) != (M.x, M.y):
        gx, gy, k = int(images[gx]), int(images[gy]), k + 1
    return k


def _action(M: MetacyclicGroup, images: np.ndarray, order: int) -> AutActionData:
    a, c = divmod(int(images[M.x]), M.pn)
    b, d = divmod(int(images[M.y]), M.pn)
    return AutActionData(a, b, c, d, order)


def pprime_automorphism_exists(M: MetacyclicGroup, cap: int = AUTOMORPHISM_CAP) -> tuple[bool, AutActionData | None]:
    """Exhaustive search for an automorphism of order > 1 prime to p."""
    for _, _, images in automorphisms(M, cap):
        o = _automorphism_order(M, images)
        pp = p_part(o, M.p)
        if o // pp > 1:
            # phi^(p-part) has order exactly the p'-part
            w = np.arange(M.order)
            for _ in range(pp):
                w = images[w]
            return True, _action(M, w, o // pp)
    return False, None


def expected_shape(pres: MetacyclicPresentation) -> str:
    """The reduced-matrix shape forced by the relations: 'upper', 'lower' or 'free'."""
    if pres.n > pres.l:
        return "upper"  # (a b; 0 1)
    if pres.l < pres.m:
        return "lower"  # (a 0; c 1)
    return "free"


def shape_violations(M: MetacyclicGroup, cap: int = AUTOMORPHISM_CAP) -> list[AutActionData]:
    """Automorphisms whose reduced matrix breaks the stated case split (split presentations only)."""
    if not M.pres.split:
        raise NotSplit("the case split is stated for split presentations")
    shape = expected_shape(M.pres)
    p = M.p
    bad = []
    for _, _, images in automorphisms(M, cap):
        act = _action(M, images, 0)
        a, b, c, d = act.reduced(p)
        ok = (a * d - b * c) % p != 0
        if shape == "upper":
            ok = ok and c == 0 and d == 1
        elif shape == "lower":
            ok = ok and b == 0 and d == 1
        if not ok:
            bad.append(_action(M, images, _automorphism_order(M, images)))
    return bad


def holomorph(M: MetacyclicGroup, X: int, Y: int, name: str | None = None) -> tuple[FiniteGroup, int, int, int]:
    """S semidirect <phi> for the automorphism x -> X, y -> Y, acting on |S| points."""
    images = M.endomorphism_images(X, Y)
    if len(np.unique(images)) != M.order:
        raise BadParameters("images do not define an automorphism")
    gens = [M.regular_permutation(M.x), M.regular_permutation(M.y), Permutation(images.tolist())]
    G = FiniteGroup(M.order, gens, name=name)
    xi, yi, wi = G.generator_indices
    return G, xi, yi, wi


@dataclass
class LocalSubgroupTable:
    E: Subgroup
    Z: Subgroup
    S_E: Subgroup
    Q: list[Subgroup]
    u: int
    z: int
    w: int | None
    action: AutActionData | None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"u": self.u, "z": self.z, "w": self.w,
                "action": self.action.to_dict() if self.action else None,
                "orders": {"E": self.E.order, "Z": self.Z.order, "S_E": self.S_E.order},
                "checks": dict(sorted(self.checks.items()))}


def complement_generator(ctx: PLocalContext) -> int | None:
    """A p'-element w of N_G(S) with N_G(S) = S C_G(S) <w>, or None if S C_G(S) is all of N_G(S)."""
    G, S, N = ctx.group, ctx.sylow, ctx.normalizer
    base = join(G, S, centralizer(G, S))
    if base.order == N.order:
        return None
    for w in N.sorted.tolist():
        if G.element_orders[w] % ctx.p and join(G, base, generate(G, [w])).order == N.order:
            return w
    raise ArithmeticError("N_G(S) / S C_G(S) is not cyclic")


def local_table(ctx: PLocalContext, rec: Recognition) -> LocalSubgroupTable:
    from .fusion import strongly_embedded_core

    pres = rec.presentation
    if pres is None or not pres.split or pres.m != pres.n + pres.l:
        raise HypothesisFailed("needs a split presentation with m = n + l")
    if strongly_embedded_core(ctx)[1]:
        raise HypothesisFailed("G has a strongly p-embedded subgroup")
    G, S, p = ctx.group, ctx.sylow, ctx.p
    x, y = rec.x, rec.y
    z = G.power(x, p ** (pres.m - 1))
    u = G.power(y, p ** (pres.n - 1))
    E = generate(G, [u, z])
    Z = generate(G, [z])
    S_E = centralizer(S, E)
    Q = [generate(G, [G.mul(u, G.power(z, j))]) for j in range(p)]
    checks = {
        "E is Omega_1(S)": E == ctx.omega1,
        "Z = E meet Z(S)": Z == (E & ctx.center),
        "S_E = <x^p, y>": S_E == generate(G, [G.power(x, p), y]),
    }
    # conjugation by x^-1 steps the index up by one (x itself steps it down)
    xinv = G.inverse[x]
    checks["x^-1 Q_j x = Q_j+1"] = all(conjugate_subgroup(int(xinv), Q[j]) == Q[(j + 1) % p] for j in range(p))
    checks["C_S(Q_j) = S_E"] = all(centralizer(S, Qj) == S_E for Qj in Q)
    w = complement_generator(ctx)
    action = None
    CS = centralizer(G, S)
    if w is not None:
        coords = coordinates_in(G, rec)
        a, c = coords[G.conj(w, x)]
        b, d = coords[G.conj(w, y)]
        action = AutActionData(a, b, c, d, int(G.element_orders[w]), w)
        checks["b = 0 mod p^l"] = b % p**pres.l == 0
        checks["c = 0 mod p^(n-l)"] = pres.n <= pres.l or c % p ** (pres.n - pres.l) == 0
        checks["d = 1"] = d == 1
        checks["w z w^-1 = z^a"] = G.conj(w, z) == G.power(z, a)
        checks["w u w^-1 = u"] = G.conj(w, u) == u
    W = generate(G, [w] if w is not None else [])
    NE, NZ = normalizer(G, E), normalizer(G, Z)
    CZ = centralizer(G, Z)
    checks["N_G(E) >= C_G(S) S <w>"] = join(G, CS, S, W) <= NE
    checks["N_G(Z) = C_G(Z) <w>"] = NZ == join(G, CZ, W)
    if w is not None:
        checks["N_G(Z) != C_G(Z)"] = NZ != CZ
    for j, Qj in enumerate(Q):
        CQ = centralizer(G, Qj)
        checks[f"N_G(Q_{j}) = C_G(Q_{j})"] = normalizer(G, Qj) == CQ
        xj = G.power(int(xinv), j)
        wj = G.conj(xj, w) if w is not None else 0
        checks[f"C_G(Q_{j}) >= S_E C_G(S) <w_{j}>"] = join(G, conjugate_subgroup(xj, S_E), CS, generate(G, [wj])) <= CQ
    return LocalSubgroupTable(E, Z, S_E, Q, int(u), int(z), w, action, checks)
