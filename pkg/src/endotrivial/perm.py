"""Permutation groups small enough to enumerate completely.

Elements of a FiniteGroup are addressed by their rank in the lexicographic
order of image sequences, so index 0 is always the identity.  Products
compose right to left: ``(a * b)(i) == a(b(i))``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import cached_property

import numpy as np

from .errors import CapExceeded, ForeignElement, MalformedPermutation, NotNormal

DEFAULT_CAP = 20000


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise MalformedPermutation(
                f"{list(images)} is not a permutation of 0..{len(images) - 1}"
            )
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(degree))
        seen: set[int] = set()
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                if a in seen or not 0 <= a < degree:
                    raise MalformedPermutation(f"bad cycle {cycle} on {degree} points")
                seen.add(a)
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise MalformedPermutation("degree mismatch in product")
        a = self.images
        return Permutation(a[i] for i in other.images)

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        n = 1
        for cycle in self.cycles():
            n = lcm(n, len(cycle))
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def _enumerate(degree: int, gens: Sequence[tuple[int, ...]], cap: int) -> list[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[i] for i in g)
                if c not in seen:
                    seen.add(c)
                    if len(seen) > cap:
                        raise CapExceeded(f"group exceeds the enumeration cap of {cap} elements")
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


class FiniteGroup:
    """A fully enumerated permutation group."""

    def __init__(
        self,
        degree: int,
        generators: Iterable[Permutation | Sequence[int]],
        name: str | None = None,
        cap: int = DEFAULT_CAP,
    ):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        for g in gens:
            if g.degree != degree:
                raise MalformedPermutation(f"generator {g} does not act on {degree} points")
        elements = _enumerate(degree, [g.images for g in gens], cap)
        self._setup(degree, tuple(gens), elements, name, cap)

    @classmethod
    def from_elements(
        cls,
        degree: int,
        elements: Iterable[Sequence[int]],
        generators: Iterable[Permutation] = (),
        name: str | None = None,
    ) -> FiniteGroup:
        """Wrap an element list already known to be closed (no closure is run)."""
        self = cls.__new__(cls)
        self._setup(degree, tuple(generators), sorted(tuple(e) for e in elements), name, DEFAULT_CAP)
        return self

    def _setup(self, degree, gens, elements, name, cap):
        self.degree = degree
        self.generators = gens
        self.name = name
        self.cap = cap
        self.perms = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
        self.order = len(elements)
        self._base = _find_base(self.perms)
        k = len(self._base)
        if degree ** max(k, 1) < 2**62:
            self._radix = degree ** np.arange(k, dtype=np.int64)
            keys = self.perms[:, self._base] @ self._radix
            self._order_by_key = np.argsort(keys)
            self._sorted_keys = keys[self._order_by_key]
            self._key_dict = None
        else:
            self._radix = None
            self._key_dict = {tuple(r): i for i, r in enumerate(self.perms[:, self._base].tolist())}

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<{label} of order {self.order} on {self.degree} points>"

    def __len__(self) -> int:
        return self.order

    # element lookup

    def _lookup_base(self, cols: np.ndarray) -> np.ndarray:
        """Indices of group elements whose images on the base are ``cols`` (last axis)."""
        if self._radix is not None:
            keys = cols @ self._radix
            pos = np.searchsorted(self._sorted_keys, keys)
            return self._order_by_key[np.minimum(pos, self.order - 1)]
        flat = cols.reshape(-1, cols.shape[-1])
        out = np.fromiter((self._key_dict[tuple(r)] for r in flat.tolist()), dtype=np.int64, count=len(flat))
        return out.reshape(cols.shape[:-1])

    def index(self, perm: Permutation | Sequence[int]) -> int:
        images = perm.images if isinstance(perm, Permutation) else tuple(perm)
        if len(images) != self.degree:
            raise ForeignElement(f"{images} has the wrong degree")
        arr = np.asarray(images, dtype=np.int64)
        try:
            i = int(self._lookup_base(arr[self._base]))
        except KeyError:
            raise ForeignElement(f"{list(images)} is not in {self!r}") from None
        if not np.array_equal(self.perms[i], arr):
            raise ForeignElement(f"{list(images)} is not in {self!r}")
        return i

    def __contains__(self, perm) -> bool:
        try:
            self.index(perm)
        except (ForeignElement, MalformedPermutation):
            return False
        return True

    def element(self, i: int) -> Permutation:
        return Permutation(self.perms[i].tolist())

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index(g) for g in self.generators)

    # arithmetic

    @cached_property
    def table(self) -> np.ndarray:
        n = self.order
        pb = self.perms[:, self._base]
        out = np.empty((n, n), dtype=np.int64)
        chunk = max(1, 4_000_000 // max(1, n * len(self._base)))
        for start in range(0, n, chunk):
            rows = self.perms[start:start + chunk]
            out[start:start + len(rows)] = self._lookup_base(rows[:, pb])
        return out

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argsort(self.perms, axis=1)
        return self._lookup_base(inv[:, self._base])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inverse[a]), -k
        result = 0
        while k:
            if k & 1:
                result = int(self.table[result, a])
            a = int(self.table[a, a])
            k >>= 1
        return result

    def conj(self, g: int, x) -> np.ndarray | int:
        """g x g^-1, vectorised over ``x``."""
        r = self.table[self.table[g, x], self.inverse[g]]
        return int(r) if np.ndim(r) == 0 else r

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a^-1 b^-1."""
        t, inv = self.table, self.inverse
        return int(t[t[t[a, b], inv[a]], inv[b]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        cur = ar.copy()
        k = 1
        while (orders == 0).any():
            cur = self.table[cur, ar]
            k += 1
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
        return orders

    def whole(self) -> Subgroup:
        return Subgroup(self, range(self.order), generators=self.generator_indices)

    def trivial(self) -> Subgroup:
        return Subgroup(self, (0,), generators=())

    def is_abelian(self) -> bool:
        t = self.table
        return bool((t == t.T).all())


def _find_base(perms: np.ndarray) -> list[int]:
    n, d = perms.shape
    base: list[int] = []
    labels = np.zeros(n, dtype=np.int64)
    classes = 1
    for pt in range(d):
        if classes == n:
            break
        _, inv = np.unique(labels * d + perms[:, pt], return_inverse=True)
        k = int(inv.max()) + 1
        if k > classes:
            base.append(pt)
            labels = inv.reshape(-1)
            classes = k
    return base


class Subgroup:
    """A subgroup of an enumerated group, stored as a set of element indices."""

    def __init__(self, group: FiniteGroup, elements: Iterable[int], generators: Iterable[int] | None = None):
        self.group = group
        self.elements = frozenset(int(e) for e in elements)
        if generators is not None:
            self.__dict__["generators"] = tuple(int(g) for g in generators)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.elements

    def __iter__(self):
        return iter(self.sorted.tolist())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.group is self.group and other.elements == self.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __le__(self, other: Subgroup) -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: Subgroup) -> bool:
        return self.elements < other.elements

    def __and__(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.group, self.elements & other.elements)

    def __repr__(self) -> str:
        return f"<subgroup of order {self.order} in {self.group!r}>"

    @cached_property
    def sorted(self) -> np.ndarray:
        return np.array(sorted(self.elements), dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.sorted] = True
        return m

    @cached_property
    def sort_key(self) -> tuple:
        return (self.order, tuple(self.sorted.tolist()))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return generate(self.group, self.sorted).generators

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        t = self.group.table
        s = self.sorted
        block = t[np.ix_(s, s)]
        return bool((block == block.T).all())

    def permutations(self) -> list[Permutation]:
        return [self.group.element(i) for i in self.sorted]

    def as_group(self, name: str | None = None) -> FiniteGroup:
        G = self.group
        return FiniteGroup.from_elements(
            G.degree,
            G.perms[self.sorted].tolist(),
            generators=[G.element(g) for g in self.generators],
            name=name,
        )

    def verify(self) -> None:
        """Raise unless the element set is a subgroup whose order divides |G|."""
        G = self.group
        s = self.sorted
        if 0 not in self.elements:
            raise ValueError("subgroup lacks the identity")
        if not self.mask[G.table[np.ix_(s, s)]].all() or not self.mask[G.inverse[s]].all():
            raise ValueError("element set is not closed")
        if G.order % self.order:
            raise ValueError("subgroup order does not divide the group order")


GroupLike = "FiniteGroup | Subgroup"


def as_subgroup(H: FiniteGroup | Subgroup) -> Subgroup:
    return H.whole() if isinstance(H, FiniteGroup) else H


def closure(degree: int, gens: Sequence[Permutation | Sequence[int]], cap: int = DEFAULT_CAP,
            name: str | None = None) -> FiniteGroup:
    return FiniteGroup(degree, gens, name=name, cap=cap)


def _bfs(G: FiniteGroup, gens: Sequence[int]) -> np.ndarray:
    if not gens:
        return np.zeros(1, dtype=bool)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    g = np.asarray(gens)
    t = G.table
    while len(frontier):
        cand = np.unique(t[frontier[:, None], g[None, :]].ravel())
        cand = cand[~mask[cand]]
        mask[cand] = True
        frontier = cand
    return mask


def generate(G: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seeds``; records the generators actually needed."""
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for s in seeds:
        s = int(s)
        if not 0 <= s < G.order:
            raise ForeignElement(f"{s} is not an element index of {G!r}")
        if not mask[s]:
            gens.append(s)
            mask = _bfs(G, gens)
    return Subgroup(G, np.flatnonzero(mask), generators=gens)


def subgroup_generated(G: FiniteGroup, seed: Iterable[Permutation | int]) -> Subgroup:
    idx = [s if isinstance(s, (int, np.integer)) else G.index(s) for s in seed]
    return generate(G, idx)


def join(G: FiniteGroup, *subgroups: Subgroup) -> Subgroup:
    seeds: list[int] = []
    for H in subgroups:
        seeds.extend(H.generators)
    return generate(G, seeds)


def conjugate(G: FiniteGroup, g: int, X: Subgroup | Iterable[int]) -> frozenset[int]:
    """The set g X g^-1."""
    arr = X.sorted if isinstance(X, Subgroup) else np.fromiter(X, dtype=np.int64)
    return frozenset(G.conj(g, arr).tolist())


def conjugate_subgroup(g: int, H: Subgroup) -> Subgroup:
    G = H.group
    return Subgroup(G, conjugate(G, g, H), generators=[G.conj(g, h) for h in H.generators])


def normalizer(H: FiniteGroup | Subgroup, K: Subgroup) -> Subgroup:
    """N_H(K) = {g in H : g K g^-1 = K}."""
    H = as_subgroup(H)
    G = H.group
    cand = H.sorted
    ok = np.ones(len(cand), dtype=bool)
    for k in K.generators:
        ok &= K.mask[G.conj(cand, k)]
    return Subgroup(G, cand[ok])


def centralizer(H: FiniteGroup | Subgroup, X: Subgroup | Iterable[int]) -> Subgroup:
    """C_H(X) = {g in H : g x = x g for all x in X}."""
    H = as_subgroup(H)
    G = H.group
    xs = X.generators if isinstance(X, Subgroup) else [int(x) for x in X]
    for x in xs:
        if not 0 <= x < G.order:
            raise ForeignElement(f"{x} is not an element index of {G!r}")
    cand = H.sorted
    ok = np.ones(len(cand), dtype=bool)
    t = G.table
    for x in xs:
        ok &= t[cand, x] == t[x, cand]
    return Subgroup(G, cand[ok])


def is_normal(H: FiniteGroup | Subgroup, K: Subgroup) -> bool:
    H = as_subgroup(H)
    G = H.group
    for g in H.generators:
        if not K.mask[G.conj(g, K.sorted)].all():
            return False
    return True


def normal_closure(H: FiniteGroup | Subgroup, seeds: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of H containing ``seeds``."""
    H = as_subgroup(H)
    G = H.group
    K = generate(G, seeds)
    while True:
        extra = [G.conj(h, k) for h in H.generators for k in K.generators]
        bigger = generate(G, list(K.generators) + extra)
        if bigger.order == K.order:
            return K
        K = bigger


def derived_subgroup(H: FiniteGroup | Subgroup) -> Subgroup:
    H = as_subgroup(H)
    G = H.group
    gens = H.generators
    comms = [G.commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return normal_closure(H, comms)


def product_set(G: FiniteGroup, A: Subgroup | Iterable[int], B: Subgroup | Iterable[int]) -> frozenset[int]:
    """{ab : a in A, b in B}."""
    a = A.sorted if isinstance(A, Subgroup) else np.fromiter(A, dtype=np.int64)
    b = B.sorted if isinstance(B, Subgroup) else np.fromiter(B, dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return frozenset()
    return frozenset(np.unique(G.table[np.ix_(a, b)]).tolist())


def product_mask(G: FiniteGroup, A: Subgroup, B: Subgroup) -> np.ndarray:
    m = np.zeros(G.order, dtype=bool)
    m[G.table[np.ix_(A.sorted, B.sorted)].ravel()] = True
    return m


class QuotientGroup:
    """H/K for K normal in H, with cosets numbered by their smallest element."""

    def __init__(self, ambient: FiniteGroup | Subgroup, normal: Subgroup):
        ambient = as_subgroup(ambient)
        if not normal <= ambient or not is_normal(ambient, normal):
            raise NotNormal("the kernel is not a normal subgroup of the ambient group")
        G = ambient.group
        self.ambient = ambient
        self.normal = normal
        coset_of = np.full(G.order, -1, dtype=np.int64)
        reps = []
        for x in ambient.sorted:
            if coset_of[x] >= 0:
                continue
            coset_of[G.table[x, normal.sorted]] = len(reps)
            reps.append(int(x))
        self.coset_of = coset_of
        self.representatives = np.array(reps, dtype=np.int64)
        self.order = len(reps)
        r = self.representatives
        self.table = coset_of[G.table[np.ix_(r, r)]]

    @property
    def cosets(self) -> list[frozenset[int]]:
        G = self.ambient.group
        return [frozenset(G.table[r, self.normal.sorted].tolist()) for r in self.representatives]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<quotient of order {self.order}>"

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def as_group(self, name: str | None = None) -> FiniteGroup:
        """Regular permutation representation of the coset group."""
        n = self.order
        gens = [Permutation(self.table[self.coset_of[g]].tolist())
                for g in self.ambient.generators]
        if n == 1:
            return FiniteGroup.from_elements(1, [(0,)], name=name)
        return FiniteGroup(n, gens, name=name)


def quotient(G: FiniteGroup | Subgroup, N: Subgroup) -> QuotientGroup:
    return QuotientGroup(G, N)
