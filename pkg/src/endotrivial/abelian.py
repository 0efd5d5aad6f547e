"""Finite abelian groups given by a multiplication table (identity at index 0)."""

from __future__ import annotations

from collections import Counter
from math import gcd

import numpy as np

from .errors import NotAbelian
from .perm import FiniteGroup, QuotientGroup, Subgroup, derived_subgroup, quotient


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def local_table(A: FiniteGroup | QuotientGroup | Subgroup) -> np.ndarray:
    if isinstance(A, Subgroup):
        s = A.sorted
        pos = np.full(A.group.order, -1, dtype=np.int64)
        pos[s] = np.arange(len(s))
        return pos[A.group.table[np.ix_(s, s)]]
    return A.table


def _orders(table: np.ndarray) -> np.ndarray:
    n = len(table)
    ar = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    orders[0] = 1
    cur = ar.copy()
    k = 1
    while (orders == 0).any():
        cur = table[cur, ar]
        k += 1
        orders[(cur == 0) & (orders == 0)] = k
    return orders


def _power(table: np.ndarray, xs: np.ndarray, e: int) -> np.ndarray:
    result = np.zeros_like(xs)
    base = xs.copy()
    while e:
        if e & 1:
            result = table[result, base]
        base = table[base, base]
        e >>= 1
    return result


def _log(n: int, r: int) -> int:
    k = 0
    while n > 1:
        n //= r
        k += 1
    return k


def primary_invariants(A) -> dict[int, list[int]]:
    """Prime -> descending list of prime-power orders of cyclic factors."""
    table = local_table(A)
    if not (table == table.T).all():
        raise NotAbelian("group is not abelian")
    n = len(table)
    xs = np.arange(n)
    out: dict[int, list[int]] = {}
    for r in prime_factors(n):
        # |{x : x^(r^k) = 1}| = r^(sum_i min(k, e_i))
        sums = [0]
        k = 1
        while True:
            cnt = int((_power(table, xs, r**k) == 0).sum())
            sums.append(_log(cnt, r))
            if sums[-1] == sums[-2]:
                break
            k += 1
        at_least = [sums[k] - sums[k - 1] for k in range(1, len(sums))]
        exps = Counter()
        for k in range(len(at_least)):
            nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
            if at_least[k] - nxt:
                exps[k + 1] = at_least[k] - nxt
        out[r] = sorted((r**e for e, c in exps.items() for _ in range(c)), reverse=True)
    return out


def merge_primary(primary: dict[int, list[int]]) -> list[int]:
    """Combine prime-power factors into invariant factors d1 | d2 | ..."""
    width = max((len(v) for v in primary.values()), default=0)
    out = []
    for i in range(width):
        d = 1
        for v in primary.values():
            if i < len(v):
                d *= v[i]
        out.append(d)
    return sorted(out)


def normalize_invariants(values: list[int]) -> list[int]:
    primary: dict[int, list[int]] = {}
    for d in values:
        for r in prime_factors(d):
            primary.setdefault(r, []).append(p_part(d, r))
    return merge_primary({r: sorted(v, reverse=True) for r, v in primary.items()})


def abelian_invariants(A: FiniteGroup | QuotientGroup | Subgroup) -> list[int]:
    """Invariant factors of an abelian group; [] for the trivial group."""
    return merge_primary(primary_invariants(A))


def abelianization(H: FiniteGroup | Subgroup) -> QuotientGroup:
    return quotient(H, derived_subgroup(H))


def abelianization_invariants(H: FiniteGroup | Subgroup) -> list[int]:
    return abelian_invariants(abelianization(H))


def basis(table: np.ndarray) -> list[tuple[int, int]]:
    """A basis of prime-power cyclic factors: [(element, order), ...].

    Greedy choice of maximal order modulo the span so far, then the
    standard correction by the earlier basis elements."""
    if not (table == table.T).all():
        raise NotAbelian("group is not abelian")
    n = len(table)
    orders = _orders(table)
    result: list[tuple[int, int]] = []
    for r in prime_factors(n):
        part = [x for x in range(n) if _is_power(int(orders[x]), r)]
        total = len(part)
        span = {0: ()}
        chosen: list[tuple[int, int]] = []
        while len(span) < total:
            best, best_e = None, 0
            for b in part:
                if b in span:
                    continue
                e, y = 1, b
                while y not in span:
                    y = int(table[y, b])
                    e += 1
                if e > best_e:
                    best, best_e = b, e
            coords = span[int(_power(table, np.array([best]), best_e)[0])]
            adj = best
            for (a, o), t in zip(chosen, coords):
                if t % best_e:
                    raise ArithmeticError("basis correction failed")
                adj = int(table[adj, _power(table, np.array([a]), (o - t // best_e) % o)[0]])
            chosen.append((adj, best_e))
            new_span = {}
            for h, c in span.items():
                y = h
                for k in range(best_e):
                    new_span[y] = c + (k,)
                    y = int(table[y, adj])
            span = new_span
        result.extend(chosen)
    return result


def _is_power(n: int, r: int) -> bool:
    while n % r == 0:
        n //= r
    return n == 1


def coordinates(table: np.ndarray, basis_: list[tuple[int, int]]) -> np.ndarray:
    """coords[x] = exponent vector of x with respect to ``basis_``."""
    n = len(table)
    coords = np.zeros((n, len(basis_)), dtype=np.int64)
    elems = np.array([0])
    vecs = np.zeros((1, len(basis_)), dtype=np.int64)
    for i, (b, o) in enumerate(basis_):
        layers_e, layers_v = [elems], [vecs]
        cur_e, cur_v = elems, vecs
        for _ in range(1, o):
            cur_e = table[cur_e, b]
            cur_v = cur_v.copy()
            cur_v[:, i] += 1
            layers_e.append(cur_e)
            layers_v.append(cur_v)
        elems = np.concatenate(layers_e)
        vecs = np.concatenate(layers_v)
    if len(elems) != n or len(np.unique(elems)) != n:
        raise ArithmeticError("basis does not span the group")
    coords[elems] = vecs
    return coords


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
