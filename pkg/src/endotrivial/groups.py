"""Named small groups used by the battery and the tests."""

from __future__ import annotations

from itertools import product

from .metacyclic import MetacyclicPresentation, construct, holomorph
from .perm import FiniteGroup, Permutation
from .subgroups import sylow_p


def _group(degree: int, gens: list[list[int]], name: str) -> FiniteGroup:
    return FiniteGroup(degree, [Permutation(g) for g in gens], name=name)


def cyclic(n: int) -> FiniteGroup:
    return _group(n, [[(i + 1) % n for i in range(n)]], f"C{n}")


def symmetric3() -> FiniteGroup:
    return _group(3, [[1, 2, 0], [1, 0, 2]], "S3")


def symmetric4() -> FiniteGroup:
    return _group(4, [[1, 2, 3, 0], [1, 0, 2, 3]], "S4")


def alternating4() -> FiniteGroup:
    return _group(4, [[1, 0, 3, 2], [2, 3, 0, 1], [1, 2, 0, 3]], "A4")


def alternating5() -> FiniteGroup:
    return _group(5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]], "A5")


def c3_squared() -> FiniteGroup:
    return _group(6, [[1, 2, 0, 3, 4, 5], [0, 1, 2, 4, 5, 3]], "C3xC3")


def c3_squared_inverted() -> FiniteGroup:
    """C3 x C3 with an involution inverting both factors."""
    return _group(6, [[1, 2, 0, 3, 4, 5], [0, 1, 2, 4, 5, 3], [0, 2, 1, 3, 5, 4]], "C3xC3:inv")


def sl2_3() -> FiniteGroup:
    """SL(2,3) acting on the eight nonzero vectors of F_3^2."""
    vectors = [v for v in product(range(3), repeat=2) if v != (0, 0)]
    pos = {v: i for i, v in enumerate(vectors)}

    def act(a, b, c, d):
        return [pos[((a * u + b * v) % 3, (c * u + d * v) % 3)] for u, v in vectors]

    return _group(8, [act(1, 1, 0, 1), act(1, 0, 1, 1)], "SL(2,3)")


def quaternion8() -> FiniteGroup:
    S = sylow_p(sl2_3(), 2)
    return S.as_group("Q8")


def extraspecial27() -> FiniteGroup:
    """Heisenberg group mod 3 (exponent 3) acting on F_3^2 by x -> x+1 and y -> y+x."""
    pts = list(product(range(3), repeat=2))
    pos = {v: i for i, v in enumerate(pts)}
    shift = [pos[((x + 1) % 3, y)] for x, y in pts]
    shear = [pos[(x, (y + x) % 3)] for x, y in pts]
    return _group(9, [shift, shear], "3^(1+2)_+")


def metacyclic(p: int, m: int, n: int, l: int, q: int | None = None, strict: bool = True) -> FiniteGroup:
    pres = MetacyclicPresentation(p, m, n, l, q, strict=strict)
    G, _, _ = construct(pres).permutation_group()
    return G


def m27() -> FiniteGroup:
    return metacyclic(3, 2, 1, 1)


def m27_inverted() -> FiniteGroup:
    """M27 extended by w: x -> x^-1, y -> y (order 54)."""
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    G, *_ = holomorph(M, int(M.inverse[M.x]), M.y, name="M27:C2")
    return G


def m125_c4() -> FiniteGroup:
    """M125 = (5,2,1,1) extended by x -> x^7, y -> y, an automorphism of order 4."""
    M = construct(MetacyclicPresentation(5, 2, 1, 1))
    G, *_ = holomorph(M, int(M.power(M.x, 7)), M.y, name="M125:C4")
    return G


def presented81() -> FiniteGroup:
    """The group with parameters (3,2,2,1,1): y^9 = x^3 gives y order 27, so it is split."""
    G = metacyclic(3, 2, 2, 1, 1, strict=False)
    G.name = "metacyclic(3,2,2,1,1)"
    return G


def nonsplit729() -> FiniteGroup:
    """(3,3,3,1,2), the smallest genuinely nonsplit tuple with p = 3."""
    G = metacyclic(3, 3, 3, 1, 2)
    G.name = "nonsplit(3,3,3,1,2)"
    return G


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    da = A.degree
    gens = [list(g.images) + list(range(da, da + B.degree)) for g in A.generators]
    gens += [list(range(da)) + [da + i for i in g.images] for g in B.generators]
    return _group(da + B.degree, gens, name or f"{A.name}x{B.name}")


def presented81_c2() -> FiniteGroup:
    return direct_product(presented81(), cyclic(2), "metacyclic(3,2,2,1,1)xC2")


def c7_m27() -> FiniteGroup:
    """C7 semidirect M27 with x acting as t -> 2t and y trivially (order 189)."""
    M = construct(MetacyclicPresentation(3, 2, 1, 1))
    d = M.order
    x = M.regular_permutation(M.x).images + tuple(d + (2 * t) % 7 for t in range(7))
    y = M.regular_permutation(M.y).images + tuple(d + t for t in range(7))
    t = tuple(range(d)) + tuple(d + (s + 1) % 7 for s in range(7))
    return _group(d + 7, [list(x), list(y), list(t)], "C7:M27")


NAMED = {
    "S3": symmetric3,
    "S4": symmetric4,
    "A4": alternating4,
    "A5": alternating5,
    "C3xC3": c3_squared,
    "C3xC3:inv": c3_squared_inverted,
    "SL(2,3)": sl2_3,
    "Q8": quaternion8,
    "3^(1+2)_+": extraspecial27,
    "M27": m27,
    "M27:C2": m27_inverted,
    "M125:C4": m125_c4,
    "metacyclic(3,2,2,1,1)": presented81,
    "metacyclic(3,2,2,1,1)xC2": presented81_c2,
    "nonsplit(3,3,3,1,2)": nonsplit729,
    "C7:M27": c7_m27,
}
