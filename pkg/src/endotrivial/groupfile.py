"""Group files: JSON with ``degree``, ``generators`` (0-based image lists) and an optional ``name``."""

from __future__ import annotations

import json

from .errors import ParseError
from .perm import DEFAULT_CAP, FiniteGroup, Permutation


def parse_group(text: str, cap: int = DEFAULT_CAP) -> FiniteGroup:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"degree", "generators", "name"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}", field=sorted(unknown)[0])
    degree = doc.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise ParseError("degree must be a positive integer", field="degree")
    gens = doc.get("generators")
    if not isinstance(gens, list):
        raise ParseError("generators must be a list of image lists", field="generators")
    perms = []
    for k, g in enumerate(gens):
        where = f"generators[{k}]"
        if not isinstance(g, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in g):
            raise ParseError("generator must be a list of integers", field=where)
        if len(g) != degree:
            raise ParseError(f"generator has {len(g)} images, expected {degree}", field=where)
        if any(v < 0 or v >= degree for v in g):
            raise ParseError("image out of range", field=where)
        if len(set(g)) != degree:
            raise ParseError("duplicate image", field=where)
        perms.append(Permutation(g))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("name must be text", field="name")
    return FiniteGroup(degree, perms, name=name, cap=cap)


def load_group(path: str, cap: int = DEFAULT_CAP) -> FiniteGroup:
    with open(path, encoding="utf-8") as fh:
        return parse_group(fh.read(), cap=cap)


def dump_group(degree: int, generators: list[Permutation], name: str | None = None) -> str:
    doc = {"degree": degree, "generators": [list(g.images) for g in generators]}
    if name is not None:
        doc["name"] = name
    return json.dumps(doc) + "\n"
