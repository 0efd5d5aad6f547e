"""Full p-local analysis of one group, assembled into a deterministic JSON-ready report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .abelian import abelianization_invariants
from .characters import FieldSpec, build_weak_hom, hom_to_units, k_group, rho2_characters, verify_weak_hom
from .errors import GroupError, PrimeNotDividing
from .fusion import controls_fusion, is_strongly_p_embedded, orbit_poset_components, strongly_embedded_core
from .metacyclic import Recognition, recognize
from .perm import FiniteGroup, Subgroup, quotient
from .rho import (
    abelianized_kernel,
    chain_closure,
    closed_form_central,
    j_equals_derived_times_r,
    pprime_part,
    rho_infinity,
    split_metacyclic_kernel,
)
from .subgroups import PLocalContext, is_p_nilpotent, omega1

CITATION_NOTE = (
    "T(N_G(S)) is described through N_G(S)-stable endotrivial modules of S; "
    "module-theoretic data is not computed here"
)


class StageError(GroupError):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f"{stage}: {type(error).__name__}: {error}")
        self.stage = stage
        self.error = error


@dataclass
class AnalysisReport:
    data: dict
    mismatches: list[str] = field(default_factory=list)

    @property
    def mismatch(self) -> bool:
        return bool(self.mismatches)

    def to_json(self) -> str:
        doc = dict(self.data)
        doc["mismatch"] = self.mismatch
        doc["mismatches"] = sorted(self.mismatches)
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def summary(self) -> str:
        d = self.data
        s = d["structure"]
        lines = [
            f"{d['group']['name']}  |G| = {d['group']['order']}  p = {d['prime']}  field = {d['field']}",
            f"  Sylow: order {d['sylow']['order']}, {d['sylow']['class']}"
            + (f", {d['sylow']['metacyclic']['kind']} metacyclic" if d['sylow']['metacyclic'] else ""),
            f"  G0 order {d['core']['order']}{' (proper, analysis rerun on G0)' if d['core']['proper'] else ''}",
            f"  N_G(S) controls fusion: {d['fusion']['normalizer_controls_fusion']}",
            f"  pi_1: |N/R| = {d['pi1']['quotient_order']}, abelianization {d['pi1']['abelianization']}",
            f"  K(G) invariants {d['k_group']['invariants']}",
            f"  torsion-free rank {s['torsion_free_rank']}; torsion: {s['torsion']['description']}",
            f"  MISMATCH: {', '.join(self.mismatches)}" if self.mismatches else "  no mismatch",
        ]
        return "\n".join(lines)


class _Lift:
    """Maps element indices of an analysed subgroup-as-group back into the input group."""

    def __init__(self, outer: FiniteGroup, inner: FiniteGroup):
        if inner is outer:
            self.table = np.arange(outer.order)
        else:
            self.table = np.array([outer.index(inner.element(i)) for i in range(inner.order)])

    def one(self, i: int) -> int:
        return int(self.table[int(i)])

    def many(self, xs) -> list[int]:
        return sorted(int(v) for v in self.table[np.asarray(sorted(xs), dtype=np.int64)])

    def sub(self, H: Subgroup) -> list[int]:
        return self.many(H.sorted)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GroupError as e:
        raise StageError(name, e) from e


def analyze(G: FiniteGroup, p: int, field_spec: FieldSpec | None = None, weak_homs: bool = True,
            include_tables: bool = True) -> AnalysisReport:
    if G.order % p:
        raise PrimeNotDividing(f"{p} does not divide |G| = {G.order}")
    field_spec = field_spec or FieldSpec(p)
    mismatches: list[str] = []

    ctx0 = _stage("sylow", PLocalContext, G, p)
    G0, proper = _stage("core", strongly_embedded_core, ctx0)
    core = {
        "order": G0.order,
        "proper": proper,
        "elements": G0.sorted.tolist(),
    }
    if proper:
        core["strongly_p_embedded"] = is_strongly_p_embedded(G, G0, p)
        core["note"] = ("G0 is a proper strongly p-embedded subgroup; restriction to G0 is an isomorphism on "
                        "endotrivial modules, so the analysis below was rerun on G0 and transported")
        H = G0.as_group(name=f"G0({G.name or 'G'})")
        ctx = _stage("sylow", PLocalContext, H, p)
    else:
        H, ctx = G, ctx0
    lift = _Lift(G, H)
    S, N = ctx.sylow, ctx.normalizer

    kind = ctx.sylow_class.kind
    rec: Recognition | None = recognize(S, p) if p != 2 else None
    e_central = None
    if rec is not None and rec.kind != "cyclic":
        e_central = ctx.omega1 <= ctx.center
    sylow = {
        "order": S.order,
        "elements": lift.sub(S),
        "class": kind,
        "metacyclic": rec.to_dict() if rec else None,
        "omega1": lift.sub(ctx.omega1),
        "center": lift.sub(ctx.center),
        "e_central": e_central,
    }

    controls, violation = _stage("fusion", controls_fusion, ctx, N)
    fusion = {
        "normalizer_controls_fusion": controls,
        "violation": None if violation is None else {
            "subgroup": lift.sub(violation.subgroup),
            "element": lift.one(violation.element),
            "explanation": violation.explanation,
        },
    }
    if rec is not None and rec.kind != "cyclic" and not controls:
        mismatches.append("metacyclic Sylow but N_G(S) does not control fusion")

    poset = _stage("poset", orbit_poset_components, H, p, S)

    pi = _stage("chain closure", chain_closure, ctx)
    R = pi.subgroup
    if not pi.normal:
        mismatches.append("R is not normal in N_G(S)")
    closed = _stage("closed form", closed_form_central, ctx)
    closed_agrees = closed.subgroup == R
    if closed.applicable and not closed_agrees:
        mismatches.append("closed form for central Omega_1 differs from chain closure")

    split_info = None
    if rec is not None and rec.split:
        sm = _stage("split metacyclic", split_metacyclic_kernel, ctx, rec)
        split_info = {"case": sm.case, "subgroup": lift.sub(sm.subgroup), "agrees": sm.subgroup == R,
                      "choice_independent": sm.choice_independent}
        if not split_info["agrees"]:
            mismatches.append("split metacyclic closed form differs from chain closure")
        if not sm.choice_independent:
            mismatches.append("split metacyclic closed form depends on the choice of Q")

    rho_full = _stage("rho", rho_infinity, ctx)
    rho_small = _stage("rho", rho_infinity, ctx, restrict_to_omega1=True)
    rho_quot = abelianization_invariants(quotient(N, rho_full.limit).as_group()) if rho_full.limit != N else []
    consistent = pprime_part(pi.abelianization, p) == pprime_part(rho_quot, p)
    if rho_full.limit != rho_small.limit:
        mismatches.append("rho series differs when restricted to Omega_1(S)")
    if not consistent:
        mismatches.append("p'-parts of N/R and N/rho(S) differ")

    pi1 = {
        "R": lift.sub(R),
        "normalizer": lift.sub(N),
        "quotient_order": pi.quotient_order,
        "abelianization": pi.abelianization,
        "normal": pi.normal,
        "witnesses": [_lift_witness(w, lift) for w in pi.witnesses],
        "closed_form": {
            "subgroup": lift.sub(closed.subgroup),
            "omega1_central": closed.omega1_central,
            "normalizer_controls_fusion": closed.normalizer_controls_fusion,
            "applicable": closed.applicable,
            "agrees": closed_agrees,
        },
        "split_metacyclic": split_info,
        "rho_infinity": lift.sub(rho_full.limit),
        "rho_stabilized_at": rho_full.stabilized_at,
        "rho_restricted_agrees": rho_full.limit == rho_small.limit,
        "pprime_consistent": consistent,
        "oracle_agreement": closed_agrees if closed.applicable else (
            split_info["agrees"] if split_info else None),
    }

    K, NJ = _stage("K(G)", k_group, ctx, field_spec)
    J = abelianized_kernel(ctx)
    from_pi = hom_to_units(pi.abelianization, field_spec)
    k_info = {
        "invariants": list(K.invariants),
        "order": K.order,
        "J": lift.sub(J),
        "quotient_order": NJ.order,
        "from_pi1": list(from_pi.invariants),
        "j_equals_derived_times_r": None,
    }
    if closed.applicable:
        k_info["j_equals_derived_times_r"] = j_equals_derived_times_r(ctx, J, R)
        if not k_info["j_equals_derived_times_r"]:
            mismatches.append("J differs from N' R")
        if K.invariants != from_pi.invariants:
            mismatches.append("K(G) from J differs from Hom(N/R)")

    weak = {"attempted": False}
    if weak_homs and closed.applicable:
        chis = _stage("weak homs", rho2_characters, ctx, field_spec)
        thetas = [_stage("weak homs", build_weak_hom, ctx, chi, field_spec) for chi in chis]
        verdicts = [verify_weak_hom(ctx, th) for th in thetas]
        injective = len({th.values.tobytes() for th in thetas}) == len(thetas)
        weak = {
            "attempted": True,
            "count": len(thetas),
            "all_verified": all(ok for ok, _ in verdicts),
            "injective": injective,
        }
        if include_tables:
            domain = lift.many(range(H.order))
            order = np.argsort(lift.table, kind="stable")
            weak["domain"] = domain
            weak["tables"] = [{"modulus": th.modulus, "values": th.values[order].tolist()} for th in thetas]
        if not weak["all_verified"]:
            mismatches.append("a constructed weak S-homomorphism fails verification")
        if not injective:
            mismatches.append("distinct characters gave equal weak S-homomorphisms")

    structure = _structure(G, H, ctx, kind, rec, poset.component_count, K, field_spec, mismatches)

    data = {
        "group": {"name": G.name, "order": G.order, "degree": G.degree},
        "prime": p,
        "field": field_spec.describe(),
        "element_table": G.perms.tolist(),
        "sylow": sylow,
        "core": core,
        "fusion": fusion,
        "poset": {"orbit_count": poset.orbit_count, "component_count": poset.component_count},
        "pi1": pi1,
        "k_group": k_info,
        "weak_homs": weak,
        "structure": structure,
        "notes": [CITATION_NOTE],
    }
    return AnalysisReport(data, mismatches)


def _lift_witness(w, lift: _Lift) -> dict:
    return {
        "start": lift.sub(w.start),
        "subgroups": [lift.sub(Q) for Q in w.subgroups],
        "elements": [lift.one(g) for g in w.elements],
        "product": lift.one(w.product),
    }


def _structure(G, H, ctx, kind, rec, rank, K, field_spec, mismatches) -> dict:
    p = ctx.p
    out = {
        "torsion_free_rank": rank,
        "torsion_free_generator": "[Omega(k)]" if rank == 1 else None,
    }
    if kind == "cyclic":
        E = omega1(ctx.sylow, p)
        NE = ctx.normalizer_of(E).as_group()
        inner = PLocalContext(NE, p)
        KE, _ = k_group(inner, field_spec)
        out["torsion"] = {
            "description": "finite: extension of K(N_G(E)) by the cyclic group generated by [Omega(k)]",
            "k_of_normalizer_of_omega1": list(KE.invariants),
            "extension_class": "not computed (module-theoretic)",
        }
        return out
    if rec is not None and rec.kind == "nonsplit" and ctx.sylow.order > 1 and not ctx.sylow.is_abelian():
        nilpotent = is_p_nilpotent(H, p)
        if not nilpotent:
            mismatches.append("nonsplit metacyclic Sylow but G is not p-nilpotent")
        ab = hom_to_units(abelianization_invariants(H), field_spec)
        out["p_nilpotent"] = nilpotent
        out["torsion"] = {"description": "Hom(G/G', k^x)", "invariants": list(ab.invariants)}
        return out
    if kind == "other":
        out["torsion"] = {"description": "K(G)", "invariants": list(K.invariants)}
    else:
        out["torsion"] = {"description": f"K(G) extended by TT(S) ({kind} Sylow), not resolved here",
                          "invariants": list(K.invariants)}
    if rec is not None and rec.kind != "cyclic":
        out["p_nilpotent"] = is_p_nilpotent(H, p)
    return out
