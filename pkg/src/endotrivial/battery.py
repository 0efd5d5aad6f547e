"""Built-in suites of groups, run through the full analysis."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import groups
from .characters import FieldSpec
from .errors import GroupError, UnknownSuite
from .metacyclic import construct, presentation_grid, structural_data
from .report import AnalysisReport, analyze

DEFAULT_SUITE: list[tuple[str, int]] = [
    ("S3", 3),
    ("C3xC3", 3),
    ("A4", 2),
    ("A5", 2),
    ("S4", 2),
    ("SL(2,3)", 3),
    ("M27", 3),
    ("M27:C2", 3),
    ("metacyclic(3,2,2,1,1)", 3),
    ("metacyclic(3,2,2,1,1)xC2", 3),
    ("C3xC3:inv", 3),
]

EXTENDED_SUITE = DEFAULT_SUITE + [
    ("SL(2,3)", 2),
    ("Q8", 2),
    ("3^(1+2)_+", 3),
    ("M125:C4", 5),
    ("C7:M27", 3),
    ("nonsplit(3,3,3,1,2)", 3),
]

SUITES = {"default": DEFAULT_SUITE, "extended": EXTENDED_SUITE}


@dataclass
class BatteryItem:
    label: str
    prime: int
    report: AnalysisReport | None = None
    error: str | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())


def _checks(report: AnalysisReport) -> dict[str, bool]:
    d = report.data
    pi, k, weak = d["pi1"], d["k_group"], d["weak_homs"]
    out = {
        "no mismatch": not report.mismatch,
        "R normal": pi["normal"],
        "rho restriction": pi["rho_restricted_agrees"],
        "p'-consistency": pi["pprime_consistent"],
    }
    if pi["closed_form"]["applicable"]:
        out["closed form"] = pi["closed_form"]["agrees"]
        out["J = N'R"] = bool(k["j_equals_derived_times_r"])
    if pi["split_metacyclic"]:
        out["split metacyclic"] = pi["split_metacyclic"]["agrees"]
    if weak["attempted"]:
        out["weak homs"] = weak["all_verified"] and weak["injective"]
    if d["sylow"]["metacyclic"] and d["sylow"]["metacyclic"]["kind"] != "cyclic":
        out["fusion control"] = d["fusion"]["normalizer_controls_fusion"]
    return out


def run_grid(primes=(3, 5), max_total: int = 6) -> list[BatteryItem]:
    items = []
    for pres in presentation_grid(primes, max_total):
        data = structural_data(construct(pres), strict=False)
        checks = {name: name not in data.mismatches for name in ("center", "omega", "cse")}
        checks["noncentral E <=> cyclic Z(S)"] = (not data.e_central) == data.center_cyclic
        checks["noncentral E <=> m = n + l"] = (not data.e_central) == data.criterion
        items.append(BatteryItem(f"metacyclic{pres.as_tuple()}", pres.p, checks=checks))
    return items


def run_battery(suite: str = "default", field_q: int | None = None, weak_homs: bool = True) -> list[BatteryItem]:
    if suite == "metacyclic-grid":
        return run_grid()
    if suite not in SUITES:
        raise UnknownSuite(suite)
    items = []
    for name, p in SUITES[suite]:
        item = BatteryItem(name, p)
        try:
            G = groups.NAMED[name]()
            field_spec = FieldSpec(p, field_q) if field_q else FieldSpec(p)
            item.report = analyze(G, p, field_spec, weak_homs=weak_homs, include_tables=False)
            item.checks = _checks(item.report)
        except GroupError as e:
            item.error = f"{type(e).__name__}: {e}"
        items.append(item)
    return items


def matrix(items: list[BatteryItem]) -> str:
    """Plain-text pass/fail matrix."""
    lines = []
    for it in items:
        status = "PASS" if it.passed else "FAIL"
        detail = it.error or ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in it.checks.items())
        lines.append(f"{status}  {it.label} (p={it.prime}): {detail}")
    return "\n".join(lines)
