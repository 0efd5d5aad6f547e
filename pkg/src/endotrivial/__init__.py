"""p-local invariants of finite groups behind the torsion of endotrivial modules."""

from __future__ import annotations

from .abelian import abelian_invariants
from .characters import FieldSpec, build_weak_hom, characters_vanishing_on, hom_to_units, k_group, verify_weak_hom
from .fusion import controls_fusion, is_strongly_p_embedded, orbit_poset_components, strongly_embedded_core
from .metacyclic import MetacyclicPresentation, construct, power_rule, recognize, structural_data
from .perm import FiniteGroup, Permutation, Subgroup, closure, quotient, subgroup_generated
from .report import analyze
from .rho import abelianized_kernel, chain_closure, closed_form_central, rho_infinity, split_metacyclic_kernel
from .subgroups import PLocalContext, sylow_p

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "FiniteGroup", "MetacyclicPresentation", "PLocalContext", "Permutation", "Subgroup",
    "abelian_invariants", "abelianized_kernel", "analyze", "build_weak_hom", "chain_closure",
    "characters_vanishing_on", "closed_form_central", "closure", "construct", "controls_fusion",
    "hom_to_units", "is_strongly_p_embedded", "k_group", "orbit_poset_components", "power_rule",
    "quotient", "recognize", "rho_infinity", "split_metacyclic_kernel", "strongly_embedded_core",
    "structural_data", "subgroup_generated", "sylow_p", "verify_weak_hom",
]
