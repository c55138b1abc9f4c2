"""Real dessins d'enfants of ``x^a (1-x)^b P^m / Q^m`` and their audits."""

from .audit import (
    PropositionAudit,
    SimplicityReport,
    Thm2Result,
    check_cycle_rule,
    check_invariants,
    check_simple,
    proposition_audit,
    verify_thm2,
)
from .phi import PhiSpec, RationalMap, build_phi, odd_rational_approx
from .render import emit_dessin
from .trace import Dessin, DessinEdge, DessinVertex, trace_dessin

__all__ = [
    "Dessin",
    "DessinEdge",
    "DessinVertex",
    "PhiSpec",
    "PropositionAudit",
    "RationalMap",
    "SimplicityReport",
    "Thm2Result",
    "build_phi",
    "check_cycle_rule",
    "check_invariants",
    "check_simple",
    "emit_dessin",
    "odd_rational_approx",
    "proposition_audit",
    "trace_dessin",
    "verify_thm2",
]
