"""Submonoid membership certificates, witnesses, and their generators."""

from .certificate import (
    Axiom,
    Certificate,
    Conj,
    Identity,
    Mul,
    Rewrite,
    Root,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
)
from .hypotheses import fixed_point_hypotheses
from .propd import property_d_certificate, property_d_inputs
from .satellite import satellite_certificate, satellite_inputs
from .v2503 import V2503Bundle, v2503_bundle, v2503_presentation
from .witness import (
    FreeCancel,
    FreeInsert,
    RelatorDelete,
    RelatorInsert,
    WitnessBuilder,
    check_equality_witness,
    replay_witness,
)

__all__ = [
    "Axiom",
    "Certificate",
    "Conj",
    "Identity",
    "Mul",
    "Rewrite",
    "Root",
    "certificate_from_json",
    "certificate_to_json",
    "check_certificate",
    "fixed_point_hypotheses",
    "property_d_certificate",
    "property_d_inputs",
    "satellite_certificate",
    "satellite_inputs",
    "V2503Bundle",
    "v2503_bundle",
    "v2503_presentation",
    "FreeCancel",
    "FreeInsert",
    "RelatorDelete",
    "RelatorInsert",
    "WitnessBuilder",
    "check_equality_witness",
    "replay_witness",
]
