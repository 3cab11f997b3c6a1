"""Equivariant gl(N) link homology with its sl2 symmetry, exactly."""

__version__ = "0.1.0"

from .ring import Field
from .diagrams import LinkDiagram, parse_braid, parse_pd
from .complexes import cube_complex, frame_correct, simplify
from .homology import GradedHomology, decompose, locally_finite_parts
from .invariants import (
    invariance_suite,
    moy_polynomial,
    pdg_e_report,
    pdg_f_report,
    rasmussen_s,
    sl2_homology_report,
)

__all__ = [
    "Field",
    "LinkDiagram",
    "parse_braid",
    "parse_pd",
    "cube_complex",
    "frame_correct",
    "simplify",
    "GradedHomology",
    "decompose",
    "locally_finite_parts",
    "invariance_suite",
    "moy_polynomial",
    "pdg_e_report",
    "pdg_f_report",
    "rasmussen_s",
    "sl2_homology_report",
]
