"""Toolkit for Artin-group diagram calculus.

Layers, bottom to top: `dynkin` (labeled diagrams, classification,
foldings), `coxeter` (finite Coxeter engines and coset gates), `garside`
(normal forms, gcd/lcm lattice, parabolic restriction, conjugators),
`complexes` (coset balls, apartments, links), `checks` (girth, labeled
4-wheel, bowtie, linear order), `theorem_gate` (hypothesis gates with
certificates), `cli` (the `artinkit` command).
"""

from . import checks, cli, complexes, coxeter, dynkin, errors, garside, theorem_gate
from .dynkin import DynkinDiagram, classify, parse_diagram
from .garside import from_letters, serialize
from .complexes import build_ball
from .theorem_gate import gate_all, overall

__version__ = "0.1.0"

__all__ = [
    "DynkinDiagram",
    "build_ball",
    "checks",
    "classify",
    "cli",
    "complexes",
    "coxeter",
    "dynkin",
    "errors",
    "from_letters",
    "garside",
    "gate_all",
    "overall",
    "parse_diagram",
    "serialize",
    "theorem_gate",
    "__version__",
]
