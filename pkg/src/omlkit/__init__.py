"""Finite orthomodular lattices, their Boolean subalgebra posets, and
reconstruction of the lattice from that poset alone."""

from .bsa import AbstractPoset, BSAPoset, OrthoPartition, anonymize, enumerate_bsas
from .builders import (
    GreechieDiagram,
    boolean_algebra,
    bowtie,
    direct_product,
    from_greechie,
    greechie_chain,
    horizontal_sum,
    mo,
)
from .errors import (
    ElementError,
    NotBSAPosetError,
    OMLError,
    ParseError,
    ReconstructionError,
    ResourceError,
    StructuralError,
)
from .formats import parse_lattice, parse_poset, serialize_lattice, serialize_poset
from .iso import are_isomorphic, check_reconstruction, fingerprint
from .lattice import Lattice, verify
from .reconstruct import assemble, reconstruct

__version__ = "0.1.0"
