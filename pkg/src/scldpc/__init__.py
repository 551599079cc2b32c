"""Design and analysis tools for time-invariant SC-LDPC convolutional codes."""

from scldpc.core import (
    CodeProfile,
    ParseError,
    SymbolicMatrix,
    SyndromeFormer,
    expand_parity_check,
    parse_matrix,
    profile,
    read_matrix,
    symbolic_from_syndrome_former,
    syndrome_former_from_symbolic,
)
from scldpc.cycles import brute_force_girth_oracle, cycle_spectrum, girth

__version__ = "0.1.0"

__all__ = [
    "CodeProfile",
    "ParseError",
    "SymbolicMatrix",
    "SyndromeFormer",
    "brute_force_girth_oracle",
    "cycle_spectrum",
    "expand_parity_check",
    "girth",
    "parse_matrix",
    "profile",
    "read_matrix",
    "symbolic_from_syndrome_former",
    "syndrome_former_from_symbolic",
    "__version__",
]
