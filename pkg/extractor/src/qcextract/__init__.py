"""Minimal HF + CISD engine exporting CIVEC wavefunction files."""

from .engine import ExtractionResult, run_extraction
from .export import civec_text, pattern_string
from .molecules import BUILTIN, MoleculeSpec, load_molecule
from .scf import ExtractionError

__version__ = "0.1.0"

__all__ = [
    "BUILTIN",
    "ExtractionError",
    "ExtractionResult",
    "MoleculeSpec",
    "civec_text",
    "load_molecule",
    "pattern_string",
    "run_extraction",
    "__version__",
]
