"""ctclab: simulate and contrast models of systems on closed timelike curves.

Three engines under one roof: the quantum fixed-point (Deutsch) model on
density matrices, a classical finite-ontology model on permutations, and
the toybit (Spekkens-style) epistemically restricted model. Each reports
consistency paradoxes, concealed paradoxes, CTC-induced boundary
conditions, and knowledge-balance violations; the scenario runner replays
the named worked examples.
"""

from . import deutsch, linalg, ontic, scenario, toy
from .deutsch import DeutschChannel, SolverError, bell_swap_scenario, run_deutsch_circuit
from .ontic import EpistemicDistribution, Permutation
from .scenario import Scenario, canonical_json, paper_examples, run, verify_all
from .toy import ToyEpistemicState, ToyMeasurement, ToyTransformation

__version__ = "0.1.0"

__all__ = [
    "deutsch", "linalg", "ontic", "scenario", "toy",
    "DeutschChannel", "SolverError", "bell_swap_scenario", "run_deutsch_circuit",
    "EpistemicDistribution", "Permutation",
    "Scenario", "canonical_json", "paper_examples", "run", "verify_all",
    "ToyEpistemicState", "ToyMeasurement", "ToyTransformation",
    "__version__",
]
