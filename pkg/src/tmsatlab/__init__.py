"""Desk-scale laboratory for machine-to-CNF reductions.

Subpackages: machine simulation (`machine`), the labeled CNF reduction
(`reduction`), the SAT backend (`sat`), the parity-counting library
machine (`parity`), propositional argument checking (`argument`), and
the fixture corpus (`fixtures`, `corpus`).
"""

__version__ = "0.1.0"
