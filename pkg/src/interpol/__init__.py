"""Sequent-calculus workbench: proof search and Craig/Lyndon/uniform interpolation."""

__all__ = [
    "syntax",
    "sequents",
    "calculi",
    "search",
    "kripke",
    "maehara",
    "pitts",
    "multiform",
    "classify",
    "cli",
]
