"""Process-calculus workbench: CCS and CSP semantics, equivalence checking and
corpus-scale checks of translations between the two."""

__version__ = "0.1.0"
