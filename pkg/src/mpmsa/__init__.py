"""Desk-scale laboratory for interactive multi-particle Anderson Hamiltonians
on polynomially growing graphs: geometry, disorder, exact diagonalization,
multi-scale classification predicates, eigenvalue-concentration estimators
and decay-verification experiments."""

__version__ = "0.1.0"
