"""Modular symbols, Eisenstein quotients and Mazur-Tate elements for X_1(N p^r)
with coefficients in Z/p^K."""

__version__ = "0.1.0"
