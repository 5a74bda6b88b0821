"""Jellium lattice energies: Epstein zeta functions, periodic Coulomb Green
functions, finite-domain one-component-plasma energies, and point-energy
minimization on flat tori and the 2-sphere."""

__version__ = "0.1.0"
