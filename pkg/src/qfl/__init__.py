"""Executable quantum-foundations constructions: spins and measurement, pilot-wave
trajectories, relativistic wave equations, Fock space, Bogoliubov maps and
black-hole thermodynamics."""

__version__ = "0.1.0"
