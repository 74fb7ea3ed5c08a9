"""Exact symbolic computations for the quantum toroidal gl(1) algebra:
shuffle-algebra generators, Fock modules, and truncated R-matrix blocks,
all over the field QQ(q1^(1/2), q2^(1/2), u, up)."""

__version__ = "0.1.0"
