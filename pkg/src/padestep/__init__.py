"""padestep - high-order implicit time stepping with controllable numerical dissipation."""

__version__ = "0.1.0"
