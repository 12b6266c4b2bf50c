"""
qudecide

Decides whether a finite set of one-qudit gates in SU(d) generates a dense
subgroup, a proper subgroup detected by the adjoint commutant, or a finite
group. Ships brute-force closure and epsilon-net oracles for cross-checks.
"""

__version__ = "1.0.0"
