"""Pseudorandom graph constructions and Hamilton-cycle machinery.

Finite-scale companions to a family of spectral results: explicit C2k-free
and K_{2,t}-free graphs (generalized polygons, LPS Cayley graphs, Furedi
orbit graphs), expander-mixing certificates, permanent bounds, 2-factor and
rotation machinery, and Hamilton path/cycle counting.
"""

__version__ = "0.1.0"
