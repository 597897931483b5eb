"""Exact-arithmetic toolkit for arrangements of complex projective lines.

Layers, bottom up:

- ratpoly: rationals, dense univariate and sparse multivariate polynomials,
  gcds, resultants, Sturm real-root machinery.
- parse: expression parser and canonical printer for polynomial data.
- branch: algebraic branch contexts Q[x]/(f) with lazy splitting.
- projective: points, lines, meets, joins, and transforms of the projective
  plane over a branch context.
- lattice: intersection lattices of explicit arrangements and their
  invariants.
- profiles: multiplicity-profile enumeration and combinatorial screening.
- moduli: realizability and moduli structure of abstract incidence
  specifications via exact elimination.
- casebook: a catalogue of recorded configurations with expected outcomes.
- render: SVG snapshots of real branches of an arrangement.
- cli: command-line entry points.
"""

__version__ = "0.1.0"
