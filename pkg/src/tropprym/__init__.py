"""Exact moments of tropical Jacobians and Prym varieties of double covers.

Subpackages: graph (metric multigraphs), morphism (harmonic morphisms and
double covers), matroid (graphic and signed matroids), poly (exact piecewise
polynomials), moments (moment formulas), trigonal (the trigonal construction),
pipeline (the genus <= 4 verification sweep), oracle (numeric ground truth),
jsonio (file formats), cli (command line).
"""

__version__ = "0.1.0"
