"""Sectional-curvature bound queries for algebraic curvature operators.

The package decides, exactly in dimension 4 and through convergent inner/outer
relaxation hierarchies in higher dimensions, whether a curvature operator
satisfies a sectional curvature bound, and produces verifiable certificates:
a shift x0 with R + x0 * positive semidefinite in dimension 4, sum-of-squares
Gram matrices for the inner hierarchy, and violated curvature-term indices for
the outer hierarchy.
"""

__version__ = "0.1.0"
