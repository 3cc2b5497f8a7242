"""Gauss-Jacobi quadrature and the weighted orthonormal disc bases.

The radial building block of everything else in this package is a family of
weighted functions: an orthonormal Jacobi polynomial in x = 2r - 1 multiplied
by the square root of its own weight.  That square-root trick makes the
family orthonormal under the *unweighted* inner product on the coordinate
box, which is what later permits a skew-symmetric differentiation matrix.

Run:  python3 demos/01_quadrature_and_bases.py
"""

import numpy as np

from ballspec.basis import BasisSpec, wfunc_radial
from ballspec.jacobi import JacobiParams, gauss_jacobi, gauss_jacobi_01, orthonormal_all

# --- a Gauss-Jacobi rule and its exactness ---------------------------------

params = JacobiParams(2.0, 2.0)
rule = gauss_jacobi(12, params)
print("Gauss-Jacobi rule, weight (1-x)^2 (1+x)^2, 12 nodes")
print("  nodes in (-1, 1):", rule.nodes.min() > -1 and rule.nodes.max() < 1)
print("  weight sum      :", np.sum(rule.weights), "(expected 16/15 * ... = B(3,3)*2^5)")

vals = orthonormal_all(10, params, rule.nodes)
gram = (vals * rule.weights) @ vals.T
print("  orthonormality  : max |G - I| =", np.max(np.abs(gram - np.eye(11))))

# --- the weighted family on [0, 1] -----------------------------------------

spec = BasisSpec(alpha=2.0, beta=2.0, d=2, N=8, K=0)
r, w = gauss_jacobi_01(32, 0.0, 0.0)  # plain Legendre rule on [0, 1]
profiles = np.array([wfunc_radial(spec, n, r) for n in range(9)])
gram = 2.0 * np.pi * (profiles * w) @ profiles.T
print("\nWeighted radial family, alpha = beta = 2")
print("  unweighted-product orthonormality: max |G - I| =",
      np.max(np.abs(gram - np.eye(9))))
print("  vanishes at both endpoints:",
      float(wfunc_radial(spec, 3, 0.0)) == 0.0 and float(wfunc_radial(spec, 3, 1.0)) == 0.0)
print("\nBecause each basis function vanishes at r = 0, a field with a nonzero")
print("value at the origin cannot converge pointwise there -- that is why the")
print("orthogonal splitting of demo 03 exists.")
