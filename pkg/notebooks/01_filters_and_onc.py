# Haar filters, their orthonormality residuals, and the overlap matrix of the
# generated wavefunction computed entirely in s-space.
import numpy as np

from landau_mra.filters import FilterBank, builtin, validate_orthonormality, validate_sum_rule
from landau_mra.generator import from_filter, max_identity_deviation, onc_matrix
from landau_mra.lattice import TRIANGULAR, make_lattice

for name in ("haar2", "haar3"):
    f = builtin(name)
    rep = validate_orthonormality(f)
    print(f"{name}: max residual {rep.max_residual:.2e}, sum rule residual {validate_sum_rule(f):.2e}")

# a filter that is not orthonormal: lag-0 residual is |h|^2 - 1 = 1
bad = FilterBank(2, {0: 1, 1: 1})
print("unnormalised filter passes?", validate_orthonormality(bad).passed)

# overlaps <psi, T_1^n T_2^{3m} psi> on the d=3 sublattice
lat = make_lattice(TRIANGULAR, 3)
h = from_filter(builtin("haar3"), lat)
S = onc_matrix(h, lat, 2, 2)
np.set_printoptions(precision=3, suppress=True)
print(np.abs(S))
print("max |S - I| =", max_identity_deviation(S))
