# The orthonormality condition in the Zak representation: J_d is flat and
# equal to d/2pi exactly when the filter is orthonormal.
import math

from landau_mra.filters import FilterBank, builtin
from landau_mra.lattice import TRIANGULAR, make_lattice
from landau_mra.zak import j_d_flatness, t_d_zak_function

lat = make_lattice(TRIANGULAR, 3)
for f in (builtin("haar3"), builtin("haar2")):
    z = t_d_zak_function(f, lat)
    rep = j_d_flatness(z, f.d, grid_n=32)
    print(f"{f.name}: target {rep.target:.6f}, max deviation {rep.max_deviation:.2e}")

# scale the Haar filter by 1.1 and the flatness is lost by a factor 1.21
f = FilterBank(3, {n: 1.1 / math.sqrt(3) for n in range(3)})
rep = j_d_flatness(t_d_zak_function(f, lat), 3, grid_n=32)
print(f"scaled haar3: values in [{rep.values.min():.4f}, {rep.values.max():.4f}]")
