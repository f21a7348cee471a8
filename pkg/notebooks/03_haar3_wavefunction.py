# The haar3 wavefunction on the triangular lattice: numerical synthesis vs the
# closed form, the large-|y| asymptote, and the norm on a sheared window.
import numpy as np

from landau_mra.filters import builtin
from landau_mra.landau import (
    LLLState, default_window, haar3_asymptotic, haar3_closed_form, norm2, tail_mass_estimate,
)
from landau_mra.lattice import TRIANGULAR, make_lattice

lat = make_lattice(TRIANGULAR, 3)
psi = LLLState.from_filter(builtin("haar3"), lat)

x = np.array([0.0, 1.0, -2.0, 3.5])
y = np.array([0.0, 0.5, 1.5, -2.0])
num = psi(x, y)
ref = haar3_closed_form(x, y)
for xi, yi, p, r in zip(x, y, num, ref):
    print(f"({xi:5.2f}, {yi:5.2f})  synth {p:.8f}  closed {r:.8f}  |diff| {abs(p - r):.1e}")

# far from the centre the Gaussian-windowed sinc takes over
a = lat.a
for yy in (10 * a, -10 * a):
    xx = 3.0 + yy / np.sqrt(3)
    print(f"y = {yy:7.2f}: closed {abs(haar3_closed_form(xx, yy)):.3e}  asymptotic {abs(haar3_asymptotic(xx, yy)):.3e}")

# the |psi|^2 tail in y decays like 1/y^2, so the norm converges slowly
w = default_window(lat)
print(f"norm^2 on |y| <= {w.y_range[1]:g}: {norm2(psi, w):.6f} (expected deficit ~ {tail_mass_estimate(w):.1e})")
