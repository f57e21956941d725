"""Which harmonics of a doubly-periodic background are unstable?

The constant background u = a of the focusing DS2 equation is unstable
against the lattice harmonic (k_x, k_y) = (2 pi n_x / L_x, 2 pi n_y / L_y)
exactly when k^2 < 4 a^2 and k_x^2 != k_y^2.  This script prints the
census for the two benchmark tori used throughout the package and shows
what a non-generic choice of periods looks like.
"""

import math

from ds2aw import check_genericity, enumerate_modes

for label, L_x, L_y in [
    ("four unstable classes", 2 * math.pi / 1.2, 2 * math.pi / 1.4),
    ("single unstable class", 2 * math.pi / 1.2, 2 * math.pi / 2.1),
]:
    print(f"\n== {label}:  L_x = {L_x:.6f}, L_y = {L_y:.6f}")
    print(f"{'n':>8} {'k_x':>8} {'k_y':>8} {'sigma':>22} unstable")
    for m in enumerate_modes(L_x, L_y, a=1.0):
        if m.n_x < 0 or (m.n_x == 0 and m.n_y < 0):
            continue  # print one representative per +/- class
        tag = "  <-- unstable" if m.unstable else ""
        print(
            f"({m.n_x:>3},{m.n_y:>3}) {m.k_x:8.3f} {m.k_y:8.3f} "
            f"{m.sigma:>22.6f}{tag}"
        )
    report = check_genericity(L_x, L_y, 1.0)
    print("genericity ok:", report.ok)

# A square torus of side 2 pi puts the (1, 1) harmonic exactly on the
# diagonal k_x^2 = k_y^2 inside the disk: its growth rate vanishes to
# leading order and the genericity report flags it.
print("\n== non-generic square torus, L_x = L_y = 2 pi")
report = check_genericity(2 * math.pi, 2 * math.pi, 1.0)
print("genericity ok:", report.ok)
print("marginal modes:", [(m.n_x, m.n_y) for m in report.marginal_modes])

# Periods with a harmonic exactly on the instability circle k^2 = 4 are
# rejected as well: the handle-opening formulas lose their scale there.
print("\n== circle hit, L_x = pi")
report = check_genericity(math.pi, 2 * math.pi, 1.0)
print("genericity ok:", report.ok)
print("on-circle:", [(m.n_x, m.n_y) for m in report.on_circle_violations])
