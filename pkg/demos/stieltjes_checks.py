"""
Is it a Stieltjes series?
=========================

Run the battery of necessary conditions on both oscillator series and
compare the verdicts. Positivity of Hankel determinants goes beyond the
inequalities one can read off the staircase and is reported separately.
"""

from padestieltjes import diagnose, generate_pt_cubic, generate_quartic, hankel_determinant, map_coupling, moment_view
from padestieltjes.diagnostics import pade_family

ORDER = 60

cubic = generate_pt_cubic(ORDER)
quartic = generate_quartic(ORDER)

# the signs alternate, so (-1)^n c_(n+1) is a candidate moment sequence
mu = moment_view(cubic)
print("first moments:", [int(m) for m in mu.moments[:4]])
print("D(0, 1) =", hankel_determinant(mu, 0, 1))

# precompute the Pade family once per series; diagnose reuses it for each coupling
families = {"pt-cubic": pade_family(cubic, 12), "quartic": pade_family(quartic, 12)}

for lam in ("1/10", "1/2"):
    z_cubic = map_coupling(lam) / 40  # lambda^2
    rc = diagnose(cubic, z_cubic, digits=200, hankel_max=8, monotonicity_m_max=12, approximants=families["pt-cubic"])
    rq = diagnose(quartic, map_coupling(lam), digits=200, hankel_max=8, monotonicity_m_max=12, approximants=families["quartic"])
    print(f"lambda = {lam}")
    for name in rc.verdict:
        print(f"  {name:24s} {rc.verdict[name]!s:6s} {rq.verdict[name]}")
    print("  same verdicts:", rc.verdict == rq.verdict)

# Carleman partial sums keep growing, roughly like a power of the index
print("Carleman sums:", [round(float(s), 3) for s in rc.carleman_partial_sums[::10]])
print(rc.notes[0])
