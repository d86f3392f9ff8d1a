"""
Summing a divergent series with the epsilon algorithm
=====================================================

The energy shift of the PT-symmetric cubic oscillator is a power series in
lambda^2 whose coefficients grow factorially. Its partial sums blow up, yet
the staircase of Pade approximants settles on the energy.
"""

from padestieltjes import epsilon_table, generate_pt_cubic, generate_quartic, map_coupling, partial_sums
from padestieltjes.report import format_fixed, format_scientific

# exact integer coefficients; 60 orders take well under a second
cubic = generate_pt_cubic(60)
print([int(cubic[n]) for n in range(1, 6)])

# partial sums at lambda = 1/7
z = "1/49"
sums = partial_sums(cubic, z, 59)
print("s_59 =", format_scientific(sums[59]))

# the epsilon table turns the same sums into Pade approximants.
# even rows bound the energy from above, odd rows from below
table = epsilon_table(sums, 200)
staircase = table.staircase_values()
for n in (0, 1, 2, 3, 58, 59):
    print(n, format_fixed(staircase[n]))

# the anharmonic quartic oscillator at beta = 40 lambda^2 behaves the same way
quartic = generate_quartic(60)
beta = map_coupling("1/7")
qs = epsilon_table(partial_sums(quartic, beta, 59), 200).staircase_values()
print("beta =", beta, "->", format_fixed(qs[59]))

# width of the final bracket
print("cubic bracket", format_scientific(abs(staircase[59] - staircase[58])))
print("quartic bracket", format_scientific(abs(qs[59] - qs[58])))
