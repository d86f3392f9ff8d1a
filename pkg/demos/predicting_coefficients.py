"""
Predicting coefficients that were never used
============================================

A [k+n/k] approximant fits 2k+n+1 coefficients. Its Taylor expansion keeps
going, and those extra terms are estimates of the next coefficients. For a
Stieltjes series they undershoot the truth in magnitude.
"""

from padestieltjes import generate_quartic, phi_series, predict_coefficients, relative_error_table
from padestieltjes.report import format_prediction, format_relative_error

quartic = generate_quartic(60)

# [10/10] fits c_1..c_21; predict the next six
phi = phi_series(quartic, n=0, k=10, order=5, digits=200)
for r in predict_coefficients(phi, 6, quartic):
    print(r.series_index, format_prediction(r.predicted), format_prediction(r.truth), format_relative_error(r.relative_error))

# the first prediction along the staircase gets better quickly
for r in relative_error_table(quartic, [2, 10, 20, 40], digits=200):
    print(r.target_index - 1, format_relative_error(r.relative_error))
