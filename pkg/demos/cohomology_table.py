"""
Cohomology of Drinfeld's upper half spaces
==========================================

The degree rule is not fixed in advance. We calibrate it on GL_2 and GL_3 and
then read off the table for GL_4.
"""

from periodlab import calibrate_degree_function, cohomology_table, drinfeld_datum, duality_report

rule = calibrate_degree_function(3)
print(rule)

for d in (1, 2, 3):
    table = cohomology_table(drinfeld_datum(d), rule)
    for s in table:
        print(d, s.cohomological_degree, s.i_set_label(), s.rho_twist)

# Pairing degree k with 2d - k moves {0..d} onto {d..2d}.
report = duality_report(cohomology_table(drinfeld_datum(2), rule), 2, q=2)
print(report.occupied, report.dual_slots)
print([p["dimension"] for p in report.pairs])
