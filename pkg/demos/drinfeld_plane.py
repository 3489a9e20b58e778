"""
The Drinfeld plane as a set of filtered isocrystals
===================================================

A point of P^2 over Q(t) gives a filtered isocrystal of rank 3 with trivial
Frobenius. It is weakly admissible exactly when the point avoids every
rational line. Below we check a few points both ways.
"""

from periodlab import (
    SearchConfig,
    drinfeld_filtered_isocrystal,
    drinfeld_membership,
    hn_filtration,
    is_weakly_admissible,
    model_field,
)

K = model_field("t")
t, = K.gens

# (1, t, t^2) is a generic point: the coordinates are independent over Q.
good = [K.one, t, t * t]
fi = drinfeld_filtered_isocrystal(good)
print(fi.filtration_type())
print(drinfeld_membership(good), is_weakly_admissible(fi).admissible)

# (1, t, 1 + t) lies on the rational line x + y = z.
bad = [K.one, t, 1 + t]
verdict = is_weakly_admissible(drinfeld_filtered_isocrystal(bad))
print(drinfeld_membership(bad), verdict.admissible)
print("destabilised by", [[str(x) for x in row] for row in verdict.violated_by], "of degree", verdict.degree)

# The Harder-Narasimhan filtration of the bad point starts with that subspace.
report = hn_filtration(drinfeld_filtered_isocrystal(bad), SearchConfig(2))
for piece in report.pieces:
    print(piece.rank, piece.degree, piece.slope)
