"""
Generalized Steinberg representations on a finite flag model
============================================================

For GL_3 over F_2 the full flags, the lines and the planes are finite sets.
Locally constant functions on them form the fundamental complex, whose only
homology is the Steinberg representation.
"""

from periodlab import (
    StalkSelector,
    assemble_fundamental_complex,
    build_finite_flag_model,
    homology_dims,
    steinberg_dimension,
)
from periodlab.fundcomplex import all_subsets

m = build_finite_flag_model(3, 2)
print({tuple(sorted(I)): m.size(I) for I in all_subsets(2)})

c = assemble_fundamental_complex(m, StalkSelector.full(m))
print(c.dims, homology_dims(c))

# Each X_I splits into generalized Steinberg pieces, one per I' containing I.
for I in all_subsets(2):
    print(sorted(I), steinberg_dimension(3, 2, I))
