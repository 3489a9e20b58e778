"""Exact computations around p-adic period domains for GL_n."""

from .exactnum import FiniteField, ModelField, model_field, parse_rational, format_rational
from .polygons import (
    Polygon,
    hodge_polygon,
    newton_polygon_from_charpoly,
    polygon_compare,
    polygon_from_slopes,
)
from .isocrystal import (
    AdmissibilityVerdict,
    FilteredIsocrystal,
    HNReport,
    Isocrystal,
    NotPhiStable,
    SearchConfig,
    UnsupportedConfiguration,
    drinfeld_filtered_isocrystal,
    drinfeld_membership,
    enumerate_phi_stable_subspaces,
    hn_filtration,
    hn_invariants,
    induced_quotient,
    induced_sub,
    is_semistable,
    is_weakly_admissible,
    tensor_product,
)
from .rootdata import (
    CapacityError,
    GaloisAction,
    RootDatum,
    WeylElement,
    galois_orbits,
    kostant_representatives,
    weyl_group,
)
from .fundcomplex import (
    StalkSelector,
    assemble_fundamental_complex,
    build_finite_flag_model,
    homology_dims,
)
from .periodcoh import (
    DegreeFunction,
    DegreeRuleError,
    PeriodDatum,
    calibrate_degree_function,
    cohomology_table,
    drinfeld_datum,
    duality_report,
    flag_dimension,
    i_set,
    steinberg_dimension,
)

__version__ = "0.1.0"
