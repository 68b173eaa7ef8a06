"""Entanglement coherence: the normalized Schmidt-basis coherence of a
bipartite pure state, with the measures it is tied to."""

from .errors import EntcohError
from .measures import (MeasureReport, ObservableBasis, ec_from_density, ec_from_schmidt,
                       ec_from_sqrt_matrix, entanglement_coherence, entropy_of_entanglement,
                       full_report, i_concurrence_norm, i_concurrence_sq, joint_basis_coherence,
                       max_skew_coherence_analytic, quantum_uncertainty, skew_coherence,
                       skew_information, standard_observable_basis, unified_entropy)
from .optimize import (BasisSearchResult, RoofEstimate, convex_roof_upper_bound,
                       maximize_skew_coherence)
from .states import (DensityOperator, PureBipartiteState, SchmidtDecomposition, make_psi1,
                     make_psi2, maximally_entangled, new_state, product_state, random_state,
                     reduced_density, schmidt_decompose)

__version__ = "0.1.0"
