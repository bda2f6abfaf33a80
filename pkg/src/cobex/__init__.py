"""Exact coboundary expansion of finite pure simplicial complexes over GF(2)."""

from .complexes import (
    PureComplex,
    Subcomplex,
    build_complex,
    induced_subcomplex,
    read_facet_file,
    simplex_complex,
    write_facet_file,
)
from .expansion import (
    DEFAULT_BUDGET,
    BoundCertificate,
    ExpansionResult,
    coset_norm,
    exact_expansion,
    matroid_lower_bound,
    norm,
    partition_lower_bound,
    simplex_lower_bound,
    singleton_upper_bound,
    weyl_lower_bound,
)
from .f2 import BitChain, boundary, chain_from_faces, coboundary, reduced_betti
from .filling import (
    BuildingLike,
    FillingFamily,
    GSet,
    PermGroup,
    SubcomplexFamily,
    build_filling,
    certified_bounds,
    face_load_report,
    matroid_span_family,
    max_orbit_overlap,
    verify_structure,
    whole_complex_family,
)
from .matroids import (
    balanced_upper_cochain,
    explicit_family_load,
    explicit_filling_chains,
    load_closed_form,
    matroid_complex,
    partition_matroid,
)
from .buildings import build_building, degree_disparity, top_expansion_survey
from .tester import TesterConfig, run_tester

__version__ = "0.1.0"
