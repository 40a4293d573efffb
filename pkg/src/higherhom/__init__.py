"""Exact higher homological algebra over bound quiver algebras."""
from .approximation import (
    DSequence,
    Subcategory,
    add_decompose,
    d_cokernel,
    d_kernel,
    left_approximation,
    m_resolution,
    right_approximation,
    verify_d_exact,
)
from .decomposition import decompose, find_isomorphism, is_indecomposable, is_isomorphic
from .functors import (
    build_auslander_algebra,
    e_restrict,
    is_effaceable,
    left_d_exactness_check,
    quotient_equivalence_report,
    yoneda_module,
)
from .linalg import Matrix
from .modules import (
    Module,
    ModuleMap,
    dualize,
    ext_dim,
    hom_basis,
    hom_dim,
    projective_resolution,
    simple_module,
    std_injective,
    std_projective,
    tau,
    tau_inverse,
)
from .problem import load_fixture, load_problem, parse_problem
from .quiver import Quiver, build_algebra, opposite_algebra, validate_algebra
from .tilting import (
    IndecAtlas,
    certify_atlas,
    check_cotorsion_pair,
    ext_table,
    is_d_cluster_tilting,
    is_d_rigid,
    search_d_ct,
)

__version__ = "0.1.0"


def clear_caches():
    """Drop every memoised Hom, Ext and decomposition result."""
    from . import approximation, decomposition, modules, tilting

    for fn in (modules.hom_basis, modules.hom_space, modules.std_projective, modules.ext_dim,
               decomposition.trace_form, approximation._add_decompose, tilting._certify):
        fn.cache_clear()
