"""Five-vector field toolkit.

Lattice geometry, bivector algebra, connections and curvature for a
4+1-split formulation: four spacetime directions plus one distinguished
fifth direction, with the antisymmetric pairs of the five directions
acting as a ten-dimensional adjoint space.

Modules
-------
lattice
    Periodic grids, finite differences, analytic metric presets.
algebra
    Slot conventions, five-metric, bivector operations, generator
    tables and their closure checks.
connections
    Four- and five-index connections, torsion/contorsion maps, the
    adjoint transport table and covariant derivatives.
curvature
    Commutators, structure functions, curvature blocks, differential
    identities and flatness checks.
gravity
    Field equations, conservation identities and closed-form duals.
gauge
    Bundle connections over adjoint directions, field strength,
    covariance and closure probes.
electro
    The coupled potential/tensor system: invariants, field equations,
    exact dispersion, mode decomposition and a 1+1D evolver.
integration
    Adjoint-valued forms over parametrized surfaces: first/second kind
    integrals, duality and the boundary-versus-volume comparison.
cli
    The ``fivevec`` command-line verification harness.
"""

from .algebra import (
    ADJ_PAIRS,
    E_SLOTS,
    FIFTH,
    FiveMetric,
    Z_SLOTS,
    adjoint_pair,
    adjoint_wedge,
    basis_bivector,
    expand_bivector,
    join_bivector,
    m_matrix_4,
    m_matrix_5,
    poincare_algebra_check,
    poincare_generators,
    restrict_bivector,
    slot_index,
    slot_pair,
    split_bivector,
    wedge_chain,
)
from .connections import (
    BivectorConnection,
    Connection4,
    ContorsionForm,
    FiveConnection,
    bivector_connection_G,
    bivector_derivative,
    contorsion_from_torsion,
    covariant_derivative,
    five_connection_local_symmetric,
    five_connection_sigma,
    five_torsion,
    levi_civita,
    modified_divergence,
    sigma_map,
    torsion_from_contorsion,
    torsion_of_connection,
    torsion_trace,
    torsionful_connection,
)
from .curvature import (
    bianchi_residual,
    bivector_commutator,
    curvature_R4,
    curvature_R5,
    curvature_R10,
    curvature_pair,
    five_curvature,
    flatness_commuting_basis_check,
    jacobi_defect,
    jacobi_residual,
    k_tensor,
    q_constants,
    riemann_tensor,
)
from .electro import (
    EMState,
    Evolver1D,
    EvolverState,
    FourierMode,
    dispersion_spectrum,
    em_strength_components,
    evolve,
    lagrangian_coefficients,
    measure_frequency,
    mode_decompose,
    scalar_invariants,
    sourced_residual,
    vacuum_residual,
)
from .gauge import (
    GaugeConnection,
    df_zero_check,
    five_gauge_from_bivector,
    five_gauge_strength,
    gauge_bianchi_residual,
    gauge_curvature_operator,
    gauge_field_strength,
    gauge_transform,
)
from .gravity import (
    Constants,
    MatterSources,
    conservation_residual,
    einstein_tensor,
    field_equation_residuals,
    identity_einstein_divergence,
    identity_tmod_divergence,
    kibble_sciama_residual,
    kibble_sciama_solve,
    modified_torsion,
    y3_tensor,
    y4_tensor,
    y_tensor_closed,
    z_tensor,
)
from .integration import (
    ParametrizedSurface,
    duality_residual,
    integral_first_kind,
    integral_second_kind,
    stokes_residual,
)
from .lattice import (
    MINKOWSKI,
    Grid4,
    MetricField,
    make_grid,
    metric_preset,
    partial_derivative,
    periodic_box_grid,
    volume_density,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
