"""Computational kernel for the complex hyperbolic plane and a census of
the four-parameter family of disc bundle examples built from bisector
quadrangles.

The geometric layers build on each other: `hermitian` (the form, points,
tances, projections and reflections), `isometry` (matrix isometries and
their restriction to complex slices), `bisector` (bisectors, cotranchal
pairs and transport between slices), `triangle` (triangles of pairwise
ultraparallel slices, their invariants and holonomy), `quadrangle` (the
(n, l, k, p) family, its conditions and invariants), and `potential`
(the primitive of the symplectic form and the rotation number as a
boundary integral).  `scan`, `sweep`, `tables` and `cli` drive the
census and compare it with the bundled catalogues.
"""

from .hermitian import (
    J_DIAG,
    PointClass,
    TangentRep,
    classify,
    dist,
    form,
    gram3,
    midpoint_polar,
    norm2,
    normalize_phase,
    proj_par,
    proj_perp,
    pvec,
    reflection,
    slice_basis,
    tance,
    tance_to_bisector,
    tance_to_slice,
)
from .isometry import (
    DegeneracyError,
    SliceAction,
    SliceClass,
    StabilizationError,
    boundary_angle,
    cyclic_order,
    inverse,
    is_form_unitary,
    l_part_indicator,
    restrict_to_slice,
)
from .isometry import classify as classify_action
from .bisector import (
    STRICT_MARGIN,
    Bisector,
    bisector_value,
    containment_value,
    cotranchal_angle,
    cotranchal_slack,
    cotranchal_transversal,
    halfspace_sign,
    normal_vector,
    separability_probe,
    slice_transport,
    tangency_test,
    transversality_oracle,
)
from .triangle import (
    PropertyViolation,
    TriangleInv,
    TrianglePolars,
    classify_triangle,
    cplane_area,
    deformation_path,
    holonomy,
    holonomy_abs_trace,
    invariants,
    is_ccw,
    is_transversal,
    realize,
    region_member,
    transversality_slack,
)
from .quadrangle import (
    DEFAULT_Z_SEED,
    Params,
    QuadrangleData,
    build,
    check_conditions,
    compute_f,
    degree,
    euler,
    genus,
    orbifold_euler,
    orbifold_toledo,
    t_of,
    toledo,
    verify_identities,
)
from .potential import check_dP, f_pot, omega, potential, toledo_by_integral
from .sweep import (
    ExampleRecord,
    SweepConfig,
    SweepResult,
    check_tuple,
    run_sweep,
    verify_laws,
    write_csv,
    write_jsonl,
)
from .scan import scan_n
from .tables import load_extremes, load_n101, load_real_hyperbolic

__version__ = "0.1.0"
