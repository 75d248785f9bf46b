"""Twisted-conjugation invariants of compact simply connected Lie groups.

Exact root data and twisted alcoves, SU(N) class projections, and Monte-Carlo
reconstruction of the polytopes formed by products of twisted conjugacy
classes, with an exact SU(3) verification suite.
"""

__version__ = "0.1.0"

from .alcove import TwistedAlcove, fold_to_twisted_alcove, untwisted_alcove
from .errors import (
    ConfigurationError,
    InputDataError,
    InternalError,
    NumericError,
    ResourceError,
    TwistConjError,
    ValidationError,
)
from .hull import Polygon2, hausdorff, hull_2d, polytope_compare, su3_reference_slice
from .rootsys import RootDatum, WeylElement, build_root_datum, fold_to_chamber, generate_weyl_group
from .sampler import (
    MembershipResult,
    ProductProblem,
    SampleCloud,
    horn_sum_sample,
    membership_test,
    product_image_sample,
    product_problem,
    sample_class_element,
    support_maximize,
    twisted_commutator_sample,
)
from .sun import (
    ClassPoint,
    OracleResult,
    TwistRealization,
    UnitaryElement,
    adjoint_twist_operator,
    change_twist_chain,
    class_form_kernel,
    class_point,
    class_point_oracle,
    haar_sample,
    holonomy_product_setup,
    ordinary_class_point,
    square_map,
    torus_exp,
    twist_realization,
    twisted_conjugate,
    unitary,
)
from .twist import (
    TwistData,
    build_twisted_alcove,
    centralizer_weyl,
    diagram_automorphism,
    named_permutation,
    project_lattice,
    verify_lattice,
)
