"""Perfectness of chain complexes over modular group algebras.

Exact computation over F_l[pi] for finite l-groups pi: group-algebra
arithmetic, module predicates (free == projective over this local ring),
bounded free chain complexes with minimalization, a perfectness decision
procedure producing minimal free replacements with quasi-isomorphism
witnesses, tower limits via stable images, and the integer-side toolkit
(Smith normal form, l-completion of finitely generated abelian groups).
"""

from .abelian import (
    FGAbelian,
    FGAbelianMap,
    FGZlModule,
    check_exactness,
    invariant_factors,
    l_complete,
    smith_normal_form,
)
from .cellular import EquivariantCellComplex, base_homology, chains_of_cover, lens_complex
from .chains import (
    ChainComplex,
    ChainMap,
    ModuleComplex,
    ModuleComplexMap,
    direct_sum,
    euler_characteristic,
    homology,
    identity_chain_map,
    induced_map_on_homology,
    is_quasi_iso,
    mapping_cone,
    minimalize,
    shift,
    zero_complex,
)
from .errors import (
    BoundarySquareNonzeroError,
    DimensionMismatchError,
    GroupMismatchError,
    HorizonExhaustedError,
    MaxDegreeError,
    NotAGroupError,
    NotAnLGroupError,
    NotAUnitError,
    NotExactIntegrallyError,
    NotPerfectError,
    ParseError,
    PerfchainError,
    UnboundedHomologyError,
)
from .finiteness import PerfectnessVerdict, decide_perfect, free_approximation, wall_class
from .groups import (
    GroupRingElement,
    GroupRingMatrix,
    GroupTable,
    augmentation,
    build_group,
    cyclic_group,
    direct_product,
    ga_inverse,
    ga_mul,
    ga_one,
    ga_zero,
    is_unit,
    norm_element,
)
from .modules import (
    PiModule,
    PiModuleMap,
    free_cover,
    has_equivariant_section,
    is_free,
    is_projective,
    kernel_of_map,
    minimal_generators,
    quotient_module,
    regular_module,
    trivial_module,
    zero_module,
)
from .towers import Tower, constant_tower, limit_complex, pro_decide_perfect, stable_images

__version__ = "0.1.0"
