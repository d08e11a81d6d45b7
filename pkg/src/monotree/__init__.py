"""Verification engine for the binary-tree dynamics of ``x -> 1/(x-1)^2``.

The package reproduces, at desk scale, the computational facts about the
finite-level tree-automorphism groups attached to the map: group orders and
subgroup structure, the level-3 parity kernel, discriminants of the iterates,
numeric root-of-unity identities in the preimage tree, and the degree-16
specialization criterion.
"""

from .treeauto import (
    LevelAutomorphism,
    MONODROMY_GENERATORS,
    Vertex,
    WreathRecursion,
    as_permutation,
    build_named,
    compose,
    element_order_exponent,
    from_permutation,
    generator,
    identity,
    inverse,
    leaf_index,
    parity_witness,
    predicted_order_exponent,
    restrict,
    sigma,
    to_wreath_string,
    parse_wreath_string,
    vertex_from_index,
    wreath,
)
from .permgrp import (
    BudgetExceededError,
    NonTwoPowerOrderError,
    PermGroup,
    TimeBudget,
    cyclic_quotient_exponent,
    pointwise_stabilizer,
)
from .imgstruct import (
    build_G,
    build_Garith5,
    build_W,
    group_table,
    semi_rigidity_bruteforce,
    sgn3,
    verify_frattini,
    verify_G3_kernel,
    verify_N_structure,
)
from .cyclo import (
    criterion_verdict,
    en_closed_form,
    en_sequence,
    kernel_criterion,
    level_kernel,
    par,
    u_index_check,
)
from .preimage import (
    PreimageTree,
    ZetaExpression,
    act_numeric,
    build_tree,
    eval_zeta,
    zeta_expression,
)
from .discal import (
    DiscriminantForm,
    IntPoly,
    discriminant,
    discriminant_form,
    iterate_fraction,
    leading_data,
    ramification_values,
    resultant,
    resultant_power_check,
)
from .specialize import (
    SquareClass,
    brute_force_degree16,
    degree16_condition,
    square_class,
    theorem_verdict,
)

__version__ = "0.1.0"
