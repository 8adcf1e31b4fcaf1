"""Conjugation coarse spaces on groups, computationally.

A group carries the coarse structure whose base entourages relate each
element to its conjugates by a finite set; balls are conjugate sets,
connected components are conjugacy classes. This package implements the
constructions and checkable criteria around that structure: budgeted
discreteness and cellularity checkers with witnesses, the saturation
algorithm for finitely generated conjugacy classes, the tower of
finite-support isometry groups of the binary-sequence metric space, the
subgroup space with its Dedekind/Hamiltonian classification, and a zoo
of concrete groups everything is cross-validated on.
"""

from .bergman import (
    BitSeq,
    Isometry,
    LimitElement,
    conjugacy_growth,
    dist,
    embed,
    far_conjugates_commute,
    level_group,
    moved_set,
    transitivity_witness,
)
from .coarse import (
    ActionEntourage,
    CoarseSpace,
    EntourageSpec,
    PartitionFailed,
    action_space,
    asymorphic_embedding_check,
    ball,
    cellularity_criterion,
    conjugation_space,
    entourage,
    entourage_inverse,
    entourage_product,
    indicator_embedding,
    is_bounded,
    is_direct_union,
    is_discrete,
    is_n_discrete,
    macro_uniform_check,
    partition_n_discrete,
    sample_entourages,
)
from .groups import (
    ActionNotAutomorphism,
    CapExceeded,
    FiniteGroup,
    GroupCtx,
    PermutationAction,
    center,
    centralizer,
    commutator_subgroup,
    conj,
    conj_set,
    conjugacy_classes,
    direct_product,
    enumerate_ball,
    generate_finite,
    semidirect_product,
)
from .saturation import (
    PredicateUnavailable,
    SaturationTrace,
    central_power_check,
    characterization_report,
    component_of,
    fc_check,
    locally_finite_quotient_check,
    saturate_conjugacy_class,
    verify_trace,
)
from .subgroups import (
    NotTransitive,
    SubgroupFamily,
    all_subgroups,
    conj_subgroup,
    hamiltonian_decomposition,
    is_dedekind,
    stabilizer_map_check,
    subgroup_space_discrete,
)
from .suites import SUITES, run_suite
from .verdicts import Budget, Status, Verdict
from .zoo import (
    BadParameters,
    GroupSpec,
    UnknownFamily,
    blockshift_noncentral_power,
    blockshift_orbit_size,
    finite_zoo,
    indicator_instance,
    make_group,
    natural_action,
)

__version__ = "0.1.0"
