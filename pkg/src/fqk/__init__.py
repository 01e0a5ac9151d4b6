"""Finite quantum kinematics: generalized Pauli operators, Weyl-Heisenberg
groups, classification of kinematics by finite Abelian groups, the CRT
tensor factorization, and fine gradings of M_N(C)."""

__version__ = "0.1.0"

from .classify import (
    AbelianGroupType,
    InvariantFactorList,
    count_kinematics,
    enumerate_kinematics,
    from_invariant_factors,
    reduce_product,
    to_invariant_factors,
)
from .config import FqkError, ResourceBoundError, VerificationError
from .cyclotomic import CyclotomicScalar, root_of_unity
from .gradings import (
    Grading,
    InnerAutomorphism,
    MadGroupDescriptor,
    build_grading,
    enumerate_mad_groups,
    joint_eigenspaces,
    mad_of_pauli_group,
    verify_grading_closure,
)
from .kinematics import ConfigGroup, crt_equivalence, regular_system, tensor_system, weyl_system
from .monomial import MonomialMatrix, PartialMonomial
from .numtheory import crt_split, factorize, partition_count, partitions
from .pauli import (
    WhGroupElement,
    expand_in_basis,
    p_matrix,
    q_matrix,
    schwinger_basis,
    weyl_operator,
    wh_center,
    wh_group_order,
    wh_normal_form,
)

__all__ = [
    "AbelianGroupType",
    "InvariantFactorList",
    "count_kinematics",
    "enumerate_kinematics",
    "from_invariant_factors",
    "reduce_product",
    "to_invariant_factors",
    "FqkError",
    "ResourceBoundError",
    "VerificationError",
    "CyclotomicScalar",
    "root_of_unity",
    "Grading",
    "InnerAutomorphism",
    "MadGroupDescriptor",
    "build_grading",
    "enumerate_mad_groups",
    "joint_eigenspaces",
    "mad_of_pauli_group",
    "verify_grading_closure",
    "ConfigGroup",
    "crt_equivalence",
    "regular_system",
    "tensor_system",
    "weyl_system",
    "MonomialMatrix",
    "PartialMonomial",
    "crt_split",
    "factorize",
    "partition_count",
    "partitions",
    "WhGroupElement",
    "expand_in_basis",
    "p_matrix",
    "q_matrix",
    "schwinger_basis",
    "weyl_operator",
    "wh_center",
    "wh_group_order",
    "wh_normal_form",
]
