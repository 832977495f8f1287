from mtc.orbifold.cover import (
    CoverSpec,
    PermutationLocalSystem,
    group_invariant_dim,
    kernel_dim_rule,
    pushforward_local_system,
)
from mtc.orbifold.local import (
    Convention,
    CyclicRep,
    LocalSystem,
    MultiplicityFunction,
    hecke_euler_char,
    index_via_riemann_roch,
    invariant_dim,
    local_system_degree,
    normalize_multiplicity,
    quotient_dim,
    twisted_index,
    untwisted_index_check,
)

__all__ = [
    "Convention",
    "CoverSpec",
    "CyclicRep",
    "LocalSystem",
    "MultiplicityFunction",
    "PermutationLocalSystem",
    "group_invariant_dim",
    "hecke_euler_char",
    "index_via_riemann_roch",
    "invariant_dim",
    "kernel_dim_rule",
    "local_system_degree",
    "normalize_multiplicity",
    "pushforward_local_system",
    "quotient_dim",
    "twisted_index",
    "untwisted_index_check",
]
