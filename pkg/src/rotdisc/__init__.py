"""Exact local discrepancy of irrational rotations at rational windows."""

from .classify import (
    Classification,
    DimBound,
    Verdict,
    check_pattern_condition,
    check_q_condition,
    classify,
    construct_member,
    cstar,
    empirical_extrema,
    g_function,
)
from .discrepancy import (
    DiscrepancyPath,
    backwards_check,
    dqn_residue_check,
    kD_at,
    path_csv,
    path_direct,
    path_recursive,
    running_extrema,
    templates,
)
from .errors import BudgetExceeded, ConsistencyError, ParseError
from .numkernel import (
    CFExpansion,
    Ratio,
    Surd,
    cf_from_rational,
    cf_from_surd,
    cf_to_surd,
    convergents,
    eval_cf,
    floor_sum,
    fundamental_interval,
    parse_cf,
    parse_ratio,
    parse_surd,
)
from .orbit import (
    INFINITY,
    AlphaHandle,
    Order,
    frac_compare,
    l_n,
    lambda_table,
    three_distance_check,
    xi,
    xi_sequence,
)
from .patterns import (
    Decomposition,
    Pattern,
    TransferMap,
    character,
    elementary_run_length,
    enumerate_elementary,
    enumerate_prime,
    group_order,
    is_elementary,
    is_null,
    is_prime,
    is_type_k,
    prime_decompose,
    transfer_map,
    type_k_primes,
)

__version__ = "0.1.0"
