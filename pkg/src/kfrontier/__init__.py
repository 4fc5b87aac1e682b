"""Numerical model of knowledge creation: conjectures from a Brownian answer
path, closed-form discovery benefits, the researcher's optimal
novelty/output choice, sequential evolution with stochastic discovery,
discounted moonshot comparisons, and budget-constrained research funding."""

from .knowledge import (
    Action,
    Area,
    Conjecture,
    KnowledgePoint,
    KnowledgeSet,
    areas,
    conjecture,
    distance,
    dump_knowledge_json,
    insert,
    load_knowledge_json,
    make_knowledge,
    optimal_action,
)
from .specfun import (
    CostKernelPoint,
    cost_kernel_point,
    ctilde,
    ctilde_prime,
    ctilde_prime_inv,
    ctilde_second,
    erf_inv,
    lambert_w0,
)
from .valuation import (
    BenefitCutoffs,
    area_value,
    benefit,
    benefit_cutoffs,
    d0,
    sigma2,
    value_of_knowledge,
)
from .researcher import (
    EconomyParams,
    ResearchChoice,
    ResearcherCutoffs,
    cost,
    opt_choice,
    opt_deepen,
    opt_expand,
    opt_rho_given_d,
    payoff,
    researcher_cutoffs,
    substitutes_or_complements,
)
from .evolution import (
    EvolutionTrace,
    PeriodRecord,
    SearchInterval,
    prediction_interval,
    run,
    sample_answer,
    step,
    trace_to_jsonl,
)
from .moonshot import (
    MoonshotAssessment,
    SixQClosedForm,
    chain_npv,
    critical_delta,
    eta_range,
    is_moonshot,
    moonshot_benefit,
    optimal_moonshot,
    sixq_closed_form,
)
from .funding import (
    FeasibleBounds,
    ForwardFundingOptimum,
    FrontierPoint,
    FundingOptimum,
    FundingParams,
    FundingScheme,
    complementarity_sign,
    feasible_bounds,
    frontier_d_of_rho,
    mrs_d,
    mrs_rho,
    optimize_forward,
    optimize_myopic,
    researcher_with_rewards,
    reward_prob,
    scheme_from_choice,
    scheme_on_budget,
)

__version__ = "0.1.0"
