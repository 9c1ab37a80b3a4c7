"""Randomized-exploration bandit simulator (C++ core)."""

from ._corebandit import (
    BanditPolicy,
    ConfigError,
    CoreAgent,
    EmptyPool,
    LinCoreAgent,
    ProtocolError,
    bernoulli_kl,
    build_pool,
    cascade_expected_clicks,
    check_chi_square_shift,
    check_lemma1,
    check_lemma2,
    check_posterior_equivalence,
    generate_cascade,
    generate_linear,
    generate_mab,
    init_length,
    klucb_index,
    pool_variance,
    run_experiment,
)

__all__ = [
    "BanditPolicy",
    "ConfigError",
    "CoreAgent",
    "EmptyPool",
    "LinCoreAgent",
    "ProtocolError",
    "bernoulli_kl",
    "build_pool",
    "cascade_expected_clicks",
    "check_chi_square_shift",
    "check_lemma1",
    "check_lemma2",
    "check_posterior_equivalence",
    "generate_cascade",
    "generate_linear",
    "generate_mab",
    "init_length",
    "klucb_index",
    "pool_variance",
    "run_experiment",
]
