"""Factoring RSA moduli from elliptic curve point counts."""

import json

from ._core import (
    TwistFactorError,
    count_points,
    factor,
    factor_affine_pair,
    factor_projective_pair,
    fermat_factor,
    is_prime,
    lll_reduce,
    quadruple_from_traces,
    run_cli,
)
from . import _core


def random_instance(bits, seed, synthetic=False, close=False):
    """Instance as a dict; big integers are decimal strings, as in the CLI."""
    return json.loads(_core.random_instance_json(bits, seed, synthetic, close))


def malleability_attack(n, count, convention="affine"):
    """Report dict for the malleability attack on a count of one curve mod n."""
    return json.loads(_core.malleability_attack_json(n, count, convention))


__all__ = [
    "TwistFactorError",
    "count_points",
    "factor",
    "factor_affine_pair",
    "factor_projective_pair",
    "fermat_factor",
    "is_prime",
    "lll_reduce",
    "malleability_attack",
    "quadruple_from_traces",
    "random_instance",
    "run_cli",
]
