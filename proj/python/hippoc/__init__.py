"""Bernoulli randomness tests, certified digit extraction and bound checks.

Bit sequences are strings of '0' and '1'; rationals are strings "a/b".
Structured results come back as dicts.
"""

import json

from . import _core
from ._core import HippocError

__all__ = [
    "HippocError",
    "run_cli",
    "gen_bernoulli",
    "gen_adversarial",
    "oracle_test",
    "cauchy_test",
    "slln_test",
    "slln_bound",
    "extract_prefix",
    "diagonal_test",
    "moment_s4",
    "exact_union_measure",
]

gen_bernoulli = _core.gen_bernoulli
gen_adversarial = _core.gen_adversarial
slln_bound = _core.slln_bound


def run_cli(*args):
    """Run `hippoc <args>` in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])


def oracle_test(y, p, d, b_max):
    return json.loads(_core.oracle_test(y, str(p), d, b_max))


def cauchy_test(y, d, b_max):
    return json.loads(_core.cauchy_test(y, d, b_max))


def slln_test(y, q1, q2, N, n_max):
    return json.loads(_core.slln_test(y, str(q1), str(q2), N, n_max))


def extract_prefix(y, d, n_target, budget, functional="theta"):
    return json.loads(_core.extract_prefix(y, d, n_target, budget, functional))


def diagonal_test(y, n, k_max, resolution):
    return json.loads(_core.diagonal_test(y, n, k_max, resolution))


def moment_s4(n, p):
    return json.loads(_core.moment_s4(n, str(p)))


def exact_union_measure(p, d, b_max):
    return json.loads(_core.exact_union_measure(str(p), d, b_max))
