"""Parity of multipartition functions: series mod 2, congruence checks and
certificates for the catalog of dissection congruences."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    ContractViolation,
    Error,
    EtaQuotient,
    ParseError,
    UnknownCase,
    catalog,
    parity_bits,
    run_cli,
    sturm_bound,
    verify,
)

__all__ = [
    "ContractViolation",
    "Error",
    "EtaQuotient",
    "ParseError",
    "UnknownCase",
    "catalog",
    "certify",
    "conjecture_table",
    "landau_check",
    "odd_density",
    "order_at_cusp",
    "parity_bits",
    "regular_relation_check",
    "run_cli",
    "sturm_bound",
    "verify",
]


def certify(case, j=None, normalize=False):
    """Full certification of a catalog case; returns the cert-v1 document."""
    return json.loads(_core.certify_json(case, j, normalize))


def odd_density(series, x, threads=1):
    return json.loads(_core.odd_density_json(series, x, threads))


def regular_relation_check(x, threads=1):
    return json.loads(_core.regular_relation_json(x, threads))


def landau_check(x, threads=1):
    return json.loads(_core.landau_json(x, threads))


def conjecture_table(ts, x, threads=1):
    return json.loads(_core.conjecture_table_json(list(ts), x, threads))


def order_at_cusp(quotient, c, d):
    num, den = quotient.order_at_cusp(c, d)
    return Fraction(num, den)
