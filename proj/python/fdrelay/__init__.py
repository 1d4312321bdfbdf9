# SPDX-License-Identifier: Apache-2.0
"""Outage analysis of a full-duplex MIMO relay with zero-forcing loopback suppression."""

from ._core import (
    CacheError,
    CoeffTable,
    ProbabilityRangeError,
    coefficients,
    db_to_linear,
    diversity_order,
    link_dims,
    outage,
    rate_to_snr_threshold,
    simulate_outage,
)

__all__ = [
    "CacheError",
    "CoeffTable",
    "ProbabilityRangeError",
    "coefficients",
    "db_to_linear",
    "diversity_order",
    "link_dims",
    "outage",
    "rate_to_snr_threshold",
    "simulate_outage",
]
