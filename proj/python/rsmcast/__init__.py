# SPDX-License-Identifier: Apache-2.0
#
# rsmcast - rate-splitting max-min fair multigroup multicast beamforming
# Copyright (C) 2026 The rsmcast Authors
"""Python bindings for the rsmcast C++ core."""

from ._rsmcast import (  # noqa: F401
    CSV_HEADER,
    AssumptionViolation,
    ContractViolation,
    __version__,
    empirical_dof,
    generate_channels,
    n_min,
    parse_csv,
    rates,
    run_sweep,
    solve,
)
