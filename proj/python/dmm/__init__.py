# Copyright 2026 The dmm Authors
# SPDX-License-Identifier: Apache-2.0
"""Dynamic mapping matrix: map CDC messages from extraction schemas onto a canonical data model."""

from ._dmm import DmmError, Engine, bench, verify, write_workload

__all__ = ["DmmError", "Engine", "bench", "verify", "write_workload"]
