"""Library-wide size caps.

All caps bound *cost*, never correctness: operations that would need to
exceed a cap raise CapExceededError instead of silently truncating.
"""

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    # symmetrization is k!-sized, so the variable count is capped
    max_vars: int = 6
    # per-edge |m| bound for explicitly constructed generators
    max_edge_m: int = 12
    # worker threads for verification suites (pure functions, so any
    # schedule gives the same answers)
    threads: int = int(os.environ.get("TOROIDAL_THREADS", "1"))


DEFAULT = Config()
