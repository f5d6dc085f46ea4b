"""Search budgets and run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

ENV_PREFIX = "CPTK_BUDGET_"


@dataclass(frozen=True)
class Budget:
    exhaustive_size: int = 10
    dfs_nodes: int = 200_000
    samples: int = 100
    greedy_size: int | None = None  # None: grow up to the whole interior
    hall_subsets: int = 200_000  # max subsets enumerated by hall_check_small

    @classmethod
    def from_env(cls, base: "Budget | None" = None, environ=None) -> "Budget":
        """Override fields from ``CPTK_BUDGET_<FIELD>`` environment variables."""
        environ = os.environ if environ is None else environ
        base = base or cls()
        changes = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                changes[f.name] = None if raw.lower() == "none" else int(raw)
        return replace(base, **changes)


DEFAULT_BUDGET = Budget()
DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    flags: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    budget: Budget = DEFAULT_BUDGET
    output: str | None = None
    format: str = "json"
