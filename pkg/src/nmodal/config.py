"""Search budgets. Environment variables override the defaults."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

_ENV = {
    "max_free_bits": "NMODAL_MAX_FREE_BITS",
    "fragment_depth": "NMODAL_FRAGMENT_DEPTH",
    "bridge_width": "NMODAL_BRIDGE_WIDTH",
    "proof_depth": "NMODAL_PROOF_DEPTH",
    "max_worlds": "NMODAL_MAX_WORLDS",
    "corpus_cap": "NMODAL_CORPUS_CAP",
}


@dataclass(frozen=True)
class Budgets:
    max_free_bits: int = 24
    fragment_depth: int = 2
    bridge_width: int = 2
    proof_depth: int = 8
    max_worlds: int = 4
    corpus_cap: int = 2_000_000

    def __post_init__(self):
        for name in _ENV:
            value = getattr(self, name)
            if name == "bridge_width" or name == "fragment_depth":
                if value < 0:
                    raise ValueError(f"{name} must be non-negative")
            elif value <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, environ=None) -> "Budgets":
        environ = os.environ if environ is None else environ
        overrides = {name: int(environ[var]) for name, var in _ENV.items() if var in environ}
        return replace(cls(), **overrides)


DEFAULT = Budgets()


class BudgetExceeded(RuntimeError):
    pass
