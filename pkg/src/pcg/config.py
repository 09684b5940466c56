"""Capacity limits shared by every module."""

from contextlib import contextmanager
from dataclasses import dataclass, fields


@dataclass
class Limits:
    max_generators: int = 64
    max_order: int = 2**63 - 1
    element_cap: int = 3**13  # elements or representatives enumerated at once
    pair_cap: int = 3**7  # group order for exhaustive pair scans
    oracle_cap: int = 3**7
    tuple_cap: int = 2 * 10**7  # tuples in an exhaustive identity scan


DEFAULT_LIMITS = Limits()


@contextmanager
def override_limits(**changes):
    """Temporarily change the shared limits, e.g. ``element_cap`` from the CLI."""
    names = {f.name for f in fields(Limits)}
    saved = {}
    for key, value in changes.items():
        if key not in names:
            raise KeyError(key)
        saved[key] = getattr(DEFAULT_LIMITS, key)
        setattr(DEFAULT_LIMITS, key, value)
    try:
        yield DEFAULT_LIMITS
    finally:
        for key, value in saved.items():
            setattr(DEFAULT_LIMITS, key, value)
