"""Bundled coefficient datasets, rebuilt deterministically on first use."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .characters import character_from_label
from .coeffs import CoefficientSequence, eisenstein_coefficients, eta_sequence


@dataclass(frozen=True)
class Dataset:
    name: str
    description: str
    default_count: int
    build: Callable[[int], CoefficientSequence]


def _eisenstein(xi1: str, xi2: str, k: int) -> Callable[[int], CoefficientSequence]:
    return lambda X: eisenstein_coefficients(character_from_label(xi1), character_from_label(xi2), k, X)


DATASETS: dict[str, Dataset] = {
    d.name: d
    for d in (
        Dataset("delta", "eta(z)^24, weight 12, level 1", 2000, lambda X: eta_sequence("1^24", X)),
        Dataset("level11", "eta(z)^2 eta(11z)^2, weight 2, level 11", 8000, lambda X: eta_sequence("1^2*11^2", X)),
        Dataset("e4", "Eisenstein series, weight 4, level 1", 10000, _eisenstein("1.0", "1.0", 4)),
        Dataset("e1", "Eisenstein series, weight 1, level 4, xi2 = 4.1", 10000, _eisenstein("1.0", "4.1", 1)),
    )
}

EISENSTEIN_PARAMETERS = {"e4": ("1.0", "1.0", 4), "e1": ("1.0", "4.1", 1)}


@lru_cache(maxsize=None)
def load_dataset(name: str, count: int | None = None) -> CoefficientSequence:
    try:
        ds = DATASETS[name]
    except KeyError:
        raise ValueError(f"unknown dataset {name!r}; choose from {', '.join(DATASETS)}") from None
    return ds.build(ds.default_count if count is None else count)
