"""Monte Carlo laboratory: generators, sizing, batch engines, and studies."""

from .scenario import OperatingCharacteristics, SimScenario
from .sizing import (
    DeathsDesign,
    deaths_design,
    size_logrank,
    size_t_test,
    size_two_proportion,
)
from .strategies import BettingStrategy

__all__ = [
    "BettingStrategy",
    "DeathsDesign",
    "OperatingCharacteristics",
    "SimScenario",
    "deaths_design",
    "size_logrank",
    "size_t_test",
    "size_two_proportion",
]
