"""Monte-Carlo estimation of expectations over independent seeds."""

from __future__ import annotations

import math
from typing import Callable

from ..core import derive_seed


def monte_carlo_expectation(
    process: Callable[[int], object],
    statistic: Callable[[object], float],
    trials: int,
    seed: int = 0,
) -> tuple[float, float]:
    """Sample mean and standard error of ``statistic(process(s))``.

    Trial ``i`` runs with the derived seed ``derive_seed(seed, "mc", i)``, so the
    result does not depend on the order in which trials happen to execute.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    values = [float(statistic(process(derive_seed(seed, "mc", i)))) for i in range(trials)]
    mean = math.fsum(values) / trials
    if trials == 1:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in values) / (trials - 1)
    return mean, math.sqrt(var / trials)
