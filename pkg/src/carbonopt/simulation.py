"""Yearly simulation loop: retirements, investment, dispatch under a tax policy.

One run walks the horizon year by year: expired plants drop out, each
company invests off its view of the carbon price history, due plants come
online, and the spot market clears the year. The two quantities the
optimizer minimizes come from the final simulated year: the average
electricity price and the carbon intensity relative to the scenario's
base-year value.

Runs are deterministic for a fixed (scenario, policy, seed); the seed
only matters when the scenario enables the optional demand-noise hook.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispatch import YearResult, run_year
from .errors import ConfigurationError
from .investment import invest
from .policy import CarbonPolicy, check_bounds, decode
from .scenario import Scenario, copy_gencos


@dataclass(frozen=True)
class Event:
    """One entry of the per-year event log (investments, commissionings, retirements)."""

    year: int
    kind: str  # "invest" | "commission" | "retire"
    genco: str
    technology: str
    plant_id: str
    unit_count: int
    capital_cost: float | None = None
    npv: float | None = None


@dataclass(frozen=True)
class SimulationResult:
    per_year: tuple[YearResult, ...]
    carbon_prices: tuple[float, ...]  # realized tax per year
    objective_price: float  # final-year average electricity price, £/MWh
    objective_rci: float  # final-year carbon intensity over the base intensity
    events: tuple[Event, ...]


def _relative_carbon_intensity(final: YearResult, s: Scenario) -> float:
    if final.emissions_t == 0.0:
        return 0.0
    if s.base_carbon_intensity <= 0.0:
        raise ConfigurationError(
            "base_carbon_intensity is 0 but final-year emissions are positive"
        )
    return final.carbon_intensity / s.base_carbon_intensity


def run_simulation(s: Scenario, policy: CarbonPolicy, seed: int) -> SimulationResult:
    """Simulate the full horizon under one carbon tax trajectory.

    The scenario is expected to be valid (see ``validate_scenario``);
    policy parameters are re-checked against their bounds here.
    """
    check_bounds(policy, s.horizon_years)
    fleet = list(s.initial_fleet)
    gencos = sorted(copy_gencos(s), key=lambda g: g.id)
    events: list[Event] = []
    history: list[tuple[int, float]] = []
    per_year: list[YearResult] = []
    taxes: list[float] = []
    npv_cache: dict = {}
    rng = np.random.default_rng(seed) if s.demand_noise_std > 0 else None

    for year_index in range(1, s.horizon_years + 1):
        year = s.start_year + year_index - 1

        for plant in fleet:
            if plant.retirement_year == year:
                events.append(
                    Event(
                        year=year,
                        kind="retire",
                        genco=plant.owner,
                        technology=plant.technology.name,
                        plant_id=plant.id,
                        unit_count=plant.unit_count,
                    )
                )

        tax = policy.price_at(year_index)
        taxes.append(tax)
        history.append((year, tax))

        for genco in gencos:
            for decision in invest(genco, year, s, fleet, history, npv_cache):
                events.append(
                    Event(
                        year=year,
                        kind="invest",
                        genco=decision.genco,
                        technology=decision.technology,
                        plant_id=decision.plant_id,
                        unit_count=decision.unit_count,
                        capital_cost=decision.capital_cost,
                        npv=decision.npv,
                    )
                )

        for plant in fleet:
            if plant.commission_year == year:
                events.append(
                    Event(
                        year=year,
                        kind="commission",
                        genco=plant.owner,
                        technology=plant.technology.name,
                        plant_id=plant.id,
                        unit_count=plant.unit_count,
                    )
                )

        noise = 1.0
        if rng is not None:
            noise = max(0.0, 1.0 + rng.normal(0.0, s.demand_noise_std))
        per_year.append(run_year(fleet, year, tax, s, demand_scale=noise))

    final = per_year[-1]
    return SimulationResult(
        per_year=tuple(per_year),
        carbon_prices=tuple(taxes),
        objective_price=final.average_price,
        objective_rci=_relative_carbon_intensity(final, s),
        events=tuple(events),
    )


def evaluate_objectives(
    s: Scenario, genome, policy_kind: str, seed: int
) -> tuple[float, float]:
    """Fitness function for the optimizer: genome -> (price, relative carbon intensity)."""
    policy = decode(genome, policy_kind, n_years=s.horizon_years)
    result = run_simulation(s, policy, seed)
    objectives = (result.objective_price, result.objective_rci)
    if not all(math.isfinite(v) for v in objectives):
        raise ConfigurationError(f"non-finite objectives {objectives} for genome {genome}")
    return objectives
