"""Merit-order spot market clearing.

Every segment of every representative day is cleared independently:
plants bid their short-run marginal cost, bids are filled cheapest-first
and the last unit used sets a uniform clearing price. Demand is perfectly
price inelastic; when available capacity falls short, the gap is priced
at the scenario's loss-of-load price.

All functions here are pure; segments could be cleared in parallel and
reduced in day/segment order, though the sequential loop is fast enough
in practice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigurationError
from .scenario import DaySegment, PowerPlant, Scenario, Technology


@dataclass(frozen=True, slots=True)
class Bid:
    plant: PowerPlant
    available_mw: float
    srmc: float


@dataclass(frozen=True, slots=True)
class SegmentClearing:
    dispatched: tuple[tuple[PowerPlant, float], ...]  # merit order, positive MW only
    clearing_price: float
    unserved_mw: float


@dataclass
class YearResult:
    """Aggregated dispatch outcome for one simulated year."""

    energy_by_technology: dict[str, float]  # MWh
    emissions_t: float
    average_price: float  # £/MWh, demand-weighted over all segments
    unserved_mwh: float
    carbon_intensity: float  # tCO2 per served MWh; 0 when nothing is served
    energy_by_plant: dict[str, float] = field(default_factory=dict)
    revenue_by_plant: dict[str, float] = field(default_factory=dict)  # £ at clearing prices


def srmc(tech: Technology, fuel_price: float, carbon_price: float) -> float:
    """Short-run marginal cost in £/MWh: fuel/efficiency + variable O&M + carbon cost.

    The fuel term vanishes for fuel-free technologies. A negative carbon
    price is allowed and lowers the cost (a per-tCO2 subsidy).
    """
    fuel_term = fuel_price / tech.efficiency if tech.fuel_kind else 0.0
    return fuel_term + tech.variable_om + tech.emission_factor * carbon_price


def srmc_by_technology(
    technologies, year: int, carbon_price: float, s: Scenario
) -> dict[str, float]:
    """SRMC per technology name for one year; fails if a fuel series is absent."""
    out: dict[str, float] = {}
    for tech in technologies:
        fuel_price = 0.0
        if tech.fuel_kind:
            try:
                fuel_price = s.fuel_price(tech.fuel_kind, year)
            except KeyError as exc:
                raise ConfigurationError(str(exc)) from exc
        out[tech.name] = srmc(tech, fuel_price, carbon_price)
    return out


def build_bids(
    fleet: list[PowerPlant],
    year: int,
    segment: DaySegment,
    carbon_price: float,
    s: Scenario,
    srmc_by_tech: dict[str, float] | None = None,
) -> list[Bid]:
    """One bid per plant: full capacity, derated by the segment's weather for intermittents.

    Callers are expected to pass a fleet already filtered to plants active
    in ``year``. ``srmc_by_tech`` lets a caller clearing many segments of
    the same year reuse the per-technology cost table.
    """
    if srmc_by_tech is None:
        srmc_by_tech = srmc_by_technology(
            {p.technology for p in fleet}, year, carbon_price, s
        )
    bids = []
    for plant in fleet:
        tech = plant.technology
        available = tech.capacity_mw * plant.unit_count
        if tech.is_intermittent:
            available *= segment.capacity_factor(tech.weather_profile)
        bids.append(Bid(plant=plant, available_mw=available, srmc=srmc_by_tech[tech.name]))
    return bids


def merit_order_key(bid: Bid):
    """Ascending SRMC; ties broken by lower emission factor, then plant id."""
    return (bid.srmc, bid.plant.technology.emission_factor, bid.plant.id)


def clear_segment(
    demand_mw: float, bids: list[Bid], loss_of_load_price: float
) -> SegmentClearing:
    """Fill demand greedily from the cheapest bids; the marginal unit sets the price.

    If demand exceeds total availability the shortfall is reported as
    unserved and the segment clears at the loss-of-load price.
    """
    remaining = demand_mw
    dispatched: list[tuple[PowerPlant, float]] = []
    marginal_srmc = 0.0
    for bid in sorted(bids, key=merit_order_key):
        if remaining <= 0.0:
            break
        if bid.available_mw <= 0.0:
            continue
        take = bid.available_mw if bid.available_mw < remaining else remaining
        remaining -= take
        dispatched.append((bid.plant, take))
        marginal_srmc = bid.srmc
    unserved = remaining if remaining > 0.0 else 0.0
    if unserved > 0.0:
        price = loss_of_load_price
    elif dispatched:
        price = marginal_srmc
    else:
        price = 0.0
    return SegmentClearing(
        dispatched=tuple(dispatched), clearing_price=price, unserved_mw=unserved
    )


def run_year(
    fleet: list[PowerPlant],
    year: int,
    carbon_price: float,
    s: Scenario,
    demand_scale: float = 1.0,
) -> YearResult:
    """Clear every segment of every representative day and aggregate to yearly totals.

    Segment demand is the scenario demand scaled by cumulative growth to
    ``year`` (times an optional extra factor, used by the demand-noise
    hook). Energies are weighted by segment duration and day weight so
    they sum to a full year.
    """
    active = [p for p in fleet if p.active_in(year)]
    srmc_by_tech = srmc_by_technology(
        {p.technology for p in active}, year, carbon_price, s
    )
    scale = s.demand_scale(year) * demand_scale

    energy_by_tech: dict[str, float] = {}
    energy_by_plant: dict[str, float] = {}
    revenue_by_plant: dict[str, float] = {}
    emissions = 0.0
    unserved_mwh = 0.0
    price_weighted = 0.0
    demand_mwh = 0.0
    served_mwh = 0.0

    for day in s.representative_days:
        hours_weight = day.weight_days
        for segment in day.segments:
            demand = segment.demand_mw * scale
            bids = build_bids(active, year, segment, carbon_price, s, srmc_by_tech)
            clearing = clear_segment(demand, bids, s.loss_of_load_price)
            seg_hours = segment.duration_hours * hours_weight
            for plant, mw in clearing.dispatched:
                energy = mw * seg_hours
                tech = plant.technology
                energy_by_tech[tech.name] = energy_by_tech.get(tech.name, 0.0) + energy
                energy_by_plant[plant.id] = energy_by_plant.get(plant.id, 0.0) + energy
                revenue_by_plant[plant.id] = (
                    revenue_by_plant.get(plant.id, 0.0)
                    + energy * clearing.clearing_price
                )
                emissions += energy * tech.emission_factor
                served_mwh += energy
            unserved_mwh += clearing.unserved_mw * seg_hours
            seg_demand_mwh = demand * seg_hours
            price_weighted += clearing.clearing_price * seg_demand_mwh
            demand_mwh += seg_demand_mwh

    return YearResult(
        energy_by_technology=energy_by_tech,
        emissions_t=emissions,
        average_price=price_weighted / demand_mwh if demand_mwh > 0 else 0.0,
        unserved_mwh=unserved_mwh,
        carbon_intensity=emissions / served_mwh if served_mwh > 0 else 0.0,
        energy_by_plant=energy_by_plant,
        revenue_by_plant=revenue_by_plant,
    )
