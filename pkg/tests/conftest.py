"""Shared fixtures: tiny hand-checkable scenarios plus the bundled one."""

from __future__ import annotations

import pytest

from carbonopt.scenario import (
    DaySegment,
    GenCo,
    PowerPlant,
    RepresentativeDay,
    Scenario,
    Technology,
    bundled_scenario_path,
    load_scenario,
    validate_scenario,
)

FULL_DAY = RepresentativeDay(
    name="always",
    weight_days=365.0,
    segments=(
        DaySegment(
            duration_hours=24.0,
            demand_mw=80.0,
            solar_capacity_factor=0.5,
            wind_capacity_factor=0.5,
        ),
    ),
)


def make_tech(name="gas", **overrides) -> Technology:
    base = dict(
        name=name,
        capacity_mw=100.0,
        capital_cost=500_000.0,
        fixed_om=10_000.0,
        variable_om=3.0,
        fuel_kind="gas",
        efficiency=0.5,
        emission_factor=0.4,
        lifetime_years=30,
        construction_lag_years=1,
        is_intermittent=False,
        weather_profile=None,
    )
    base.update(overrides)
    return Technology(**base)


def make_scenario(
    technologies,
    fleet,
    gencos=(GenCo(id="g1", budget=0.0),),
    days=(FULL_DAY,),
    start_year=2020,
    horizon_years=2,
    base_carbon_intensity=0.4,
    **overrides,
) -> Scenario:
    fuel_kinds = {t.fuel_kind for t in technologies if t.fuel_kind}
    years = range(start_year, start_year + horizon_years)
    fuel_prices = overrides.pop(
        "fuel_prices", {kind: {y: 20.0 for y in years} for kind in fuel_kinds}
    )
    s = Scenario(
        start_year=start_year,
        horizon_years=horizon_years,
        technologies=tuple(technologies),
        initial_fleet=tuple(fleet),
        gencos=tuple(gencos),
        representative_days=tuple(days),
        fuel_prices=fuel_prices,
        base_carbon_intensity=base_carbon_intensity,
        **overrides,
    )
    assert validate_scenario(s) == [], validate_scenario(s)
    return s


@pytest.fixture(scope="session")
def uk_scenario():
    path = bundled_scenario_path("uk_synthetic")
    assert path is not None
    return load_scenario(path)


@pytest.fixture()
def gas_tech():
    return make_tech()


@pytest.fixture()
def static_fossil_scenario():
    """One gas plant, zero budgets: the mix cannot change over the horizon.

    Hand trace (flat tax 10, demand 80 MW around the clock):
      srmc = 20/0.5 + 3 + 0.4*10 = 47 £/MWh
      energy = 80 * 8760 = 700800 MWh/year, emissions = 280320 t
      intensity = 0.4 exactly, so relative intensity = 0.4/0.4 = 1.
    """
    tech = make_tech()
    plant = PowerPlant(
        id="gas-1", technology=tech, owner="g1", commission_year=2000, unit_count=1
    )
    return make_scenario([tech], [plant])
