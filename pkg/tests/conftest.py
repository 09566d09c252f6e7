"""Shared fixtures: corpus loading, numeric length assignments, sweep caches."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from tropprym import jsonio
from tropprym.poly import var_index

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

GRAPH_FIXTURES = ("loop", "theta", "dumbbell")
# every well-formed cover fixture; fs2_bad is a deliberate parse error
COVER_FIXTURES = (
    "dumbbell_cover",
    "two_loops_cover",
    "theta_odd_cover",
    "fs2_cover",
    "prism_cover",
    "theta_dilated_cover",
    "fs2_contracted_cover",
)
FREE_COVER_FIXTURES = (
    "dumbbell_cover",
    "two_loops_cover",
    "theta_odd_cover",
    "fs2_cover",
    "prism_cover",
)

# first-verified-run goldens for the small sweeps (not published integers)
GOLDEN_COUNTS = {
    2: {"trees": 4, "typed": 32, "monodromy": 140, "generic": 121, "towers": 363},
    3: {"trees": 11, "typed": 176, "monodromy": 1196, "generic": 365, "towers": 2555},
}
# the five published stage integers for genus 4
PUBLISHED_G4_COUNTS = {
    "trees": 37,
    "typed": 1184,
    "monodromy": 12977,
    "generic": 821,
    "towers": 12315,
}


def load_json(name: str) -> dict:
    with open(FIXTURES / f"{name}.json") as fh:
        return json.load(fh)


def load_graph(name: str):
    return jsonio.graph_from_json(load_json(name))


def load_cover(name: str):
    return jsonio.cover_from_json(load_json(name))


def load_tower(name: str):
    return jsonio.tower_from_json(load_json(name))


def length_variables(g) -> frozenset[int]:
    out: set[int] = set()
    for form in g.lengths.values():
        out |= form.variables()
    return frozenset(out)


def random_point(variables, rng: random.Random, lo=1, hi=24, den=5):
    """Strictly positive rational value for every variable index."""
    return {
        i: Fraction(rng.randint(lo, hi), rng.randint(1, den)) for i in variables
    }


def numeric_graph(g, point):
    """The same graph with lengths evaluated at the point (as constants)."""
    return g.with_lengths(
        {e: form.evaluate(point) for e, form in g.lengths.items()}
    )


def numeric_cover(c, point):
    from tropprym.morphism import DoubleCover

    return DoubleCover(
        numeric_graph(c.base, point),
        c.signs,
        c.dilated_vertices,
    )


def name_env(point_by_name):
    """{variable name: value} -> {registry index: Fraction} environment."""
    return {var_index(k): Fraction(v) for k, v in point_by_name.items()}


@pytest.fixture(scope="session")
def report_g2():
    from tropprym.pipeline import run_verification

    return run_verification(2)


@pytest.fixture(scope="session")
def report_g3():
    from tropprym.pipeline import run_verification

    return run_verification(3)
