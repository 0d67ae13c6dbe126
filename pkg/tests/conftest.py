"""Shared fixtures, synthetic-curve builders, acceptance summary hook."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import pytest

from bdwork import Dataset, MetricPair, RDCurve, RDPoint

DATA_DIR = Path(__file__).parent / "data"

PSNR_RATE = MetricPair("psnr", "bitrate_kbps")


def make_curve(
    qualities,
    costs,
    codec="A",
    sequence="seq",
    pair=PSNR_RATE,
    labels=None,
) -> RDCurve:
    qualities = [float(q) for q in qualities]
    costs = [float(c) for c in costs]
    if labels is None:
        labels = [str(i) for i in range(len(qualities))]
    points = tuple(
        RDPoint(str(l), q, c) for l, q, c in zip(labels, qualities, costs)
    )
    return RDCurve(codec, sequence, pair, points)


def random_curve(rng, n=4, codec="A", sequence="seq", monotone_cost=True) -> RDCurve:
    """Random valid curve: strictly increasing quality, positive costs."""
    start = rng.uniform(28.0, 36.0)
    gaps = rng.uniform(0.8, 3.0, size=n - 1)
    qualities = start + np.concatenate([[0.0], np.cumsum(gaps)])
    log_start = rng.uniform(2.5, 3.5)
    if monotone_cost:
        log_steps = rng.uniform(0.15, 0.5, size=n - 1)
    else:
        log_steps = rng.uniform(-0.2, 0.5, size=n - 1)
    log_costs = log_start + np.concatenate([[0.0], np.cumsum(log_steps)])
    return make_curve(qualities, 10.0**log_costs, codec=codec, sequence=sequence)


def dataset_from_generator(
    log_cost_of,
    codecs=("A", "B"),
    sequences=("s1", "s2"),
    pair=PSNR_RATE,
    qualities=None,
    support_idx=(0, 5, 10, 15),
) -> Dataset:
    """Dense synthetic dataset; ``log_cost_of(codec, sequence, q)`` drives it."""
    if qualities is None:
        qualities = np.linspace(32.0, 44.0, 16)
    supporting = {}
    validation = {}
    for codec in codecs:
        for sequence in sequences:
            points = tuple(
                RDPoint(str(i), float(q), float(10.0 ** log_cost_of(codec, sequence, q)))
                for i, q in enumerate(qualities)
            )
            support = tuple(points[i] for i in support_idx)
            curve = RDCurve(codec, sequence, pair, support)
            key = (codec, sequence, pair)
            supporting[key] = curve
            validation[key] = points
    return Dataset(supporting, validation)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


@pytest.fixture
def four_point_curve():
    return make_curve(
        [33.0, 35.5, 38.0, 40.5], [800.0, 1800.0, 4200.0, 9500.0]
    )


@pytest.fixture
def knee_csv():
    return DATA_DIR / "knee.csv"


@pytest.fixture
def pair_csv():
    return DATA_DIR / "pair.csv"


_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per numbered acceptance criterion."""
    verdicts: dict[str, tuple[str, str]] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match is None:
                continue
            number, name = match.groups()
            if outcome != "passed":
                verdicts[number] = (name, "FAIL")
            elif number not in verdicts:
                verdicts[number] = (name, "PASS")
    if not verdicts:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(verdicts):
        name, verdict = verdicts[number]
        terminalreporter.write_line(f"criterion {number} {name}: {verdict}")
