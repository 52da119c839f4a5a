import math

import pytest
from hypothesis import HealthCheck, settings

from bernstein_lab.funcat import make_catalog, normalize

settings.register_profile("lab", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("lab")

PI = math.pi

# (label, catalog name, params) for functions in the unit ball once normalized
MEMBERS = [
    ("thm46", "thm46", {}),
    ("thm46_s2", "thm46", {"sigma": 2.0}),
    ("example34", "example34", {}),
    ("example34_eps15", "example34", {"eps": 1.5}),
    ("example34_s2", "example34", {"sigma": 2.0}),
    ("quotient_deg2", "sinetype_quotient", {"degree": 2}),
    ("quotient_deg3", "sinetype_quotient", {"degree": 3}),
    ("quotient_deg4", "sinetype_quotient", {"degree": 4}),
    ("sinc_sq", "shifted_sinc_sq", {}),
    ("sinc_sq_shift7", "shifted_sinc_sq", {"n": 7.0}),
]

# entire functions used for pointwise properties (norm may be infinite)
EVALUABLE = MEMBERS + [
    ("sinc", "sinc", {}),
    ("two_cos", "two_cos_minus_one", {}),
    ("exp_line", "exp_line", {}),
    ("sine", "sine", {}),
    ("poly", "polynomial", {"roots": [1.0, -1.0, 0.5j]}),
    ("example34_F", "example34_F", {}),
]

_cache = {}


def member(label):
    if label not in _cache:
        _, name, params = next(m for m in MEMBERS if m[0] == label)
        _cache[label] = normalize(make_catalog(name, params))
    return _cache[label]


@pytest.fixture(scope="session")
def normalized():
    return {label: member(label) for label, _, _ in MEMBERS}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


_reports = {}


def experiment_report(name, sigma=PI, **params):
    """Run an experiment once per (name, sigma, params) for the whole session."""
    from bernstein_lab.harness import ExperimentSpec, run_experiment

    key = (name, sigma, repr(sorted(params.items())))
    if key not in _reports:
        _reports[key] = run_experiment(ExperimentSpec(name, sigma, params))
    return _reports[key]
