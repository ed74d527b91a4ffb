import itertools

import pytest
from hypothesis import HealthCheck, settings

from newton_strata.rootdata import build_root_datum, is_dominant

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# presets of the enumeration grid
GRID_PRESETS = ["GL2", "GL3", "SL2", "SL3", "SL4", "PGL2", "B2", "C2", "G2", "B3", "C3", "D4", "2A2", "2A3", "3D4"]

# depths observed on the first verified run; the values must not drift
RECORDED_DEPTHS = {
    "GL2": 1, "GL3": 2, "GL4": 3, "SL2": 1, "SL3": 2, "SL4": 3, "PGL2": 1, "PGL3": 2, "PGL4": 3,
    "A1": 1, "A2": 2, "A3": 3, "A4": 4, "B2": 2, "B3": 3, "B4": 4, "C2": 2, "C3": 3, "C4": 4,
    "D4": 3, "G2": 3, "F4": 6, "2A2": 3, "2A3": 3, "2A4": 5, "2D4": 4, "3D4": 6, "U3": 3, "U4": 3,
}  # fmt: skip


def dominant_grid(datum, top=2):
    return [mu for mu in itertools.product(range(top + 1), repeat=datum.rank) if is_dominant(datum, mu)]


def grid_instances(presets=GRID_PRESETS, top=2):
    for name in presets:
        d = build_root_datum(name)
        for mu in dominant_grid(d, top):
            yield d, mu


_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(criterion: int, ok: bool, detail: str = "") -> None:
        _RESULTS[criterion] = (ok, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        ok, detail = _RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
