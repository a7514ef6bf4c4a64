"""Shared fixtures: a session-wide certificate cache, the Petersen graph,
and the acceptance-verdict summary printed after the run."""

from __future__ import annotations

import pytest

from expander_bounds import RegularMultigraph, min_eta

ACCEPTANCE_LINES: list[str] = []


def record_verdict(num: int, tag: str, ok: bool, detail: str = "") -> None:
    """Append one pass/fail line per acceptance criterion, then assert it."""
    line = f"criterion {num:02d} {tag}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line = f"{line}  [{detail}]"
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance verdicts")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class CertCache:
    """min_eta results keyed by (delta, margin), shared across the session.

    The acceptance tests time a few fresh solves and then `put` them here so
    later tests reuse the certificates instead of re-running the search.
    """

    def __init__(self) -> None:
        self._certs = {}

    def get(self, delta: int, margin: float = 1e-6):
        key = (delta, margin)
        if key not in self._certs:
            self._certs[key] = min_eta(delta, margin=margin)
        return self._certs[key]

    def put(self, cert, margin: float) -> None:
        self._certs[(cert.delta, margin)] = cert


@pytest.fixture(scope="session")
def cert_cache() -> CertCache:
    return CertCache()


# Outer 5-cycle, spokes, inner 5-cycle with stride 2.
PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
]


@pytest.fixture
def petersen() -> RegularMultigraph:
    return RegularMultigraph.from_edges(3, 10, PETERSEN_EDGES)
