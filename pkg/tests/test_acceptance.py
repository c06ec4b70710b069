"""End-to-end acceptance checks.

Each test runs one verification suite at its production tolerances and
prints the suite's single pass/fail summary line.  These are the slow,
authoritative checks; the unit tests elsewhere cover the same components
at small sizes.
"""

from hybriddg.verification import SUITES


def _run(name):
    result = SUITES[name]()
    print(result.line())
    assert result.passed, result.line()


def test_acceptance_operators():
    _run("operators")


def test_acceptance_two_point_fluxes():
    _run("fluxes")


def test_acceptance_free_stream_preservation():
    _run("freestream")


def test_acceptance_convergence():
    _run("convergence")


def test_acceptance_entropy_behavior():
    _run("entropy")


def test_acceptance_piston_shock():
    _run("piston")


def test_acceptance_conservation_and_determinism():
    _run("conservation")
