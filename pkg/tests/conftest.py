import pytest

from c2copula import (
    ComplexFourierCoefficients,
    EpsilonFamily,
    FGMParams,
    FourierCoefficients,
    FrankParams,
    Independence,
)

FRANK_THETAS = (-10.0, -1.0, 0.5, 5.0, 20.0)
FGM_THETAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
EPSILONS = (1.0, 0.1, 0.01)


def shipped_generators():
    """Every parameterisation the axiom suite is run against."""
    out = {f"frank({t:g})": FrankParams(t) for t in FRANK_THETAS}
    out.update({f"fgm({t:g})": FGMParams(t) for t in FGM_THETAS})
    out["fourier(sincos)"] = FourierCoefficients(b=[1.0], c=[1.0])
    out.update({f"eps({e:g})": EpsilonFamily(e) for e in EPSILONS})
    return out


def representative_generators():
    """One well-resolved member per family."""
    return {
        "independence": Independence(),
        "frank(5)": FrankParams(5.0),
        "frank(-1)": FrankParams(-1.0),
        "fgm(1)": FGMParams(1.0),
        "fourier(sincos)": FourierCoefficients(b=[1.0], c=[1.0]),
        "fourier(b1=d1=1)": FourierCoefficients(b=[1.0], d=[1.0]),
        "fourier(mixed)": FourierCoefficients(a=[0.2, -0.1], b=[0.3, 0.1], c=[0.5], d=[-0.4, 0.3]),
        "complex": ComplexFourierCoefficients({(1, 2): 0.1 + 0.2j, (2, -1): 0.05 - 0.1j}),
        "eps(0.1)": EpsilonFamily(0.1),
        "eps(1,min)": EpsilonFamily(1.0, "min"),
    }


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Record one PASS/FAIL line per acceptance criterion; printed in the summary."""

    def record(criterion: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
