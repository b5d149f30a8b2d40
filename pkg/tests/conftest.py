import sympy
import pytest

from lie2alg import corpus

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def sym(M):
    """Exact sympy copy of an object matrix (independent rank oracle)."""
    rows, cols = M.shape
    return sympy.Matrix(rows, cols, [sympy.Rational(int(x.numerator), int(x.denominator)) for x in M.reshape(-1)])


def srank(M) -> int:
    if 0 in M.shape:
        return 0
    return sym(M).rank()


@pytest.fixture(scope="session")
def objects():
    return corpus.corpus_objects()


@pytest.fixture(scope="session")
def morphisms():
    return corpus.corpus_morphisms()


@pytest.fixture(scope="session")
def butterflies():
    return corpus.corpus_butterflies()


@pytest.fixture(scope="session")
def equivalences():
    return corpus.corpus_equivalences()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
