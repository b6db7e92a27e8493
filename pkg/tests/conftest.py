import pytest

from kbevolve.parser import parse_assertion, parse_kb

RUNNING = """\
TBOX
B [= exists R.C.
exists R.C [= D.
D [= C.
ABOX
B(a). D(a). C(b). R(b,b). R(a,a).
"""

TOP_C = """\
TBOX
top [= C.
ABOX
C(a). B(a). C(b). B(b).
"""

DISJOINT = """\
TBOX
C and D [= bot.
ABOX
C(a). D(a).
"""


@pytest.fixture
def running_kb():
    return parse_kb(RUNNING)


@pytest.fixture
def top_c_kb():
    return parse_kb(TOP_C)


@pytest.fixture
def disjoint_kb():
    return parse_kb(DISJOINT)


def A(text):
    return parse_assertion(text)


def names(assertions):
    return sorted(str(a) for a in assertions)
