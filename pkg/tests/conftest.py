import pytest

from threadquiver import quivers as qv
from threadquiver.window import build_window

LINEAR_A = {n: qv.quiver([chr(ord("a") + i) for i in range(n)],
                         [(chr(ord("a") + i), chr(ord("a") + i + 1))
                          for i in range(n - 1)])
            for n in range(1, 6)}

RIB = qv.quiver(["a", "b", "c", "d", "e"],
                [("a", "b"), ("a", "c"), ("a", "d"),
                 ("b", "c"), ("b", "e"), ("d", "c"), ("d", "e")])

D4 = qv.quiver(["c", "x", "y", "z"], [("x", "c"), ("y", "c"), ("c", "z")])


@pytest.fixture(scope="session")
def a1w():
    return build_window(LINEAR_A[1], 2)


@pytest.fixture(scope="session")
def a2w():
    return build_window(LINEAR_A[2], 3)


@pytest.fixture(scope="session")
def a3w():
    return build_window(LINEAR_A[3], 4)


@pytest.fixture(scope="session")
def a5w():
    return build_window(LINEAR_A[5], 4)


@pytest.fixture(scope="session")
def d4w():
    return build_window(D4, 4)


@pytest.fixture(scope="session")
def ribw():
    return build_window(RIB, 4, lazy=True)


def all_orientations(n):
    """Every orientation of the A_n line, as quivers."""
    out = []
    verts = [chr(ord("a") + i) for i in range(n)]
    for bits in range(2 ** (n - 1)):
        arrows = []
        for i in range(n - 1):
            if bits >> i & 1:
                arrows.append((verts[i + 1], verts[i]))
            else:
                arrows.append((verts[i], verts[i + 1]))
        out.append(qv.quiver(verts, arrows))
    return out


def d4_orientations():
    out = []
    for bits in range(8):
        arrows = []
        for i, arm in enumerate(["x", "y", "z"]):
            if bits >> i & 1:
                arrows.append(("c", arm))
            else:
                arrows.append((arm, "c"))
        out.append(qv.quiver(["c", "x", "y", "z"], arrows))
    return out
