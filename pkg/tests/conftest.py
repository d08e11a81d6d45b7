import numpy as np
import pytest

from monotree import imgstruct


def bfs_elements(gens, degree, limit=1 << 10):
    """Naive closure of a generating set; independent of any chain logic."""
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    tables = [tuple(int(x) for x in g) for g in gens]
    while frontier:
        fresh = []
        for p in frontier:
            for g in tables:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    fresh.append(q)
                    if len(seen) > limit:
                        raise AssertionError("enumeration oracle limit exceeded")
        frontier = fresh
    return seen


def perm_from_cycles(degree, cycles):
    """1-based cycle list -> 0-based permutation array."""
    perm = np.arange(degree, dtype=np.intp)
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[a - 1] = b - 1
    return perm


@pytest.fixture(scope="session")
def geometric_groups():
    """Chains for levels 1..9, shared across the suite."""
    return {n: imgstruct.build_G(n) for n in range(1, 10)}
