import pytest

import relhom as R


@pytest.fixture(scope="session")
def c2():
    return R.cyclic_group(2)


@pytest.fixture(scope="session")
def c4():
    return R.cyclic_group(4)


@pytest.fixture(scope="session")
def c6():
    return R.cyclic_group(6)


@pytest.fixture(scope="session")
def s3():
    return R.symmetric_group(3)


@pytest.fixture(scope="session")
def v4():
    return R.direct_product(R.cyclic_group(2), R.cyclic_group(2))


@pytest.fixture(scope="session")
def c4_c2(c4):
    return c4.subgroup_generated([2])


@pytest.fixture(scope="session")
def s3_transposition(s3):
    t = next(g for g in s3.elements() if s3.element_order(g) == 2)
    return s3.subgroup_generated([t])


@pytest.fixture(scope="session")
def s3_a3(s3):
    r = next(g for g in s3.elements() if s3.element_order(g) == 3)
    return s3.subgroup_generated([r])


def quaternion_group():
    """Order-8 quaternion group from symbolic unit multiplication."""
    elems = [(1, "1"), (1, "i"), (1, "j"), (1, "k"),
             (-1, "1"), (-1, "i"), (-1, "j"), (-1, "k")]
    mul_unit = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"),
        ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"),
        ("k", "i"): (1, "j"), ("i", "k"): (-1, "j"),
    }
    idx = {e: i for i, e in enumerate(elems)}
    table = []
    for (s1, u1) in elems:
        row = []
        for (s2, u2) in elems:
            s3_, u3 = mul_unit[(u1, u2)]
            row.append(idx[(s1 * s2 * s3_, u3)])
        table.append(row)
    return R.FiniteGroup(table, label="Q8")


def alternating4():
    return R.group_from_permutations([[1, 2, 0, 3], [1, 0, 3, 2]])


def cyclic_homology_list(n, top):
    """H_0..H_top of the cyclic group of order n, via its periodic resolution."""
    g = R.cyclic_group(n)
    cx = R.cyclic_resolution(g, top + 1).tensor(R.GModule.trivial(g))
    return [cx.homology(i) for i in range(top + 1)]
