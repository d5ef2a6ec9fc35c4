import random

import pytest

import relhom as R
from relhom import (
    ChainComplex,
    ChainMap,
    FgAbGroup,
    HomologyData,
    IntMatrix,
    PresentedChainMap,
    PresentedComplex,
)
from relhom.errors import ValidationError


def test_smith_zero_and_identity():
    z = IntMatrix.zeros(3, 2)
    sf = R.smith_form(z)
    assert sf.s.is_zero()
    assert sf.u == IntMatrix.identity(3)
    assert sf.v == IntMatrix.identity(2)
    ident = IntMatrix.identity(4)
    assert R.smith_invariants(ident) == [1, 1, 1, 1]


def test_smith_2468():
    a = IntMatrix([[2, 4], [6, 8]])
    sf = R.smith_form(a)
    assert sf.invariants == [2, 4]
    assert sf.u @ sf.s @ sf.v == a
    assert abs(sf.u.det()) == 1
    assert abs(sf.v.det()) == 1


def test_solve_integer():
    assert R.solve_integer(IntMatrix([[2]]), [4]) == [2]
    assert R.solve_integer(IntMatrix([[2]]), [3]) is None
    a = IntMatrix([[2, 3]])
    x = R.solve_integer(a, [1])
    assert x is not None and a.apply(x) == [1]


def test_kernel_basis_examples():
    k = R.kernel_basis(IntMatrix([[1, 1]]))
    assert k.cols == 1
    assert sorted(k.column(0)) == [-1, 1]
    assert R.kernel_basis(IntMatrix.identity(3)).cols == 0
    k2 = R.kernel_basis(IntMatrix([[2, 4]]))
    assert k2.cols == 1
    col = k2.column(0)
    assert 2 * col[0] + 4 * col[1] == 0
    g, _, _ = R.xgcd(col[0], col[1])
    assert g == 1  # saturated


def test_rank_nullity_random():
    rng = random.Random(11)
    for _ in range(60):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        a = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        assert R.rank_z(a) + R.kernel_basis(a).cols == n


def test_homology_simple_complexes():
    # 0 -> Z -0-> Z -> 0
    c = ChainComplex(0, [1, 1], {1: IntMatrix([[0]])})
    assert str(c.homology(0)) == "Z"
    assert str(c.homology(1)) == "Z"
    # 0 -> Z -2-> Z -> 0
    c = ChainComplex(0, [1, 1], {1: IntMatrix([[2]])})
    assert str(c.homology(0)) == "Z/2"
    assert str(c.homology(1)) == "0"
    # circle: one 0-cell, one 1-cell, zero boundary
    c = ChainComplex(0, [1, 1], {1: IntMatrix([[0]])})
    assert c.homology(0) == FgAbGroup(1)
    assert c.homology(1) == FgAbGroup(1)


def test_complex_validates_dd_zero():
    with pytest.raises(ValidationError):
        ChainComplex(
            0,
            [1, 1, 1],
            {1: IntMatrix([[1]]), 2: IntMatrix([[1]])},
        )


def _random_unimodular(rng, n, ops=12):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for r in range(n):
            m[r][i] += q * m[r][j]
        for c in range(n):
            inv[j][c] -= q * inv[i][c]
    return IntMatrix(m), IntMatrix(inv)


def test_homology_basis_change_invariance():
    rng = random.Random(23)
    for _ in range(40):
        m, n, p = rng.randint(1, 6), rng.randint(2, 6), rng.randint(1, 5)
        d1 = IntMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)])
        ker = R.kernel_basis(d1)
        coeff = IntMatrix(
            [[rng.randint(-3, 3) for _ in range(p)] for _ in range(ker.cols)]
        )
        d2 = ker @ coeff if ker.cols else IntMatrix.zeros(n, p)
        c = ChainComplex(0, [m, n, p], {1: d1, 2: d2})
        pmat, pinv = _random_unimodular(rng, m)
        qmat, qinv = _random_unimodular(rng, n)
        smat, _ = _random_unimodular(rng, p)
        c2 = ChainComplex(
            0, [m, n, p], {1: pmat @ d1 @ qmat, 2: qinv @ d2 @ smat}
        )
        for deg in range(3):
            assert c.homology(deg) == c2.homology(deg)


def test_induced_map_identity_and_mod2():
    c = ChainComplex(0, [1, 1], {1: IntMatrix([[2]])})
    ident = ChainMap(c, c, {0: IntMatrix([[1]]), 1: IntMatrix([[1]])})
    assert R.induced_map(ident, 0) == IntMatrix([[1]])
    double = ChainMap(c, c, {0: IntMatrix([[2]]), 1: IntMatrix([[1]])})
    # multiplication by 2 vanishes on Z/2
    assert R.induced_map(double, 0) == IntMatrix([[0]])


def test_induced_map_composition():
    rng = random.Random(5)
    c = ChainComplex(0, [2, 2], {1: IntMatrix([[2, 0], [0, 3]])})
    f = ChainMap(
        c, c, {0: IntMatrix([[1, 1], [0, 1]]), 1: IntMatrix([[1, 0], [0, 1]])},
        validate=False,
    )
    g = ChainMap(
        c, c, {0: IntMatrix([[1, 0], [1, 1]]), 1: IntMatrix([[1, 0], [0, 1]])},
        validate=False,
    )
    comp = g.compose(f)
    m1 = R.induced_map(comp, 0)
    m2 = R.induced_map(g, 0) @ R.induced_map(f, 0)
    tgt = c.homology(0)
    assert R.is_zero_map(m1 - m2, tgt)


def test_chain_homotopic_maps_agree_on_homology():
    # two-term complex with boundary d; f = id, g = id + d h + h d
    d = IntMatrix([[0, 2], [0, 0]])
    c = ChainComplex(0, [2, 2], {1: d})
    h0 = IntMatrix([[0, 0], [1, 0]])  # degree-raising homotopy C_0 -> C_1
    f0 = IntMatrix.identity(2)
    g0 = f0 + d @ h0
    g1 = IntMatrix.identity(2) + h0 @ d
    f = ChainMap(c, c, {0: f0, 1: IntMatrix.identity(2)})
    g = ChainMap(c, c, {0: g0, 1: g1})
    for deg in [0, 1]:
        assert R.induced_map(f, deg) == R.induced_map(g, deg)


def test_fgabgroup_formatting_and_arithmetic():
    assert str(FgAbGroup(0)) == "0"
    assert str(FgAbGroup(1)) == "Z"
    assert str(FgAbGroup(2)) == "Z^2"
    assert str(FgAbGroup(1, [2, 4])) == "Z + Z/2 + Z/4"
    assert FgAbGroup(0, [2, 3]) == FgAbGroup(0, [6])
    assert FgAbGroup(0, [12, 60]) == FgAbGroup(0, [12, 60])
    assert FgAbGroup(0, [4, 6]).torsion == (2, 12)
    a = FgAbGroup(1, [4])
    assert str(a.tensor(a)) == "Z + Z/4 + Z/4 + Z/4"
    assert str(a.tor(a)) == "Z/4"
    assert str(a.direct_sum(FgAbGroup(0, [2]))) == "Z + Z/2 + Z/4"


def test_hom_kernel_cokernel():
    # multiplication by 2: Z -> Z
    two = IntMatrix([[2]])
    z = FgAbGroup(1)
    assert str(R.hom_kernel(two, z, z)) == "0"
    assert str(R.hom_cokernel(two, z)) == "Z/2"
    # zero map Z/2 -> Z/2
    z2 = FgAbGroup(0, [2])
    zero = IntMatrix([[0]])
    assert str(R.hom_kernel(zero, z2, z2)) == "Z/2"
    assert str(R.hom_cokernel(zero, z2)) == "Z/2"
    assert R.is_isomorphism(IntMatrix([[1]]), z2, z2)
    assert not R.is_isomorphism(zero, z2, z2)


def test_sequence_exact_at():
    z = FgAbGroup(1)
    z2 = FgAbGroup(0, [2])
    # Z -2-> Z -> Z/2 is exact at the middle Z
    ok, _ = R.sequence_exact_at(IntMatrix([[2]]), z, z, IntMatrix([[1]]), z2)
    assert ok
    # Z -4-> Z -> Z/2 is not
    ok, why = R.sequence_exact_at(IntMatrix([[4]]), z, z, IntMatrix([[1]]), z2)
    assert not ok and why


def test_presented_complex_mod_k():
    # chain complex of a circle with Z/4 coefficients via relations
    d1 = IntMatrix([[0]])
    pc = PresentedComplex(
        0, [1, 1], {1: d1},
        {0: [(0, IntMatrix([[4]]))], 1: [(0, IntMatrix([[4]]))]},
    )
    assert str(pc.homology(0)) == "Z/4"
    assert str(pc.homology(1)) == "Z/4"


def test_presented_complex_top_degree_relations():
    # single degree with a relation: the group is Z/3, not Z
    pc = PresentedComplex(0, [1], {}, {0: [(0, IntMatrix([[3]]))]})
    assert str(pc.homology(0)) == "Z/3"


def test_presented_chain_map_induced():
    # multiplication by 2 on the Z/4 circle kills nothing in degree 0
    d1 = IntMatrix([[0]])
    rel = {0: [(0, IntMatrix([[4]]))], 1: [(0, IntMatrix([[4]]))]}
    pc = PresentedComplex(0, [1, 1], {1: d1}, rel)
    pm = PresentedChainMap(pc, pc, {0: IntMatrix([[2]]), 1: IntMatrix([[2]])})
    mat = pm.induced(0)
    assert mat == IntMatrix([[2]])


def test_homology_data_coordinates_roundtrip():
    d1 = IntMatrix([[0, 0]])
    d2 = IntMatrix([[2], [0]])
    hd = HomologyData(d1, d2)
    assert str(hd.group) == "Z + Z/2"
    for i, cyc in enumerate(hd.generator_cycles()):
        coords = hd.coords_of_cycle(cyc)
        assert coords == [1 if j == i else 0 for j in range(len(coords))]
    with pytest.raises(ValidationError):
        HomologyData(IntMatrix([[1, 0]]), d2).coords_of_cycle([1, 0])
