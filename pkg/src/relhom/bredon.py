"""Finite orbit categories, coefficient systems, and equivariant homology
of finite-type cell data over a finite group."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetError, ValidationError
from .exactla import FgAbGroup, IntMatrix, LatticeAccumulator, PresentedComplex
from .groups import FiniteGroup, Subgroup, SubgroupFamily, coset_space
from .modres import DEFAULT_RANK_CAP, GModule, _bar_faces


@dataclass(frozen=True)
class OrbitMorphism:
    """A G-map between homogeneous sets G/H' -> G/K', i.e. the class of
    right translation by a representative a with a H' a^-1 <= K'.
    Two representatives give the same map iff they lie in the same right
    coset of K'; `rep` is the minimal element of that coset."""

    source: Subgroup
    target: Subgroup
    rep: int

    def __repr__(self) -> str:
        return f"R_{self.rep}"


def _canonical_rep(target: Subgroup, a: int) -> int:
    G = target.parent
    return min(G.mult(k, a) for k in target.elements)


class OrbitCategory:
    """The category of homogeneous G-sets G/K for K in a family, with all
    G-maps between them."""

    def __init__(self, group: FiniteGroup, family: SubgroupFamily):
        if family.parent is not group:
            raise ValidationError("family over a different group")
        self.group = group
        self.family = family
        self.objects: List[Subgroup] = family.sorted_members()
        self._hom: Dict[Tuple[Subgroup, Subgroup], Tuple[OrbitMorphism, ...]] = {}
        for src in self.objects:
            for tgt in self.objects:
                reps = set()
                for a in group.elements():
                    if all(
                        group.conjugate(group.inverse[a], x) in set(tgt.elements)
                        for x in src.elements
                    ):
                        # a x a^-1 in tgt for all x in src
                        reps.add(_canonical_rep(tgt, a))
                self._hom[(src, tgt)] = tuple(
                    OrbitMorphism(src, tgt, r) for r in sorted(reps)
                )

    def hom(self, src: Subgroup, tgt: Subgroup) -> Tuple[OrbitMorphism, ...]:
        return self._hom[(src, tgt)]

    def morphism(self, src: Subgroup, tgt: Subgroup, a: int) -> OrbitMorphism:
        if any(
            self.group.conjugate(self.group.inverse[a], x) not in set(tgt.elements)
            for x in src.elements
        ):
            raise ValidationError(
                f"element {a} does not define a map of orbits here"
            )
        return OrbitMorphism(src, tgt, _canonical_rep(tgt, a))

    def identity(self, obj: Subgroup) -> OrbitMorphism:
        return OrbitMorphism(obj, obj, _canonical_rep(obj, 0))

    def compose(self, second: OrbitMorphism, first: OrbitMorphism) -> OrbitMorphism:
        """second after first; classes compose by multiplying representatives."""
        if second.source != first.target:
            raise ValidationError("morphisms are not composable")
        a = self.group.mult(second.rep, first.rep)
        return OrbitMorphism(first.source, second.target, _canonical_rep(second.target, a))

    def validate(self):
        for src in self.objects:
            for mid in self.objects:
                for tgt in self.objects:
                    homs = set(self.hom(src, tgt))
                    for m1 in self.hom(src, mid):
                        for m2 in self.hom(mid, tgt):
                            if self.compose(m2, m1) not in homs:
                                raise ValidationError("composition not closed")


def build_orbit_category(group: FiniteGroup, family: SubgroupFamily) -> OrbitCategory:
    cat = OrbitCategory(group, family)
    cat.validate()
    return cat


class CoefficientSystem:
    """A covariant functor from an orbit category to abelian groups.

    Values are finitely presented (free cover rank plus relation matrix);
    morphism matrices act on the free covers and are functorial modulo the
    relations.
    """

    def __init__(
        self,
        category: OrbitCategory,
        values: Dict[Subgroup, Tuple[int, Optional[IntMatrix]]],
        maps: Dict[OrbitMorphism, IntMatrix],
        validate: bool = True,
    ):
        self.category = category
        self.variance = "covariant"
        self.values = dict(values)
        self.maps = dict(maps)
        self._acc: Dict[Subgroup, Optional[LatticeAccumulator]] = {}
        for obj, (rank, rel) in self.values.items():
            if rel is None or not rel.cols:
                self._acc[obj] = None
            else:
                acc = LatticeAccumulator(rank)
                for j in range(rel.cols):
                    acc.insert_dense(rel.column(j))
                self._acc[obj] = acc
        if validate:
            self.validate()

    def rank(self, obj: Subgroup) -> int:
        return self.values[obj][0]

    def relations(self, obj: Subgroup) -> Optional[IntMatrix]:
        return self.values[obj][1]

    def value_group(self, obj: Subgroup) -> FgAbGroup:
        from .exactla import smith_invariants

        rank, rel = self.values[obj]
        if rel is None or not rel.cols:
            return FgAbGroup(rank)
        inv = smith_invariants(rel)
        return FgAbGroup.from_invariants(inv, rank)

    def matrix(self, mor: OrbitMorphism) -> IntMatrix:
        return self.maps[mor]

    def _zero_mod(self, obj: Subgroup, mat: IntMatrix) -> bool:
        acc = self._acc[obj]
        if acc is None:
            return mat.is_zero()
        return all(acc.contains(mat.column(j)) for j in range(mat.cols))

    def validate(self):
        cat = self.category
        for obj in cat.objects:
            ident = self.matrix(cat.identity(obj))
            if not self._zero_mod(obj, ident - IntMatrix.identity(self.rank(obj))):
                raise ValidationError("identity morphism does not act as identity")
            rel = self.relations(obj)
            if rel is not None and rel.cols:
                for tgt in cat.objects:
                    for mor in cat.hom(obj, tgt):
                        carried = self.matrix(mor) @ rel
                        if not self._zero_mod(tgt, carried):
                            raise ValidationError(
                                "morphism does not preserve relations"
                            )
        for src in cat.objects:
            for mid in cat.objects:
                for m1 in cat.hom(src, mid):
                    mat1 = self.matrix(m1)
                    for tgt in cat.objects:
                        for m2 in cat.hom(mid, tgt):
                            lhs = self.matrix(m2) @ mat1
                            rhs = self.matrix(cat.compose(m2, m1))
                            if not self._zero_mod(tgt, lhs - rhs):
                                raise ValidationError(
                                    f"functoriality fails at {m2} o {m1}"
                                )


def coinvariants_system(m: GModule, category: OrbitCategory) -> CoefficientSystem:
    """The coefficient system K |-> M_K with maps induced by the morphism
    representatives acting on M."""
    if m.group is not category.group:
        raise ValidationError("module over a different group")
    values: Dict[Subgroup, Tuple[int, Optional[IntMatrix]]] = {}
    for obj in category.objects:
        cols: List[List[int]] = []
        if m.relations is not None:
            cols.extend(list(m.relations.column(j)) for j in range(m.relations.cols))
        for kappa in obj.generators():
            ak = m.action_matrix(kappa)
            for i in range(m.rank):
                col = [ak.entry(x, i) for x in range(m.rank)]
                col[i] -= 1
                if any(col):
                    cols.append(col)
        rel = IntMatrix.from_columns(cols, rows=m.rank) if cols else None
        values[obj] = (m.rank, rel)
    maps = {}
    for src in category.objects:
        for tgt in category.objects:
            for mor in category.hom(src, tgt):
                maps[mor] = m.action_matrix(mor.rep)
    return CoefficientSystem(category, values, maps)


def constant_system(category: OrbitCategory, modulus: int = 0) -> CoefficientSystem:
    """The constant functor Z (or Z/modulus) with identity maps."""
    rel = IntMatrix([[modulus]]) if modulus else None
    values = {obj: (1, rel) for obj in category.objects}
    ident = IntMatrix.identity(1)
    maps = {}
    for src in category.objects:
        for tgt in category.objects:
            for mor in category.hom(src, tgt):
                maps[mor] = ident
    return CoefficientSystem(category, values, maps)


# ---------------------------------------------------------------------------
# Equivariant cell data


@dataclass
class GCWCell:
    """One orbit of cells: its stabilizer and the boundary as a formal sum
    of (target cell index in the dimension below, translating element a,
    integer coefficient), where a encodes the orbit map R_a."""

    stabilizer: Subgroup
    boundary: Tuple[Tuple[int, int, int], ...] = ()


class GCWData:
    """Orbit-cell data of a finite-type equivariant CW complex."""

    FORMAT_VERSION = 1

    def __init__(self, group: FiniteGroup, cells: Sequence[Sequence[GCWCell]], validate: bool = True):
        self.group = group
        self.cells = [list(dim) for dim in cells]
        if validate:
            self.validate()

    def dimension(self) -> int:
        return len(self.cells) - 1

    def validate(self):
        G = self.group
        for d, dim_cells in enumerate(self.cells):
            for ci, cell in enumerate(dim_cells):
                if cell.stabilizer.parent is not G:
                    raise ValidationError("stabilizer over a different group")
                if d == 0:
                    if cell.boundary:
                        raise ValidationError("0-cells cannot have a boundary")
                    continue
                for (tgt, a, coeff) in cell.boundary:
                    if not (0 <= tgt < len(self.cells[d - 1])):
                        raise ValidationError(
                            f"cell {ci} in dimension {d} hits a missing cell"
                        )
                    tstab = self.cells[d - 1][tgt].stabilizer
                    for x in cell.stabilizer.elements:
                        if G.conjugate(G.inverse[a], x) not in set(tstab.elements):
                            raise ValidationError(
                                f"boundary entry of cell {ci} in dimension {d} "
                                "is not an orbit map"
                            )
        # formal boundary-squared must vanish in the free morphism algebra
        for d in range(2, len(self.cells)):
            for ci, cell in enumerate(self.cells[d]):
                acc: Dict[Tuple[int, int], int] = {}
                for (tgt, a1, c1) in cell.boundary:
                    for (tgt2, a2, c2) in self.cells[d - 1][tgt].boundary:
                        stab2 = self.cells[d - 2][tgt2].stabilizer
                        key = (tgt2, _canonical_rep(stab2, self.group.mult(a2, a1)))
                        acc[key] = acc.get(key, 0) + c1 * c2
                if any(acc.values()):
                    raise ValidationError(
                        f"formal boundary squared is nonzero on cell {ci} "
                        f"in dimension {d}"
                    )

    # -- JSON wire format

    def to_json(self) -> dict:
        return {
            "format_version": self.FORMAT_VERSION,
            "dimensions": [
                [
                    {
                        "stabilizer": list(cell.stabilizer.generators()),
                        "boundary": [
                            {"cell": t, "a": a, "coeff": c}
                            for (t, a, c) in cell.boundary
                        ],
                    }
                    for cell in dim_cells
                ]
                for dim_cells in self.cells
            ],
        }

    @classmethod
    def from_json(cls, group: FiniteGroup, doc: dict) -> "GCWData":
        if doc.get("format_version") != cls.FORMAT_VERSION:
            raise ValidationError("unsupported cell-data format version")
        cells: List[List[GCWCell]] = []
        for dim_cells in doc["dimensions"]:
            level = []
            for cell in dim_cells:
                stab = group.subgroup_generated(cell.get("stabilizer", []))
                bdry = tuple(
                    (int(e["cell"]), int(e["a"]), int(e["coeff"]))
                    for e in cell.get("boundary", [])
                )
                level.append(GCWCell(stab, bdry))
            cells.append(level)
        return cls(group, cells)


def bredon_complex(
    x: GCWData,
    system: CoefficientSystem,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> PresentedComplex:
    """The chain complex with degree-d term the direct sum of the values of
    the system at the cell stabilizers."""
    cat = system.category
    obj_set = set(cat.objects)
    ranks: List[int] = []
    offsets: List[List[int]] = []
    rel_blocks: Dict[int, List[Tuple[int, IntMatrix]]] = {}
    for d, dim_cells in enumerate(x.cells):
        offs = []
        total = 0
        blocks = []
        for cell in dim_cells:
            if cell.stabilizer not in obj_set:
                raise ValidationError(
                    f"stabilizer {list(cell.stabilizer.elements)} outside the family"
                )
            offs.append(total)
            rel = system.relations(cell.stabilizer)
            if rel is not None and rel.cols:
                blocks.append((total, rel))
            total += system.rank(cell.stabilizer)
        if total > rank_cap:
            raise BudgetError(f"equivariant chain group in dimension {d}", total, rank_cap)
        ranks.append(total)
        offsets.append(offs)
        if blocks:
            rel_blocks[d] = blocks
    bounds: Dict[int, IntMatrix] = {}
    for d in range(1, len(x.cells)):
        rows = ranks[d - 1]
        out = [[0] * ranks[d] for _ in range(rows)]
        for ci, cell in enumerate(x.cells[d]):
            coff = offsets[d][ci]
            for (tgt, a, coeff) in cell.boundary:
                mor = cat.morphism(
                    cell.stabilizer, x.cells[d - 1][tgt].stabilizer, a
                )
                mat = system.matrix(mor)
                roff = offsets[d - 1][tgt]
                for i in range(mat.rows):
                    row = out[roff + i]
                    mrow = mat.data[i]
                    for j in range(mat.cols):
                        v = mrow[j]
                        if v:
                            row[coff + j] += coeff * v
        bounds[d] = IntMatrix(out, cols=ranks[d])
    return PresentedComplex(0, ranks, bounds, rel_blocks)


def bredon_homology(
    x: GCWData,
    system: CoefficientSystem,
    degree: int,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> FgAbGroup:
    return bredon_complex(x, system, rank_cap).homology(degree)


def cellular_chain_modules(x: GCWData) -> Tuple[List[GModule], List[IntMatrix]]:
    """The ordinary cellular chain complex of the cell data, as permutation
    modules (one coset block per orbit cell) with equivariant boundaries."""
    G = x.group
    terms: List[GModule] = []
    bases: List[List[Tuple[int, int]]] = []  # (cell index, coset index)
    index_maps: List[Dict[Tuple[int, int], int]] = []
    coset_spaces = []
    for d, dim_cells in enumerate(x.cells):
        spaces = [coset_space(cell.stabilizer) for cell in dim_cells]
        coset_spaces.append(spaces)
        basis = [
            (ci, c)
            for ci, cell in enumerate(dim_cells)
            for c in range(spaces[ci].size)
        ]
        idx = {b: i for i, b in enumerate(basis)}
        perms = []
        for g in G.elements():
            perms.append(
                tuple(idx[(ci, spaces[ci].act(g, c))] for (ci, c) in basis)
            )
        terms.append(GModule(G, len(basis), perms=perms, validate=False))
        bases.append(basis)
        index_maps.append(idx)
    bounds: List[IntMatrix] = []
    for d in range(1, len(x.cells)):
        rows = terms[d - 1].rank
        cols_out: List[List[int]] = []
        for (ci, c) in bases[d]:
            cell = x.cells[d][ci]
            g_rep = coset_spaces[d][ci].rep(c)
            col = [0] * rows
            for (tgt, a, coeff) in cell.boundary:
                # the cell at coset c is g_rep * (rep cell); its boundary
                # entry sits at the coset g_rep * a^-1 * (target stabilizer)
                elt = G.mult(g_rep, G.inverse[a])
                tcs = coset_spaces[d - 1][tgt]
                col[index_maps[d - 1][(tgt, tcs.coset_of[elt])]] += coeff
            cols_out.append(col)
        bounds.append(IntMatrix.from_columns(cols_out, rows=rows))
    return terms, bounds


def takasu_pair_complex(
    h: Subgroup,
    length: int,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> GCWData:
    """Equivariant cell data for the space obtained from the standard free
    contractible complex by collapsing each coset copy of the subgroup's
    contractible complex to a cone point: one fixed orbit of 0-cells and
    free orbits of tuple cells in higher dimensions."""
    G = h.parent
    hset = set(h.elements)
    trivial = G.trivial_subgroup()
    cells: List[List[GCWCell]] = [[GCWCell(h)]]
    prev_index: Dict[Tuple[int, ...], int] = {}
    for d in range(1, length + 1):
        count = G.order ** d - h.order ** d
        if count > rank_cap:
            raise BudgetError(
                f"pair complex cells in dimension {d} for {G.label}", count, rank_cap
            )
        tuples = [
            t
            for t in itertools.product(range(G.order), repeat=d)
            if not all(x in hset for x in t)
        ]
        level: List[GCWCell] = []
        if d == 1:
            for (g,) in tuples:
                bdry = (
                    (0, G.inverse[g], 1),
                    (0, 0, -1),
                )
                level.append(GCWCell(trivial, bdry))
        else:
            for rest in tuples:
                acc: Dict[Tuple[int, int], int] = {}
                for rest2, translate, sign in _bar_faces(G, rest):
                    idx = prev_index.get(rest2)
                    if idx is None:
                        continue  # face inside one coset is collapsed
                    key = (idx, G.inverse[translate])
                    acc[key] = acc.get(key, 0) + sign
                level.append(
                    GCWCell(
                        trivial,
                        tuple((t, a, c) for (t, a), c in acc.items() if c),
                    )
                )
        cells.append(level)
        prev_index = {t: i for i, t in enumerate(tuples)}
    return GCWData(G, cells)
