"""Modules over group rings as integer lattices with action, free
resolutions (generic engine, bar, periodic cyclic, relative standard),
tensor products over the group ring, and Tor."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetError, ValidationError
from .exactla import (
    IntMatrix,
    IntSolver,
    LatticeAccumulator,
    PresentedComplex,
    FgAbGroup,
    _Eliminator,
    kernel_basis,
)
from .groups import FiniteGroup, Subgroup, coset_space, subgroup_as_group

DEFAULT_RANK_CAP = 5000

# exhaustive lattice-level exactness checks are skipped above this Z-rank
VALIDATION_RANK_CAP = 1500


class GModule:
    """A Z[G]-module: an integer lattice with a (left) action of G.

    The action is stored either as index permutations (free and permutation
    modules) or as dense unimodular matrices.  An optional relation matrix
    turns the lattice into a finitely presented module; the group law and
    equivariance are then only required modulo the relation lattice.
    """

    __slots__ = ("group", "rank", "_perms", "_mats", "relations", "label", "_rel_acc")

    def __init__(
        self,
        group: FiniteGroup,
        rank: int,
        *,
        perms: Optional[Sequence[Sequence[int]]] = None,
        mats: Optional[Sequence[IntMatrix]] = None,
        relations: Optional[IntMatrix] = None,
        label: str = "",
        validate: bool = True,
    ):
        if (perms is None) == (mats is None):
            raise ValidationError("provide exactly one of perms or mats")
        self.group = group
        self.rank = int(rank)
        self._perms = tuple(tuple(p) for p in perms) if perms is not None else None
        self._mats = tuple(mats) if mats is not None else None
        self.relations = relations
        self.label = label
        self._rel_acc = None
        if relations is not None:
            if relations.rows != self.rank:
                raise ValidationError("relation matrix row count != rank")
            acc = LatticeAccumulator(self.rank)
            for j in range(relations.cols):
                acc.insert_dense(relations.column(j))
            self._rel_acc = acc
        if validate:
            self._validate()

    # -- access

    def act(self, g: int, vec: Sequence[int]) -> List[int]:
        if self._perms is not None:
            out = [0] * self.rank
            p = self._perms[g]
            for i, x in enumerate(vec):
                if x:
                    out[p[i]] = x
            return out
        return self._mats[g].apply(vec)

    def action_matrix(self, g: int) -> IntMatrix:
        if self._mats is not None:
            return self._mats[g]
        p = self._perms[g]
        cols = []
        for i in range(self.rank):
            col = [0] * self.rank
            col[p[i]] = 1
            cols.append(col)
        return IntMatrix.from_columns(cols, rows=self.rank)

    def _mod_rel_zero(self, mat: IntMatrix) -> bool:
        if self._rel_acc is None:
            return mat.is_zero()
        return all(
            self._rel_acc.contains(mat.column(j)) for j in range(mat.cols)
        )

    def _validate(self):
        G = self.group
        if self._perms is not None:
            if len(self._perms) != G.order:
                raise ValidationError("need one permutation per group element")
            if self._perms[0] != tuple(range(self.rank)):
                raise ValidationError("identity must act trivially")
            pair_check = G.order <= 12
            pairs = (
                [(g, h) for g in G.elements() for h in G.elements()]
                if pair_check
                else [(g, h) for g in G.generators() for h in G.elements()]
            )
            for g, h in pairs:
                pg, ph = self._perms[g], self._perms[h]
                pgh = self._perms[G.mult(g, h)]
                if any(pgh[i] != pg[ph[i]] for i in range(self.rank)):
                    raise ValidationError(f"action law fails at ({g}, {h})")
        else:
            if len(self._mats) != G.order:
                raise ValidationError("need one matrix per group element")
            for m in self._mats:
                if m.shape != (self.rank, self.rank):
                    raise ValidationError("action matrix shape mismatch")
            ident = IntMatrix.identity(self.rank)
            if not self._mod_rel_zero(self._mats[0] - ident):
                raise ValidationError("identity must act trivially")
            pair_check = G.order <= 12
            pairs = (
                [(g, h) for g in G.elements() for h in G.elements()]
                if pair_check
                else [(g, h) for g in G.generators() for h in G.elements()]
            )
            for g, h in pairs:
                lhs = self._mats[g] @ self._mats[h]
                if not self._mod_rel_zero(lhs - self._mats[G.mult(g, h)]):
                    raise ValidationError(f"action law fails at ({g}, {h})")
            if self.relations is None and self.rank <= 40:
                for g in G.elements():
                    if abs(self._mats[g].det()) != 1:
                        raise ValidationError(f"action of {g} is not unimodular")
        if self.relations is not None:
            # the relation lattice must be G-stable
            for g in self.group.generators():
                for j in range(self.relations.cols):
                    img = self.act(g, self.relations.column(j))
                    if not self._rel_acc.contains(img):
                        raise ValidationError("relation lattice is not G-stable")

    def is_constant(self) -> bool:
        """Does every group element act as the identity (modulo relations)?"""
        ident = IntMatrix.identity(self.rank)
        return all(
            self._mod_rel_zero(self.action_matrix(g) - ident)
            for g in self.group.generators()
        )

    # -- constructors

    @classmethod
    def trivial(cls, group: FiniteGroup, rank: int = 1) -> "GModule":
        return cls(
            group,
            rank,
            perms=[tuple(range(rank))] * group.order,
            label="Z" if rank == 1 else f"Z^{rank}",
            validate=False,
        )

    @classmethod
    def trivial_mod(cls, group: FiniteGroup, k: int) -> "GModule":
        if k < 2:
            raise ValidationError("modulus must be >= 2")
        return cls(
            group,
            1,
            mats=[IntMatrix.identity(1)] * group.order,
            relations=IntMatrix([[k]]),
            label=f"Z/{k}",
            validate=False,
        )

    @classmethod
    def free(cls, group: FiniteGroup, r: int) -> "GModule":
        n = group.order
        perms = []
        for g in group.elements():
            p = [0] * (n * r)
            row = group.table[g]
            for i in range(r):
                base = i * n
                for h in range(n):
                    p[base + h] = base + row[h]
            perms.append(tuple(p))
        return cls(group, n * r, perms=perms, label=f"Z[G]^{r}", validate=False)

    @classmethod
    def regular(cls, group: FiniteGroup) -> "GModule":
        m = cls.free(group, 1)
        m.label = "Z[G]"
        return m

    @classmethod
    def permutation(cls, subgroup: Subgroup) -> "GModule":
        cs = coset_space(subgroup)
        G = subgroup.parent
        perms = [tuple(cs.action[g]) for g in G.elements()]
        return cls(G, cs.size, perms=perms, label="Z[G/H]")

    @classmethod
    def from_action_matrices(
        cls,
        group: FiniteGroup,
        mats: Sequence[IntMatrix],
        relations: Optional[IntMatrix] = None,
        label: str = "",
    ) -> "GModule":
        rank = mats[0].rows
        return cls(group, rank, mats=mats, relations=relations, label=label)

    @classmethod
    def from_generator_action(
        cls, group: FiniteGroup, gen_mats: Dict[int, IntMatrix], label: str = ""
    ) -> "GModule":
        """Extend matrices given on a generating set to the whole group."""
        rank = next(iter(gen_mats.values())).rows
        mats: Dict[int, IntMatrix] = {0: IntMatrix.identity(rank)}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, mg in gen_mats.items():
                    y = group.mult(g, x)
                    if y not in mats:
                        mats[y] = mg @ mats[x]
                        nxt.append(y)
            frontier = nxt
        if len(mats) != group.order:
            raise ValidationError("generator matrices do not reach the whole group")
        return cls(group, rank, mats=[mats[g] for g in group.elements()], label=label)

    def __repr__(self) -> str:
        return f"GModule({self.label or 'lattice'}, rank={self.rank}, over {self.group.label})"


class GModuleHom:
    """Equivariant map of modules over the same group."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: GModule, target: GModule, matrix: IntMatrix, validate: bool = True):
        if source.group is not target.group:
            raise ValidationError("modules over different groups")
        if matrix.shape != (target.rank, source.rank):
            raise ValidationError("hom matrix shape mismatch")
        self.source = source
        self.target = target
        self.matrix = matrix
        if validate:
            for g in source.group.generators():
                lhs = matrix @ source.action_matrix(g)
                rhs = target.action_matrix(g) @ matrix
                if not target._mod_rel_zero(lhs - rhs):
                    raise ValidationError(f"hom is not equivariant at {g}")


@dataclass
class StandardModules:
    """The permutation module Z[G/H], its augmentation onto Z, the kernel
    module with basis {g_iH - H}, and its embedding into Z[G/H]."""

    subgroup: Subgroup
    perm: GModule
    augmentation: GModuleHom
    i_module: GModule
    embedding: GModuleHom


@lru_cache(maxsize=None)
def standard_modules(h: Subgroup) -> StandardModules:
    G = h.parent
    cs = coset_space(h)
    perm = GModule.permutation(h)
    triv = GModule.trivial(G)
    aug = GModuleHom(perm, triv, IntMatrix([[1] * cs.size]))
    k = cs.size
    # action on the basis b_j = e_j - e_0 (j = 1..k-1)
    mats = []
    for g in G.elements():
        cols = []
        for j in range(1, k):
            col = [0] * (k - 1)
            tj = cs.act(g, j)
            t0 = cs.act(g, 0)
            if tj != 0:
                col[tj - 1] += 1
            if t0 != 0:
                col[t0 - 1] -= 1
            cols.append(col)
        mats.append(IntMatrix.from_columns(cols, rows=k - 1) if cols else IntMatrix.zeros(0, 0))
    i_module = GModule(G, k - 1, mats=mats, label="I(G,H)")
    emb_cols = []
    for j in range(1, k):
        col = [0] * k
        col[j] = 1
        col[0] = -1
        emb_cols.append(col)
    emb = GModuleHom(
        i_module, perm, IntMatrix.from_columns(emb_cols, rows=k) if emb_cols else IntMatrix.zeros(k, 0)
    )
    return StandardModules(h, perm, aug, i_module, emb)


def restriction(m: GModule, h: Subgroup) -> GModule:
    """The same lattice as a module over the subgroup (re-indexed)."""
    if h.parent is not m.group:
        raise ValidationError("subgroup of a different group")
    hgrp, embed = subgroup_as_group(h)
    if m._perms is not None:
        return GModule(
            hgrp, m.rank, perms=[m._perms[g] for g in embed],
            relations=m.relations, label=f"res {m.label}", validate=False,
        )
    return GModule(
        hgrp, m.rank, mats=[m._mats[g] for g in embed],
        relations=m.relations, label=f"res {m.label}", validate=False,
    )


# ---------------------------------------------------------------------------
# Free resolutions


class FreeResolution:
    """Resolution of a module by free Z[G]-modules.

    Degree-k boundaries are stored by their values on the free generators
    (vectors in the Z-basis (i, g) -> i*|G| + g of the previous term) and
    materialized to full matrices on demand.
    """

    def __init__(
        self,
        group: FiniteGroup,
        module: GModule,
        free_ranks: Sequence[int],
        gen_images: Sequence[Sequence[Sequence[int]]],
        label: str = "",
    ):
        self.group = group
        self.module = module
        self.free_ranks = [int(r) for r in free_ranks]
        self.gen_images = [[list(v) for v in level] for level in gen_images]
        self.label = label
        self._matrix_cache: Dict[int, IntMatrix] = {}

    @property
    def length(self) -> int:
        return len(self.free_ranks) - 1

    def z_rank(self, k: int) -> int:
        return self.group.order * self.free_ranks[k]

    def augmentation_matrix(self) -> IntMatrix:
        if 0 not in self._matrix_cache:
            G = self.group
            n = G.order
            cols = []
            for j in range(self.free_ranks[0]):
                base = self.gen_images[0][j]
                for g in range(n):
                    cols.append(self.module.act(g, base))
            self._matrix_cache[0] = IntMatrix.from_columns(cols, rows=self.module.rank)
        return self._matrix_cache[0]

    def boundary_matrix(self, k: int) -> IntMatrix:
        """Boundary F_k -> F_{k-1} in the induced Z-basis (1 <= k <= length)."""
        if not (1 <= k <= self.length):
            raise ValidationError(f"no boundary at degree {k}")
        if k not in self._matrix_cache:
            G = self.group
            n = G.order
            rows = self.z_rank(k - 1)
            cols = []
            for j in range(self.free_ranks[k]):
                base = self.gen_images[k][j]
                for g in range(n):
                    col = [0] * rows
                    row_g = G.table[g]
                    for idx, c in enumerate(base):
                        if c:
                            i, hh = divmod(idx, n)
                            col[i * n + row_g[hh]] = c
                    cols.append(col)
            self._matrix_cache[k] = IntMatrix.from_columns(cols, rows=rows)
        return self._matrix_cache[k]

    def apply_free_map(self, gen_cols: Sequence[Sequence[int]], vec: Sequence[int]) -> List[int]:
        """Apply the equivariant map with the given generator columns to a
        vector of the free module Z[G]^s (s = len(gen_cols))."""
        G = self.group
        n = G.order
        if not gen_cols:
            return []
        rows = len(gen_cols[0])
        out = [0] * rows
        for idx, c in enumerate(vec):
            if c:
                j, g = divmod(idx, n)
                base = gen_cols[j]
                row_g = G.table[g]
                for bidx, bc in enumerate(base):
                    if bc:
                        i, hh = divmod(bidx, n)
                        out[i * n + row_g[hh]] += c * bc
        return out

    def apply_boundary(self, k: int, vec: Sequence[int]) -> List[int]:
        return self.apply_free_map(self.gen_images[k], vec)

    def validate(self, exactness_cap: int = VALIDATION_RANK_CAP):
        """Check the augmented complex: boundaries compose to zero, and
        (up to the cap) kernel equals image at every stage."""
        aug = self.augmentation_matrix()
        if self.length >= 1:
            d1 = self.boundary_matrix(1)
            if not (aug @ d1).is_zero():
                raise ValidationError("augmentation does not kill the first boundary")
        for k in range(2, self.length + 1):
            a = self.boundary_matrix(k - 1)
            b = self.boundary_matrix(k)
            if not (a @ b).is_zero():
                raise ValidationError(f"boundary squared nonzero at degree {k}")
        # image of the augmentation must be everything
        acc = LatticeAccumulator(self.module.rank)
        for j in range(self.augmentation_matrix().cols):
            acc.insert_dense(aug.column(j))
        if not acc.is_all_of_ambient():
            raise ValidationError("augmentation is not surjective")
        for k in range(1, self.length + 1):
            if self.z_rank(k - 1) > exactness_cap or self.z_rank(k) > exactness_cap:
                continue
            prev = aug if k == 1 else self.boundary_matrix(k - 1)
            ker = kernel_basis(prev)
            img = LatticeAccumulator(self.z_rank(k - 1))
            bm = self.boundary_matrix(k)
            for j in range(bm.cols):
                img.insert_dense(bm.column(j))
            for j in range(ker.cols):
                if not img.contains(ker.column(j)):
                    raise ValidationError(f"resolution not exact at stage {k - 1}")

    def tensor(self, m: GModule) -> PresentedComplex:
        return tensor_free_resolution(self, m)

    def __repr__(self) -> str:
        return (
            f"FreeResolution({self.label or self.module.label}, "
            f"ranks={self.free_ranks}, over {self.group.label})"
        )


def _tensor_gen_columns(
    gen_cols: Sequence[Sequence[int]],
    target_gens: int,
    group: FiniteGroup,
    m: GModule,
) -> IntMatrix:
    """Matrix of (free map) tensor_Z[G] M: block (i, j) = sum_h c * act(h^-1)."""
    n = group.order
    rk = m.rank
    rows = target_gens * rk
    cols_out: List[List[int]] = []
    act_inv = [m.action_matrix(group.inverse[h]) for h in range(n)]
    for j in range(len(gen_cols)):
        base = gen_cols[j]
        for b in range(rk):
            col = [0] * rows
            for idx, c in enumerate(base):
                if c:
                    i, hh = divmod(idx, n)
                    acol = act_inv[hh].column(b)
                    off = i * rk
                    for a, v in enumerate(acol):
                        if v:
                            col[off + a] += c * v
            cols_out.append(col)
    return (
        IntMatrix.from_columns(cols_out, rows=rows)
        if cols_out
        else IntMatrix.zeros(rows, 0)
    )


def tensor_free_resolution(res: FreeResolution, m: GModule) -> PresentedComplex:
    """The complex res tensor_Z[G] M (diagonal coinvariants convention)."""
    if m.group is not res.group:
        raise ValidationError("module over a different group")
    ranks = [r * m.rank for r in res.free_ranks]
    bounds: Dict[int, IntMatrix] = {}
    for k in range(1, res.length + 1):
        bounds[k] = _tensor_gen_columns(
            res.gen_images[k], res.free_ranks[k - 1], res.group, m
        )
    rel_blocks: Dict[int, List[Tuple[int, IntMatrix]]] = {}
    if m.relations is not None and m.relations.cols:
        for k in range(res.length + 1):
            rel_blocks[k] = [
                (i * m.rank, m.relations) for i in range(res.free_ranks[k])
            ]
    return PresentedComplex(0, ranks, bounds, rel_blocks)


def tensor_gmodule_complex(
    terms: Sequence[GModule], boundaries: Sequence[IntMatrix], m: GModule
) -> PresentedComplex:
    """Tensor an arbitrary complex of modules with M over the group ring,
    via diagonal coinvariants of the termwise tensor product."""
    G = m.group
    gens = G.generators()
    ranks = []
    rel_blocks: Dict[int, List[Tuple[int, IntMatrix]]] = {}
    for n, c in enumerate(terms):
        if c.group is not G:
            raise ValidationError("complex and module over different groups")
        rc, rm = c.rank, m.rank
        ranks.append(rc * rm)
        cols: List[List[int]] = []
        for g in gens:
            ag = c.action_matrix(g)
            bg = m.action_matrix(g)
            for i in range(rc):
                ai = ag.column(i)
                for b in range(rm):
                    bb = bg.column(b)
                    col = [0] * (rc * rm)
                    for x, av in enumerate(ai):
                        if av:
                            off = x * rm
                            for y, bv in enumerate(bb):
                                if bv:
                                    col[off + y] += av * bv
                    col[i * rm + b] -= 1
                    cols.append(col)
        if m.relations is not None:
            for i in range(rc):
                for j in range(m.relations.cols):
                    col = [0] * (rc * rm)
                    for y in range(rm):
                        v = m.relations.entry(y, j)
                        if v:
                            col[i * rm + y] = v
                    cols.append(col)
        if cols:
            rel_blocks[n] = [(0, IntMatrix.from_columns(cols, rows=rc * rm))]
    bounds: Dict[int, IntMatrix] = {}
    for k, d in enumerate(boundaries, start=1):
        rc_prev, rc = terms[k - 1].rank, terms[k].rank
        rm = m.rank
        out = [[0] * (rc * rm) for _ in range(rc_prev * rm)]
        for i in range(rc_prev):
            for j in range(rc):
                v = d.entry(i, j)
                if v:
                    for b in range(rm):
                        out[i * rm + b][j * rm + b] = v
        bounds[k] = IntMatrix(out, cols=rc * rm)
    return PresentedComplex(0, ranks, bounds, rel_blocks)


def tensor_perm_complex(
    terms: Sequence[GModule], boundaries: Sequence[IntMatrix], m: GModule
) -> PresentedComplex:
    """Tensor a complex of permutation modules with M over the group ring,
    one coinvariant block per basis orbit."""
    G = m.group
    rk = m.rank
    act_inv = [m.action_matrix(G.inverse[g]) for g in G.elements()]
    orbit_data = []
    ranks: List[int] = []
    rel_blocks: Dict[int, List[Tuple[int, IntMatrix]]] = {}
    for n, c in enumerate(terms):
        if c.group is not G:
            raise ValidationError("complex and module over different groups")
        if c._perms is None:
            raise ValidationError("tensor_perm_complex needs permutation actions")
        orbit = [-1] * c.rank
        trans = [0] * c.rank
        reps: List[int] = []
        for b in range(c.rank):
            if orbit[b] >= 0:
                continue
            o = len(reps)
            reps.append(b)
            for g in G.elements():
                img = c._perms[g][b]
                if orbit[img] < 0:
                    orbit[img] = o
                    trans[img] = g
        orbit_data.append((orbit, trans, reps))
        ranks.append(len(reps) * rk)
        blocks: List[Tuple[int, IntMatrix]] = []
        for s, rep in enumerate(reps):
            cols: List[List[int]] = []
            if m.relations is not None:
                cols.extend(
                    list(m.relations.column(j)) for j in range(m.relations.cols)
                )
            stab = [g for g in G.elements() if c._perms[g][rep] == rep]
            for kappa in G.subgroup(stab).generators():
                ak = m.action_matrix(kappa)
                for i in range(rk):
                    col = [ak.entry(x, i) for x in range(rk)]
                    col[i] -= 1
                    if any(col):
                        cols.append(col)
            if cols:
                blocks.append((s * rk, IntMatrix.from_columns(cols, rows=rk)))
        if blocks:
            rel_blocks[n] = blocks
    bounds: Dict[int, IntMatrix] = {}
    for k, d in enumerate(boundaries, start=1):
        orbit_p, trans_p, reps_p = orbit_data[k - 1]
        _, _, reps_s = orbit_data[k]
        rows = len(reps_p) * rk
        out = [[0] * (len(reps_s) * rk) for _ in range(rows)]
        for s, rep in enumerate(reps_s):
            col = d.column(rep)
            for b, c in enumerate(col):
                if c:
                    o, g = orbit_p[b], trans_p[b]
                    blk = act_inv[g]
                    roff, coff = o * rk, s * rk
                    for a in range(rk):
                        row = out[roff + a]
                        arow = blk.data[a]
                        for bb in range(rk):
                            v = arow[bb]
                            if v:
                                row[coff + bb] += c * v
        bounds[k] = IntMatrix(out, cols=len(reps_s) * rk)
    return PresentedComplex(0, ranks, bounds, rel_blocks)


def tensor_over_zg(res_or_terms, m: GModule, boundaries=None) -> PresentedComplex:
    """Dispatching tensor: a FreeResolution, or (terms, boundaries) lists
    (permutation complexes take the orbitwise route)."""
    if isinstance(res_or_terms, FreeResolution):
        return tensor_free_resolution(res_or_terms, m)
    if all(t._perms is not None for t in res_or_terms):
        return tensor_perm_complex(res_or_terms, boundaries, m)
    return tensor_gmodule_complex(res_or_terms, boundaries, m)


# ---------------------------------------------------------------------------
# Resolution builders


def _check_budget(what: str, required: int, cap: int):
    if required > cap:
        raise BudgetError(what, required, cap)


def _minimize_generators(group: FiniteGroup, act, vectors: Sequence[Sequence[int]], dim: int):
    """Greedy Z[G]-generator selection: keep a vector only if it is not in
    the lattice spanned by the orbits of the vectors kept so far."""
    acc = LatticeAccumulator(dim)
    kept = []
    for v in vectors:
        if not acc.contains(v):
            kept.append(list(v))
            for g in group.elements():
                acc.insert_dense(act(g, v))
    for v in vectors:
        if not acc.contains(v):
            raise ValidationError("generator minimization lost the spanning property")
    return kept


def resolve(
    m: GModule,
    length: int,
    minimize: bool = True,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> FreeResolution:
    """Free resolution of a lattice module by iterated kernel covers."""
    if m.relations is not None:
        raise ValidationError("resolve expects a lattice module without relations")
    G = m.group
    n = G.order
    basis = [[1 if i == j else 0 for i in range(m.rank)] for j in range(m.rank)]
    gens0 = _minimize_generators(G, m.act, basis, m.rank) if minimize else basis
    _check_budget("resolution term 0", n * len(gens0), rank_cap)
    free_ranks = [len(gens0)]
    gen_images: List[List[List[int]]] = [gens0]
    res = FreeResolution(G, m, free_ranks, gen_images, label=f"resolve({m.label})")
    prev = res.augmentation_matrix()
    free_prev = GModule.free(G, free_ranks[0])
    for k in range(1, length + 1):
        ker = kernel_basis(prev)
        cols = [ker.column(j) for j in range(ker.cols)]
        gens = (
            _minimize_generators(G, free_prev.act, cols, ker.rows)
            if minimize
            else [list(c) for c in cols]
        )
        _check_budget(f"resolution term {k}", n * len(gens), rank_cap)
        res.free_ranks.append(len(gens))
        res.gen_images.append(gens)
        prev = res.boundary_matrix(k)
        free_prev = GModule.free(G, len(gens))
    return res


def _bar_faces(group: FiniteGroup, rest: Tuple[int, ...]):
    """Faces of the homogeneous tuple (e, *rest): yields (rest', translate, sign)."""
    n = len(rest)
    inv = group.inverse
    tab = group.table
    # face 0 deletes the identity entry; renormalize by rest[0]
    g0 = rest[0]
    ig0 = inv[g0]
    yield tuple(tab[ig0][x] for x in rest[1:]), g0, 1
    for i in range(1, n + 1):
        # delete entry i of (e, *rest): drop rest[i-1]
        yield rest[: i - 1] + rest[i:], 0, -1 if i % 2 else 1


def bar_resolution(
    group: FiniteGroup, length: int, rank_cap: int = DEFAULT_RANK_CAP
) -> FreeResolution:
    """Homogeneous standard resolution of the trivial module: degree k is
    free on the (k+1)-tuples with first entry the identity, with the
    alternating face-deletion boundary."""
    import itertools as _it

    n = group.order
    triv = GModule.trivial(group)
    gen_images: List[List[List[int]]] = [[[1]]]
    free_ranks = [1]
    prev_index: Dict[Tuple[int, ...], int] = {(): 0}
    for k in range(1, length + 1):
        _check_budget(
            f"standard resolution term {k} of {group.label} (Z-rank |G|^{k + 1})",
            n ** (k + 1),
            rank_cap,
        )
        tuples = list(_it.product(range(n), repeat=k))
        level: List[List[int]] = []
        prev_rank = n * free_ranks[k - 1]
        for rest in tuples:
            col = [0] * prev_rank
            for rest2, translate, sign in _bar_faces(group, rest):
                col[prev_index[rest2] * n + translate] += sign
            level.append(col)
        gen_images.append(level)
        free_ranks.append(len(tuples))
        prev_index = {t: i for i, t in enumerate(tuples)}
    return FreeResolution(
        group, triv, free_ranks, gen_images, label=f"bar({group.label})"
    )


def cyclic_resolution(group: FiniteGroup, length: int) -> FreeResolution:
    """Periodic rank-one resolution of Z over a cyclic group generated by
    element 1: boundaries alternate t-1 and the norm element."""
    n = group.order
    if group.subgroup_generated([1]).order != n:
        raise ValidationError("cyclic_resolution needs a cyclic group generated by element 1")
    triv = GModule.trivial(group)
    gen_images: List[List[List[int]]] = [[[1]]]
    free_ranks = [1]
    t_minus_1 = [0] * n
    t_minus_1[1] += 1
    t_minus_1[0] -= 1
    norm = [1] * n
    for k in range(1, length + 1):
        gen_images.append([list(t_minus_1 if k % 2 else norm)])
        free_ranks.append(1)
    return FreeResolution(
        group, triv, free_ranks, gen_images, label=f"cyclic({group.label})"
    )


def takasu_resolution(
    h: Subgroup, length: int, rank_cap: int = DEFAULT_RANK_CAP
) -> FreeResolution:
    """Resolution of the augmentation kernel of Z[G/H] whose degree-k term
    is the standard (k+2)-tuple term of G modulo the span of single-coset
    tuples (free on the non-coset tuple representatives)."""
    import itertools as _it

    G = h.parent
    n = G.order
    hset = set(h.elements)
    cs = coset_space(h)
    std = standard_modules(h)

    def kept(rest: Tuple[int, ...]) -> bool:
        return not all(x in hset for x in rest)

    # degree 0: tuples (e, g) with g outside H, mapping onto gH - H
    tuples0 = [(g,) for g in range(n) if g not in hset]
    index_prev: Dict[Tuple[int, ...], int] = {t: i for i, t in enumerate(tuples0)}
    gen_images: List[List[List[int]]] = [[]]
    for (g,) in tuples0:
        col = [0] * (cs.size - 1)
        col[cs.coset_of[g] - 1] = 1
        gen_images[0].append(col)
    free_ranks = [len(tuples0)]
    for k in range(1, length + 1):
        required = n * (n ** (k + 1) - h.order ** (k + 1))
        _check_budget(
            f"relative standard resolution term {k} for {G.label} (Z-rank)",
            required,
            rank_cap,
        )
        tuples = [t for t in _it.product(range(n), repeat=k + 1) if kept(t)]
        level: List[List[int]] = []
        prev_rank = n * free_ranks[k - 1]
        for rest in tuples:
            col = [0] * prev_rank
            for rest2, translate, sign in _bar_faces(G, rest):
                idx = index_prev.get(rest2)
                if idx is not None:  # faces inside one coset are collapsed
                    col[idx * n + translate] += sign
            level.append(col)
        gen_images.append(level)
        free_ranks.append(len(tuples))
        index_prev = {t: i for i, t in enumerate(tuples)}
    return FreeResolution(
        G, std.i_module, free_ranks, gen_images, label=f"takasu({G.label})"
    )


def induce_resolution(res_h: FreeResolution, h: Subgroup) -> FreeResolution:
    """Induce a resolution of the trivial module over a subgroup up to the
    parent group; the result resolves the permutation module Z[G/H]."""
    G = h.parent
    hgrp, embed = subgroup_as_group(h)
    if res_h.group is not hgrp:
        raise ValidationError("resolution is not over the given subgroup")
    if res_h.module.rank != 1 or not res_h.module.is_constant():
        raise ValidationError("induction is implemented for the trivial module")
    n = G.order
    nh = hgrp.order
    std = standard_modules(h)
    gen_images: List[List[List[int]]] = []
    # augmentation: generator j maps to a_j * (identity coset)
    level0 = []
    for j in range(res_h.free_ranks[0]):
        a = res_h.gen_images[0][j][0]
        col = [0] * std.perm.rank
        col[0] = a
        level0.append(col)
    gen_images.append(level0)
    for k in range(1, res_h.length + 1):
        level = []
        prev_rank = n * res_h.free_ranks[k - 1]
        for j in range(res_h.free_ranks[k]):
            col = [0] * prev_rank
            for idx, c in enumerate(res_h.gen_images[k][j]):
                if c:
                    i, hh = divmod(idx, nh)
                    col[i * n + embed[hh]] = c
            level.append(col)
        gen_images.append(level)
    return FreeResolution(
        G, std.perm, list(res_h.free_ranks), gen_images,
        label=f"ind({res_h.label})",
    )


@dataclass
class HorseshoeData:
    """Resolution of Z[G/H] assembled from resolutions of the augmentation
    kernel and of Z, together with the connecting components."""

    middle: FreeResolution
    res_i: FreeResolution
    res_z: FreeResolution
    h_gen_images: List[List[List[int]]]  # h_k on the Z-side generators, k >= 1


def horseshoe(res_i: FreeResolution, res_z: FreeResolution, std: StandardModules) -> HorseshoeData:
    """Combine resolutions of I and Z into a resolution of Z[G/H] for the
    short exact sequence 0 -> I -> Z[G/H] -> Z -> 0."""
    G = res_i.group
    n = G.order
    length = min(res_i.length, res_z.length)
    perm = std.perm
    cs = coset_space(std.subgroup)
    emb = std.embedding.matrix
    # sigma: F^Z_0 generator j |-> beta_j * (identity coset) lifts the
    # augmentation of Z through Z[G/H] -> Z
    sigma_cols = []
    for j in range(res_z.free_ranks[0]):
        beta = res_z.gen_images[0][j][0]
        col = [0] * perm.rank
        col[0] = beta
        sigma_cols.append(col)

    def sigma_apply(vec: Sequence[int]) -> List[int]:
        out = [0] * perm.rank
        for idx, c in enumerate(vec):
            if c:
                j, g = divmod(idx, n)
                base = sigma_cols[j]
                for b, v in enumerate(base):
                    if v:
                        out[cs.act(g, b)] += c * v
        return out

    # iota . alpha : F^I_0 -> Z[G/H]
    ia_cols = []
    for j in range(res_i.free_ranks[0]):
        base = emb.apply(res_i.gen_images[0][j])
        for g in range(n):
            ia_cols.append(perm.act(g, base))
    ia_matrix = IntMatrix.from_columns(ia_cols, rows=perm.rank)
    ia_solver = IntSolver(ia_matrix)

    h_gen_images: List[List[List[int]]] = []
    solvers: Dict[int, IntSolver] = {}
    for k in range(1, length + 1):
        level = []
        for j in range(res_z.free_ranks[k]):
            dz = res_z.gen_images[k][j]
            if k == 1:
                rhs = sigma_apply(dz)
                sol = ia_solver.solve([-x for x in rhs])
            else:
                hk_prev = h_gen_images[k - 2]
                rhs = res_i.apply_free_map(hk_prev, dz)
                if k - 1 not in solvers:
                    solvers[k - 1] = IntSolver(res_i.boundary_matrix(k - 1))
                sol = solvers[k - 1].solve([-x for x in rhs])
            if sol is None:
                raise ValidationError("horseshoe connecting map has no integral lift")
            level.append(sol)
        h_gen_images.append(level)

    # assemble the middle resolution
    mid_ranks = [res_i.free_ranks[k] + res_z.free_ranks[k] for k in range(length + 1)]
    mid_gens: List[List[List[int]]] = []
    level0 = []
    for j in range(res_i.free_ranks[0]):
        level0.append(emb.apply(res_i.gen_images[0][j]))
    level0.extend(sigma_cols)
    mid_gens.append(level0)
    for k in range(1, length + 1):
        ri_prev, rz_prev = res_i.free_ranks[k - 1], res_z.free_ranks[k - 1]
        prev_rank = n * (ri_prev + rz_prev)
        level = []
        for j in range(res_i.free_ranks[k]):
            col = [0] * prev_rank
            for idx, c in enumerate(res_i.gen_images[k][j]):
                if c:
                    col[idx] = c
            level.append(col)
        for j in range(res_z.free_ranks[k]):
            col = [0] * prev_rank
            for idx, c in enumerate(h_gen_images[k - 1][j]):
                if c:
                    col[idx] = c
            off = n * ri_prev
            for idx, c in enumerate(res_z.gen_images[k][j]):
                if c:
                    col[off + idx] = c
            level.append(col)
        mid_gens.append(level)
    middle = FreeResolution(G, perm, mid_ranks, mid_gens, label="horseshoe")
    return HorseshoeData(middle, res_i, res_z, h_gen_images)


def lift_over_resolution(
    src: FreeResolution, tgt: FreeResolution, bottom: IntMatrix
) -> List[List[List[int]]]:
    """Generator columns of a chain map src -> tgt lifting `bottom` between
    the resolved modules; requires tgt to be exact (a resolution)."""
    if src.group is not tgt.group:
        raise ValidationError("resolutions over different groups")
    length = min(src.length, tgt.length)
    comps: List[List[List[int]]] = []
    aug_solver = IntSolver(tgt.augmentation_matrix())
    level0 = []
    for j in range(src.free_ranks[0]):
        b = bottom.apply(src.gen_images[0][j])
        sol = aug_solver.solve(b)
        if sol is None:
            raise ValidationError("no integral lift at stage 0")
        level0.append(sol)
    comps.append(level0)
    solvers: Dict[int, IntSolver] = {}
    for k in range(1, length + 1):
        level = []
        for j in range(src.free_ranks[k]):
            rhs = tgt.apply_free_map(comps[k - 1], src.gen_images[k][j])
            if k not in solvers:
                solvers[k] = IntSolver(tgt.boundary_matrix(k))
            sol = solvers[k].solve(rhs)
            if sol is None:
                raise ValidationError(f"no integral lift at stage {k}")
            level.append(sol)
        comps.append(level)
    return comps


# ---------------------------------------------------------------------------
# Tor and coinvariants


_resolution_cache: Dict[Tuple[int, str], FreeResolution] = {}


def cached_resolution(m: GModule, length: int, rank_cap: int = DEFAULT_RANK_CAP) -> FreeResolution:
    key = (id(m), "resolve")
    res = _resolution_cache.get(key)
    if res is None or res.length < length:
        res = resolve(m, length, rank_cap=rank_cap)
        _resolution_cache[key] = res
    return res


def tor(
    a: GModule,
    m: GModule,
    degree: int,
    resolution: Optional[FreeResolution] = None,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> FgAbGroup:
    """Tor_degree(A, M) over the group ring, via a free resolution of A."""
    if resolution is None:
        resolution = cached_resolution(a, degree + 1, rank_cap)
    if resolution.length < degree + 1:
        raise ValidationError("resolution too short for the requested degree")
    complex_ = resolution.tensor(m)
    return complex_.homology(degree)


def group_homology(group: FiniteGroup, m: GModule, degree: int, rank_cap: int = DEFAULT_RANK_CAP) -> FgAbGroup:
    """H_degree(G; M) via a free resolution of the trivial module."""
    triv = _trivial_cache(group)
    return tor(triv, m, degree, rank_cap=rank_cap)


@lru_cache(maxsize=None)
def _trivial_cache(group: FiniteGroup) -> GModule:
    return GModule.trivial(group)


@lru_cache(maxsize=None)
def quotient_group(n_sub: Subgroup) -> Tuple[FiniteGroup, Tuple[int, ...]]:
    """The quotient group G/N of a normal subgroup, with the projection map
    (element -> coset index); the identity coset has index 0."""
    if not n_sub.is_normal():
        raise ValidationError("quotient by a non-normal subgroup")
    G = n_sub.parent
    cs = coset_space(n_sub)
    table = [
        [cs.coset_of[G.mult(cs.rep(a), cs.rep(b))] for b in range(cs.size)]
        for a in range(cs.size)
    ]
    q = FiniteGroup(table, label=f"{G.label}/N")
    return q, cs.coset_of


@dataclass
class Coinvariants:
    """N-coinvariants of a module, as a module over G/N.

    `module` is the finitely presented quotient (free cover of the original
    rank plus relations); `free_module` is its torsion-free part as an honest
    lattice module; `group` reports the full abelian group of coinvariants.
    """

    quotient: FiniteGroup
    projection: Tuple[int, ...]
    module: GModule
    free_module: GModule
    group: FgAbGroup
    free_projection: IntMatrix


def coinvariants(m: GModule, n_sub: Subgroup) -> Coinvariants:
    if m.relations is not None:
        raise ValidationError("coinvariants of a presented module is not supported")
    if n_sub.parent is not m.group:
        raise ValidationError("subgroup of a different group")
    q, proj = quotient_group(n_sub)
    cs = coset_space(n_sub)
    rel_cols: List[List[int]] = []
    for g in n_sub.generators():
        ag = m.action_matrix(g)
        for i in range(m.rank):
            col = [ag.entry(x, i) for x in range(m.rank)]
            col[i] -= 1
            if any(col):
                rel_cols.append(col)
    base_rel = (
        IntMatrix.from_columns(rel_cols, rows=m.rank)
        if rel_cols
        else IntMatrix.zeros(m.rank, 0)
    )
    mats = [m.action_matrix(cs.rep(c)) for c in range(q.order)]
    presented = GModule(
        q, m.rank, mats=mats, relations=base_rel, label=f"({m.label})_N",
    )
    # torsion-free part: split off the quotient by the saturation
    eng = _Eliminator(base_rel, track_r=True, track_rinv=True)
    eng.diagonalize()
    eng.make_divisible()
    r = eng.rank
    free_dim = m.rank - r
    proj_rows = [eng.r[i] for i in range(r, m.rank)]
    sect_cols = [[eng.rinv[i][j] for i in range(m.rank)] for j in range(r, m.rank)]
    proj_mat = IntMatrix(proj_rows, cols=m.rank) if proj_rows else IntMatrix.zeros(0, m.rank)
    free_mats = []
    for c in range(q.order):
        ag = m.action_matrix(cs.rep(c))
        cols = []
        for j in range(free_dim):
            v = ag.apply(sect_cols[j])
            cols.append(proj_mat.apply(v))
        free_mats.append(
            IntMatrix.from_columns(cols, rows=free_dim) if cols else IntMatrix.zeros(0, 0)
        )
    free_module = GModule(
        q, free_dim, mats=free_mats, label=f"({m.label})_N free part",
    )
    group_report = FgAbGroup(free_dim, [d for d in eng.diag() if d > 1])
    return Coinvariants(q, proj, presented, free_module, group_report, proj_mat)

