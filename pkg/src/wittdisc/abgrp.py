"""Effective finite abelian p-groups, homomorphisms, and homological algebra.

Groups carry enumerated element ids 0..N-1 with id 0 the zero element;
everything downstream (kernels, cokernels, cohomology, the snake-lemma
chase) is computed by enumeration, which is exact at desk scale.  Larger
carriers appearing inside mapping cones are handled through optional
numpy add tables; the algorithms stay the same.

Subgroups remember their parent ids, quotients their coset
representatives (the minimal id in each coset), so element chases can
move between levels deterministically.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import CapExceeded, DomainError

TABLE_MAX = 1024  # largest carrier for which a full add table may be built
VALIDATE_PAIRS = 1 << 18  # exhaustive-additivity budget (|G|^2 pairs)


class FinAbGroup:
    """A finite abelian group on ids 0..size-1 with zero = id 0."""

    def __init__(self, size, add, neg, label="G", elements=None, parent=None,
                 parent_ids=None, class_of=None, rep_ids=None, bulk=None):
        self.size = size
        self._add = add
        self._neg = neg
        self.label = label
        self.elements = elements  # optional list of printable elements
        self.parent = parent
        self.parent_ids = parent_ids  # subgroup: sub id -> parent id
        self.class_of = class_of  # quotient: parent id -> class id
        self.rep_ids = rep_ids  # quotient: class id -> parent representative
        self.bulk = bulk  # optional object with add_vec / neg_vec on ids
        self.add_table: np.ndarray | None = None
        self.neg_table: np.ndarray | None = None
        self._parent_index = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(1, lambda i, j: 0, lambda i: 0, label="0", elements=[0])

    @classmethod
    def cyclic(cls, n: int) -> "FinAbGroup":
        if n < 1:
            raise DomainError("cyclic order must be >= 1")
        return cls(n, lambda i, j: (i + j) % n, lambda i: (-i) % n,
                   label=f"Z/{n}", elements=list(range(n)))

    @classmethod
    def product(cls, factors: list["FinAbGroup"]) -> "FinAbGroup":
        if not factors:
            return cls.trivial()
        if len(factors) == 1:
            return factors[0]
        sizes = [g.size for g in factors]
        total = 1
        for s in sizes:
            total *= s

        def split(i):
            out = []
            for s in reversed(sizes):
                out.append(i % s)
                i //= s
            return tuple(reversed(out))

        def join(parts):
            i = 0
            for g, c in zip(factors, parts):
                i = i * g.size + c
            return i

        def add(i, j):
            return join(g.add(a, b)
                        for g, a, b in zip(factors, split(i), split(j)))

        def neg(i):
            return join(g.neg(a) for g, a in zip(factors, split(i)))

        label = " x ".join(g.label for g in factors)
        grp = cls(total, add, neg, label=label)
        grp._product_factors = factors
        return grp

    @classmethod
    def of_cyclics(cls, orders) -> "FinAbGroup":
        return cls.product([cls.cyclic(n) for n in orders])

    @classmethod
    def from_elements(cls, elements, add, neg, zero, label="G") -> "FinAbGroup":
        """Wrap explicit elements with element-level operations."""
        elements = list(elements)
        if elements[0] != zero:
            elements = [zero] + [e for e in elements if e != zero]
        index = {e: i for i, e in enumerate(elements)}

        def add_ids(i, j):
            return index[add(elements[i], elements[j])]

        def neg_ids(i):
            return index[neg(elements[i])]

        return cls(len(elements), add_ids, neg_ids, label=label,
                   elements=elements)

    # -- basic operations --------------------------------------------------

    def add(self, i: int, j: int) -> int:
        if self.add_table is not None:
            return int(self.add_table[i, j])
        return self._add(i, j)

    def neg(self, i: int) -> int:
        if self.neg_table is not None:
            return int(self.neg_table[i])
        return self._neg(i)

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def scalar(self, m: int, i: int) -> int:
        """m * element, by double-and-add."""
        if m < 0:
            return self.neg(self.scalar(-m, i))
        acc, base = 0, i
        while m:
            if m & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            m >>= 1
        return acc

    def order_of(self, i: int) -> int:
        n, x = 1, i
        while x != 0:
            x = self.add(x, i)
            n += 1
            if n > self.size:
                raise DomainError("order computation ran away; not a group?")
        return n

    def repr_of(self, i: int) -> str:
        if self.elements is not None:
            return repr(self.elements[i])
        if self.rep_ids is not None and self.parent is not None:
            return f"[{self.parent.repr_of(self.rep_ids[i])}]"
        if self.parent_ids is not None and self.parent is not None:
            return self.parent.repr_of(self.parent_ids[i])
        return f"#{i}"

    def parent_index(self, parent_id: int):
        """Subgroup id of a parent id, or None when outside the subgroup."""
        if self._parent_index is None:
            self._parent_index = {p: s for s, p in enumerate(self.parent_ids)}
        return self._parent_index.get(parent_id)

    # -- acceleration -------------------------------------------------------

    def ensure_table(self) -> bool:
        """Build the full add table when the carrier is small enough."""
        if self.add_table is not None:
            return True
        if self.size > TABLE_MAX:
            return False
        n = self.size
        if self.bulk is not None:
            ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            self.add_table = self.bulk.add_vec(ii.ravel(), jj.ravel()) \
                .reshape(n, n).astype(np.int64)
            self.neg_table = self.bulk.neg_vec(np.arange(n)).astype(np.int64)
        else:
            self.add_table = np.array(
                [[self._add(i, j) for j in range(n)] for i in range(n)],
                dtype=np.int64)
            self.neg_table = np.array([self._neg(i) for i in range(n)],
                                      dtype=np.int64)
        return True

    def add_many(self, i: int, js) -> np.ndarray:
        js = np.asarray(js, dtype=np.int64)
        if self.add_table is not None:
            return self.add_table[i, js]
        if self.bulk is not None:
            return self.bulk.add_vec(np.full(len(js), i), js)
        return np.array([self.add(i, int(j)) for j in js], dtype=np.int64)

    # -- validation -----------------------------------------------------------

    def check_axioms(self, cap: int = 4096) -> None:
        """Exhaustive abelian-group axioms; cubic in the size, so capped."""
        n = self.size
        if n > cap:
            raise CapExceeded(f"axiom check needs size <= {cap}, got {n}")
        for i in range(n):
            if self.add(0, i) != i:
                raise DomainError(f"zero is not neutral at {self.repr_of(i)}")
            if self.add(i, self.neg(i)) != 0:
                raise DomainError(f"no inverse for {self.repr_of(i)}")
        for i in range(n):
            for j in range(n):
                if self.add(i, j) != self.add(j, i):
                    raise DomainError(
                        f"non-commutative at ({self.repr_of(i)}, {self.repr_of(j)})")
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    if self.add(self.add(i, j), l) != self.add(i, self.add(j, l)):
                        raise DomainError(
                            "non-associative at "
                            f"({self.repr_of(i)}, {self.repr_of(j)}, {self.repr_of(l)})")


class GroupHom:
    """A homomorphism given by its full image table."""

    def __init__(self, source: FinAbGroup, target: FinAbGroup, images,
                 label="f", check=True):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        self.label = label
        if len(self.images) != source.size:
            raise DomainError(
                f"hom {label}: {len(self.images)} images for carrier "
                f"of size {source.size}")
        if check:
            self.validate()

    @classmethod
    def from_callable(cls, source, target, fn, label="f", check=True):
        return cls(source, target, [fn(i) for i in range(source.size)],
                   label=label, check=check)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, np.zeros(source.size, dtype=np.int64),
                   label="0", check=False)

    @classmethod
    def identity(cls, group):
        return cls(group, group, np.arange(group.size), label="id",
                   check=False)

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def validate(self) -> None:
        """f(0) = 0 and exhaustive additivity, within the pair budget."""
        if self.images[0] != 0:
            raise DomainError(f"hom {self.label} does not kill zero")
        n = self.source.size
        if n * n <= VALIDATE_PAIRS and self.source.ensure_table() \
                and self.target.ensure_table():
            lhs = self.target.add_table[
                self.images[:, None], self.images[None, :]]
            rhs = self.images[self.source.add_table]
            if not np.array_equal(lhs, rhs):
                i, j = np.argwhere(lhs != rhs)[0]
                raise DomainError(
                    f"hom {self.label} not additive at "
                    f"({self.source.repr_of(int(i))}, {self.source.repr_of(int(j))})")
        elif n <= 512:
            for i in range(n):
                for j in range(i, n):
                    if self(self.source.add(i, j)) != \
                            self.target.add(self(i), self(j)):
                        raise DomainError(
                            f"hom {self.label} not additive at "
                            f"({self.source.repr_of(i)}, {self.source.repr_of(j)})")
        else:
            # spot-check on a deterministic stride; full checks are reserved
            # for carriers where they are affordable
            stride = max(1, n // 64)
            pts = list(range(0, n, stride))
            for i in pts:
                for j in pts:
                    if self(self.source.add(i, j)) != \
                            self.target.add(self(i), self(j)):
                        raise DomainError(
                            f"hom {self.label} not additive at ids ({i}, {j})")

    def compose(self, inner: "GroupHom", label=None) -> "GroupHom":
        """self o inner."""
        if inner.target is not self.source:
            raise DomainError(
                f"cannot compose {self.label} o {inner.label}: middle "
                "objects differ")
        return GroupHom(inner.source, self.target, self.images[inner.images],
                        label=label or f"{self.label}o{inner.label}",
                        check=False)

    def image_ids(self) -> np.ndarray:
        return np.unique(self.images)

    def is_injective(self) -> bool:
        return len(self.image_ids()) == self.source.size

    def is_surjective(self) -> bool:
        return len(self.image_ids()) == self.target.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_zero(self) -> bool:
        return bool(np.all(self.images == 0))


def pointwise_add(G: FinAbGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if G.add_table is not None:
        return G.add_table[a, b]
    if G.bulk is not None:
        return G.bulk.add_vec(a, b)
    return np.array([G.add(int(x), int(y)) for x, y in zip(a, b)],
                    dtype=np.int64)


def pointwise_neg(G: FinAbGroup, a: np.ndarray) -> np.ndarray:
    if G.neg_table is not None:
        return G.neg_table[a]
    if G.bulk is not None:
        return G.bulk.neg_vec(a)
    return np.array([G.neg(int(x)) for x in a], dtype=np.int64)


def hom_add(f: GroupHom, g: GroupHom, label="f+g") -> GroupHom:
    if f.source is not g.source or f.target is not g.target:
        raise DomainError("hom_add needs matching endpoints")
    images = pointwise_add(f.target, f.images, g.images)
    return GroupHom(f.source, f.target, images, label=label, check=False)


def hom_neg(f: GroupHom) -> GroupHom:
    images = pointwise_neg(f.target, f.images)
    return GroupHom(f.source, f.target, images, label=f"-{f.label}",
                    check=False)


# -- subgroups, quotients, kernels, cokernels ------------------------------


def subgroup(G: FinAbGroup, ids, label=None) -> tuple[FinAbGroup, GroupHom]:
    """The subgroup on the given parent ids (must be closed), with inclusion."""
    ids = sorted(int(i) for i in ids)
    if not ids or ids[0] != 0:
        raise DomainError("a subgroup must contain the zero id")
    index = {p: s for s, p in enumerate(ids)}

    def add(i, j):
        return index[G.add(ids[i], ids[j])]

    def neg(i):
        return index[G.neg(ids[i])]

    S = FinAbGroup(len(ids), add, neg,
                   label=label or f"sub({G.label})",
                   parent=G, parent_ids=ids)
    S._parent_index = index
    incl = GroupHom(S, G, ids, label="incl", check=False)
    return S, incl


def closure(G: FinAbGroup, gens) -> list[int]:
    """Ids of the subgroup generated by the given ids."""
    seen = {0}
    frontier = [0]
    gens = [g for g in gens if g]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def kernel(f: GroupHom, label=None) -> tuple[FinAbGroup, GroupHom]:
    ids = np.flatnonzero(f.images == 0)
    return subgroup(f.source, ids, label=label or f"ker({f.label})")


def image(f: GroupHom, label=None) -> tuple[FinAbGroup, GroupHom]:
    return subgroup(f.target, f.image_ids(),
                    label=label or f"im({f.label})")


def quotient(G: FinAbGroup, sub_ids, label=None) -> tuple[FinAbGroup, GroupHom]:
    """Quotient of G by the subgroup on sub_ids; representatives are the
    minimal ids of their cosets, found by an ascending scan."""
    sub_ids = np.asarray(sorted(int(i) for i in sub_ids), dtype=np.int64)
    if sub_ids[0] != 0:
        raise DomainError("quotient needs a subgroup containing zero")
    class_of = np.full(G.size, -1, dtype=np.int64)
    rep_ids: list[int] = []
    for x in range(G.size):
        if class_of[x] >= 0:
            continue
        c = len(rep_ids)
        rep_ids.append(x)
        coset = G.add_many(x, sub_ids)
        class_of[coset] = c
    if len(rep_ids) * len(sub_ids) != G.size:
        raise DomainError("coset partition failed; ids were not a subgroup")

    def add(i, j):
        return int(class_of[G.add(rep_ids[i], rep_ids[j])])

    def neg(i):
        return int(class_of[G.neg(rep_ids[i])])

    Q = FinAbGroup(len(rep_ids), add, neg,
                   label=label or f"{G.label}/sub", parent=G,
                   class_of=class_of, rep_ids=rep_ids)
    proj = GroupHom(G, Q, class_of, label="proj", check=False)
    return Q, proj


def cokernel(f: GroupHom, label=None) -> tuple[FinAbGroup, GroupHom]:
    return quotient(f.target, f.image_ids(),
                    label=label or f"coker({f.label})")


def direct_sum(G1: FinAbGroup, G2: FinAbGroup, label=None) -> FinAbGroup:
    """G1 + G2 with id = i1 * |G2| + i2; no tables are materialized."""
    n2 = G2.size

    def add(i, j):
        return G1.add(i // n2, j // n2) * n2 + G2.add(i % n2, j % n2)

    def neg(i):
        return G1.neg(i // n2) * n2 + G2.neg(i % n2)

    D = FinAbGroup(G1.size * n2, add, neg,
                   label=label or f"{G1.label}(+){G2.label}")
    D._summands = (G1, G2)
    return D


def pair_hom(f1: GroupHom, f2: GroupHom, target: FinAbGroup,
             label="(f1,f2)") -> GroupHom:
    """x -> (f1(x), f2(x)) into a direct_sum target."""
    n2 = target._summands[1].size
    images = f1.images * n2 + f2.images
    return GroupHom(f1.source, target, images, label=label, check=False)


def sum_hom(D: FinAbGroup, g1: GroupHom, g2: GroupHom, target: FinAbGroup,
            label="g1+g2") -> GroupHom:
    """(x1, x2) -> g1(x1) + g2(x2) out of a direct_sum source."""
    n2 = D._summands[1].size
    ids = np.arange(D.size)
    a = g1.images[ids // n2]
    b = g2.images[ids % n2]
    target.ensure_table()
    return GroupHom(D, target, pointwise_add(target, a, b), label=label,
                    check=False)


def inclusion_second(A: FinAbGroup, D: FinAbGroup) -> GroupHom:
    """a -> (0, a) into a direct_sum whose second summand is A."""
    return GroupHom(A, D, np.arange(A.size), label="incl2", check=False)


def projection_first(D: FinAbGroup, B: FinAbGroup) -> GroupHom:
    """(b, a) -> b out of a direct_sum whose first summand is B."""
    n2 = D._summands[1].size
    return GroupHom(D, B, np.arange(D.size) // n2, label="proj1", check=False)


# -- invariant factors -------------------------------------------------------


def _p_of_order(n: int) -> int:
    if n == 1:
        return 0
    p = 2
    while n % p:
        p += 1
        if p * p > n:
            p = n
            break
    m = n
    while m > 1:
        if m % p:
            raise DomainError(f"carrier size {n} is not a prime power")
        m //= p
    return p


def invariant_factors(G: FinAbGroup) -> list[int]:
    """Cyclic orders p^{e_1} >= p^{e_2} >= ... with their sum G, from the
    sizes of the p^k-torsion subgroups."""
    if G.size == 1:
        return []
    p = _p_of_order(G.size)
    # iterated multiplication-by-p tables
    if G.bulk is not None and G.add_table is None:
        ids = np.arange(G.size)
        acc = ids
        for _ in range(p - 1):
            acc = G.bulk.add_vec(acc, ids)
        mp = np.asarray(acc, dtype=np.int64)
    else:
        mp = np.array([G.scalar(p, i) for i in range(G.size)], dtype=np.int64)
    torsion_logs = [0]
    cur = np.arange(G.size)
    while True:
        cur = mp[cur]
        t = int(np.count_nonzero(cur == 0))
        e = 0
        while p ** e != t:
            e += 1
        torsion_logs.append(e)
        if t == G.size:
            break
    # m_k = #(cyclic factors of order >= p^k)
    counts = [torsion_logs[k] - torsion_logs[k - 1]
              for k in range(1, len(torsion_logs))]
    out = []
    for k, m in enumerate(counts, start=1):
        nxt = counts[k] if k < len(counts) else 0
        out.extend([p ** k] * (m - nxt))
    out.sort(reverse=True)
    return out


# -- exactness ---------------------------------------------------------------


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """Image(f) equals kernel(g) as subsets of the middle group."""
    if f.target is not g.source:
        raise DomainError(
            f"not composable: {f.label} lands in {f.target.label}, "
            f"{g.label} starts at {g.source.label}")
    im = set(int(i) for i in f.image_ids())
    ker = set(int(i) for i in np.flatnonzero(g.images == 0))
    return im == ker


def exactness_witness(f: GroupHom, g: GroupHom):
    """None when exact, else a mid-group id in the symmetric difference."""
    im = set(int(i) for i in f.image_ids())
    ker = set(int(i) for i in np.flatnonzero(g.images == 0))
    bad = sorted(im.symmetric_difference(ker))
    return None if not bad else bad[0]


# -- cochain complexes --------------------------------------------------------


class Cochain:
    """A complex on consecutive integer degrees with d o d = 0."""

    def __init__(self, objects: dict[int, FinAbGroup],
                 diffs: dict[int, GroupHom], label="C", check=True):
        degs = sorted(objects)
        if degs != list(range(degs[0], degs[-1] + 1)):
            raise DomainError("degrees must be consecutive")
        self.objects = dict(sorted(objects.items()))
        self.diffs = dict(sorted(diffs.items()))
        self.label = label
        if check:
            self.validate()

    @property
    def degrees(self):
        return list(self.objects)

    def obj(self, k: int) -> FinAbGroup:
        return self.objects[k]

    def diff(self, k: int) -> GroupHom:
        """The differential leaving degree k (zero map when absent)."""
        d = self.diffs.get(k)
        if d is None:
            src = self.objects[k]
            tgt = self.objects.get(k + 1, FinAbGroup.trivial())
            d = GroupHom.zero(src, tgt)
        return d

    def validate(self):
        for k, d in self.diffs.items():
            if d.source is not self.objects.get(k):
                raise DomainError(f"differential at {k} has wrong source")
            if d.target is not self.objects.get(k + 1):
                raise DomainError(f"differential at {k} has wrong target")
        for k in self.diffs:
            nxt = self.diffs.get(k + 1)
            if nxt is not None:
                comp = nxt.compose(self.diffs[k])
                if not comp.is_zero():
                    bad = int(np.flatnonzero(comp.images)[0])
                    raise DomainError(
                        f"d o d != 0 at degree {k}: witness "
                        f"{self.objects[k].repr_of(bad)}")

    def shift(self, s: int, label=None) -> "Cochain":
        """C[s]^k = C^{k+s}, with differentials scaled by (-1)^s."""
        objects = {k - s: G for k, G in self.objects.items()}
        diffs = {}
        for k, d in self.diffs.items():
            diffs[k - s] = d if s % 2 == 0 else hom_neg(d)
        return Cochain(objects, diffs,
                       label=label or f"{self.label}[{s}]", check=False)


def two_term(G0: FinAbGroup, d: GroupHom, G1: FinAbGroup, deg0: int,
             label="C") -> Cochain:
    return Cochain({deg0: G0, deg0 + 1: G1}, {deg0: d}, label=label)


class CohomologyGroup:
    """H^k of a cochain: the quotient group plus chase bookkeeping."""

    def __init__(self, H: FinAbGroup, cocycles: FinAbGroup,
                 incl: GroupHom, proj: GroupHom):
        self.group = H
        self.cocycles = cocycles
        self.incl = incl  # cocycles -> C^k
        self.proj = proj  # cocycles -> H

    def class_of_chain(self, chain_id: int):
        """Class of a C^k id, or None when it is not a cocycle."""
        s = self.cocycles.parent_index(chain_id)
        return None if s is None else self.proj(s)

    def rep_chain(self, class_id: int) -> int:
        """A representative cocycle in C^k ids."""
        return self.incl(self.cocycles.rep_of_class[class_id])


def cohomology_at(C: Cochain, k: int, label=None) -> CohomologyGroup:
    dk = C.diff(k)
    din = C.diffs.get(k - 1)
    Z, incl = kernel(dk, label=f"Z^{k}({C.label})")
    if din is None:
        B_in_Z: list[int] = [0]
    else:
        B_in_Z = []
        for t in np.unique(din.images):
            s = Z.parent_index(int(t))
            if s is None:
                raise DomainError("image of d not inside kernel of next d")
            B_in_Z.append(s)
    H, proj = quotient(Z, B_in_Z, label=label or f"H^{k}({C.label})")
    Z.rep_of_class = H.rep_ids
    res = CohomologyGroup(H, Z, incl, proj)
    res.group.rep_of_class = H.rep_ids
    return res


def cohomology(C: Cochain) -> dict[int, CohomologyGroup]:
    return {k: cohomology_at(C, k) for k in C.degrees}


class ChainMap:
    """Degreewise homs between cochains, commuting with differentials."""

    def __init__(self, source: Cochain, target: Cochain,
                 comps: dict[int, GroupHom], label="f", check=True):
        self.source = source
        self.target = target
        self.comps = dict(sorted(comps.items()))
        self.label = label
        if check:
            self.validate()

    def comp(self, k: int) -> GroupHom:
        c = self.comps.get(k)
        if c is None:
            src = self.source.objects.get(k, FinAbGroup.trivial())
            tgt = self.target.objects.get(k, FinAbGroup.trivial())
            c = GroupHom.zero(src, tgt)
        return c

    def validate(self):
        for k in self.source.diffs:
            if k not in self.target.objects and k + 1 not in self.target.objects:
                continue
            lhs = self.target.diff(k).compose(self.comp(k)) \
                if k in self.target.objects else None
            rhs = self.comp(k + 1).compose(self.source.diffs[k])
            if lhs is None:
                if not rhs.is_zero():
                    raise DomainError(f"chain map {self.label} fails at {k}")
            elif not np.array_equal(lhs.images, rhs.images):
                bad = int(np.flatnonzero(lhs.images != rhs.images)[0])
                raise DomainError(
                    f"chain map {self.label} does not commute with d at "
                    f"degree {k}, witness {self.source.obj(k).repr_of(bad)}")

    def induced_on_cohomology(self, k: int, HS: CohomologyGroup,
                              HT: CohomologyGroup) -> GroupHom:
        images = []
        for c in range(HS.group.size):
            chain = HS.rep_chain(c)
            out = HT.class_of_chain(self.comp(k)(chain))
            if out is None:
                raise DomainError(
                    f"chain map {self.label} does not preserve cocycles")
            images.append(out)
        return GroupHom(HS.group, HT.group, images,
                        label=f"H^{k}({self.label})", check=False)


def cone(f: ChainMap, label=None) -> tuple[Cochain, ChainMap, ChainMap]:
    """Mapping cone of f: B -> A, with A -> Cone(f) -> B[1].

    Cone^k = B^{k+1} (+) A^k, d(b, a) = (-d_B b, f(b) + d_A a).
    """
    B, A = f.source, f.target
    label = label or f"cone({f.label})"
    degs = sorted(set(k - 1 for k in B.objects) | set(A.objects))
    objects: dict[int, FinAbGroup] = {}
    for k in degs:
        Bk1 = B.objects.get(k + 1, FinAbGroup.trivial())
        Ak = A.objects.get(k, FinAbGroup.trivial())
        objects[k] = direct_sum(Bk1, Ak, label=f"{label}^{k}")
    diffs: dict[int, GroupHom] = {}
    for k in degs:
        if k + 1 not in objects:
            continue
        D, Dn = objects[k], objects[k + 1]
        Bk1 = D._summands[0]
        Ak = D._summands[1]
        dB = hom_neg(B.diff(k + 1)) if (k + 1) in B.diffs \
            else GroupHom.zero(Bk1, Dn._summands[0])
        fb = f.comp(k + 1) if (k + 1) in A.objects \
            else GroupHom.zero(Bk1, Dn._summands[1])
        dA = A.diff(k) if k in A.diffs \
            else GroupHom.zero(Ak, Dn._summands[1])
        # images: (b, a) -> (dB b, fb b + dA a)
        n2s, n2t = D._summands[1].size, Dn._summands[1].size
        ids = np.arange(D.size)
        bpart = ids // n2s
        apart = ids % n2s
        top = dB.images[bpart]
        second = fb.images[bpart]
        third = dA.images[apart]
        tgt2 = Dn._summands[1]
        tgt2.ensure_table()
        low = pointwise_add(tgt2, second, third)
        diffs[k] = GroupHom(D, Dn, top * n2t + low, label=f"d_{label}^{k}",
                            check=False)
    Cn = Cochain(objects, diffs, label=label, check=False)
    incl_comps = {}
    for k in A.objects:
        D = objects[k]
        images = np.arange(A.objects[k].size)  # (0, a) has id a
        incl_comps[k] = GroupHom(A.objects[k], D, images, label="incl",
                                 check=False)
    proj_comps = {}
    B1 = B.shift(1)
    for k in degs:
        if k in B1.objects:
            D = objects[k]
            n2 = D._summands[1].size
            proj_comps[k] = GroupHom(D, B1.objects[k],
                                     np.arange(D.size) // n2,
                                     label="proj", check=False)
    incl = ChainMap(A, Cn, incl_comps, label="a->(0,a)", check=False)
    proj = ChainMap(Cn, B1, proj_comps, label="(b,a)->b", check=False)
    return Cn, incl, proj


class ShortExactSeq:
    """0 -> S -> M -> Q -> 0, degreewise exact."""

    def __init__(self, incl: ChainMap, proj: ChainMap, check=True):
        if incl.target is not proj.source:
            raise DomainError("incl and proj do not share the middle complex")
        self.sub = incl.source
        self.mid = incl.target
        self.quot = proj.target
        self.incl = incl
        self.proj = proj
        if check:
            self.validate()

    def validate(self):
        for k in self.mid.objects:
            i = self.incl.comp(k)
            p = self.proj.comp(k)
            if k in self.sub.objects and not i.is_injective():
                raise DomainError(f"inclusion not injective at degree {k}")
            if k in self.quot.objects and not p.is_surjective():
                raise DomainError(f"projection not surjective at degree {k}")
            im = set(int(x) for x in i.image_ids()) \
                if k in self.sub.objects else {0}
            ker = set(int(x) for x in np.flatnonzero(p.images == 0)) \
                if k in self.quot.objects else \
                set(range(self.mid.objects[k].size))
            if im != ker:
                raise DomainError(f"not exact at the middle, degree {k}")


def connecting_hom(ses: ShortExactSeq, k: int, HQ: CohomologyGroup,
                   HS1: CohomologyGroup, check_choices=True) -> GroupHom:
    """The snake-lemma boundary H^k(Q) -> H^{k+1}(S) by element chase.

    For each class: lift a representative cocycle through the projection,
    apply the middle differential, pull back through the (injective)
    inclusion, and read off the class.  With check_choices, every lift in
    the projection fiber is chased and must land in the same class.
    """
    p = ses.proj.comp(k)
    i1 = ses.incl.comp(k + 1)
    d = ses.mid.diff(k)
    incl_index = {int(v): s for s, v in enumerate(i1.images)}
    fibers: dict[int, list[int]] = {}
    for m, q in enumerate(p.images):
        fibers.setdefault(int(q), []).append(m)
    images = []
    for c in range(HQ.group.size):
        q = HQ.rep_chain(c)
        lifts = fibers[q] if check_choices else fibers[q][:1]
        seen = set()
        for m in lifts:
            dm = d(m)
            s = incl_index.get(dm)
            if s is None:
                raise DomainError(
                    "chase left the subcomplex; sequence not exact")
            cls = HS1.class_of_chain(s)
            if cls is None:
                raise DomainError("chase produced a non-cocycle")
            seen.add(cls)
        if len(seen) != 1:
            raise DomainError(
                f"connecting map ill-defined on class {c}: {sorted(seen)}")
        images.append(seen.pop())
    out = GroupHom(HQ.group, HS1.group, images, label="connecting",
                   check=False)
    out.validate()
    return out


# -- hom enumeration -----------------------------------------------------------


def generators(G: FinAbGroup) -> list[int]:
    """A generating sequence, greedily chosen by maximal order."""
    gens: list[int] = []
    have = {0}
    while len(have) < G.size:
        best, best_ord = None, 0
        for x in range(G.size):
            if x in have:
                continue
            o = G.order_of(x)
            if o > best_ord:
                best, best_ord = x, o
        gens.append(best)
        have = set(closure(G, gens))
    return gens


def hom_enumerate(G: FinAbGroup, H: FinAbGroup,
                  cap: int = 1 << 16) -> list[GroupHom]:
    """All homomorphisms G -> H, by images of a generating set.

    Candidate images of a generator g are the elements of H whose order
    divides order(g); each full assignment is extended by closure with a
    consistency check, so relations among the generators are respected.
    """
    if G.size == 1:
        return [GroupHom.zero(G, H)]
    gens = generators(G)
    orders = [G.order_of(g) for g in gens]
    cand = []
    for o in orders:
        cand.append([h for h in range(H.size) if o % H.order_of(h) == 0])
    total = 1
    for c in cand:
        total *= len(c)
    if total > cap:
        raise CapExceeded(
            f"hom enumeration needs {total} candidates (cap {cap})")
    out = []
    for choice in itertools.product(*cand):
        table = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, v in zip(gens, choice):
                    y = G.add(x, g)
                    w = H.add(table[x], v)
                    if y in table:
                        if table[y] != w:
                            ok = False
                            break
                    else:
                        table[y] = w
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and len(table) == G.size:
            out.append(GroupHom(G, H, [table[i] for i in range(G.size)],
                                check=False))
    return out
