"""Truncated p-typical Witt rings W_n(k) and their universal polynomials.

The ring structure on length-n Witt vectors is given by integer
polynomials S_k, P_k, N_k determined by the ghost components
w_i = sum_{j<=i} p^j X_j^{p^(i-j)}.  They are computed once per
(operation, n, p) by the ghost recursion, whose exact divisions by p^k
are theorems; an inexact division aborts loudly.

Two models of the Frobenius/Verschiebung pair are provided: the endo
model (self-maps of a fixed W_n) and the mixed model (level-shifting
maps W_{n+1} <-> W_n).  Over F_p-algebras the Frobenius is taken to be
the coordinatewise p-th power; agreement with the universal Frobenius
polynomials is a cross-check exercised by the test suite.

The structure-polynomial cache behaves as a write-once-per-key map and
all Witt operations are pure, so everything here is safe to use from
concurrent contexts.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .basering import AlgElement, FpAlgebra
from .errors import DomainError, InternalCheckError


class IntPoly:
    """Sparse integer polynomial in variables like X0, X1, Y0, ...

    Terms map a monomial -- a sorted tuple of (variable, exponent)
    pairs -- to a nonzero integer coefficient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for mono, c in dict(terms).items():
                if c:
                    self.terms[tuple(sorted(mono))] = c

    @classmethod
    def var(cls, name: str, exp: int = 1, coeff: int = 1) -> "IntPoly":
        if exp == 0:
            return cls.const(coeff)
        return cls({((name, exp),): coeff})

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls({(): c}) if c else cls()

    def __eq__(self, other):
        return isinstance(other, IntPoly) and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        res = IntPoly()
        res.terms = out
        return res

    def __neg__(self):
        res = IntPoly()
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    @staticmethod
    def _mul_mono(m1, m2):
        out = dict(m1)
        for v, e in m2:
            out[v] = out.get(v, 0) + e
        return tuple(sorted(out.items()))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = self._mul_mono(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        res = IntPoly()
        res.terms = out
        return res

    __rmul__ = __mul__

    def scale(self, c: int) -> "IntPoly":
        res = IntPoly()
        if c:
            res.terms = {m: c * k for m, k in self.terms.items()}
        return res

    def __pow__(self, e: int) -> "IntPoly":
        if e < 0:
            raise DomainError("negative polynomial power")
        result = IntPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, d: int) -> "IntPoly":
        res = IntPoly()
        out = {}
        for m, c in self.terms.items():
            q, r = divmod(c, d)
            if r:
                raise InternalCheckError(
                    f"inexact division by {d} at monomial {m} (coeff {c}); "
                    "ghost recursion integrality violated"
                )
            out[m] = q
        res.terms = out
        return res

    def subs(self, mapping: dict) -> "IntPoly":
        """Substitute IntPoly values for variables (used by symbolic checks)."""
        out = IntPoly()
        pow_cache: dict = {}
        for mono, c in self.terms.items():
            term = IntPoly.const(c)
            for v, e in mono:
                rep = mapping.get(v)
                if rep is None:
                    term = term * IntPoly.var(v, e)
                else:
                    key = (v, e)
                    if key not in pow_cache:
                        pow_cache[key] = rep ** e
                    term = term * pow_cache[key]
            out = out + term
        return out

    def variables(self):
        seen = set()
        for mono in self.terms:
            for v, _ in mono:
                seen.add(v)
        return sorted(seen)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            factors = [f"{v}^{e}" if e > 1 else v for v, e in mono]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def ghost_poly(i: int, p: int, kind: str = "X") -> IntPoly:
    """The ghost component w_i = sum_{j<=i} p^j X_j^{p^(i-j)}."""
    if i < 0:
        raise DomainError("ghost index must be >= 0")
    out = IntPoly()
    for j in range(i + 1):
        out = out + IntPoly.var(f"{kind}{j}", p ** (i - j), p ** j)
    return out


@functools.lru_cache(maxsize=None)
def structure_polys(op: str, n: int, p: int) -> tuple[IntPoly, ...]:
    """Universal polynomials for Witt sum / product / negation.

    Solves w_k(R_0..R_k) = w_k(X) op w_k(Y) level by level; each step
    divides exactly by p^k.
    """
    if n < 1:
        raise DomainError("need n >= 1")
    polys: list[IntPoly] = []
    for k in range(n):
        wx = ghost_poly(k, p, "X")
        if op == "sum":
            target = wx + ghost_poly(k, p, "Y")
        elif op == "product":
            target = wx * ghost_poly(k, p, "Y")
        elif op == "negation":
            target = -wx
        else:
            raise DomainError(f"unknown structure operation {op!r}")
        acc = target
        for j in range(k):
            acc = acc - polys[j] ** (p ** (k - j)) * (p ** j)
        polys.append(acc.exact_div(p ** k))
    return tuple(polys)


@functools.lru_cache(maxsize=None)
def frobenius_polys(n: int, p: int) -> tuple[IntPoly, ...]:
    """Universal Frobenius polynomials: w_k(F_0..F_k) = w_{k+1}(X)."""
    polys: list[IntPoly] = []
    for k in range(n):
        acc = ghost_poly(k + 1, p, "X")
        for j in range(k):
            acc = acc - polys[j] ** (p ** (k - j)) * (p ** j)
        polys.append(acc.exact_div(p ** k))
    return tuple(polys)


def _compile_mod_p(polys, n: int, k: FpAlgebra):
    """Reduce structure polynomials mod p and bind variables to slots.

    A slot is an index into the concatenated coordinate list
    (x_0..x_{n-1}, y_0..y_{n-1}); each compiled term is
    (coeff-as-k-id, ((slot, exp), ...)).
    """
    p = k.p
    compiled = []
    max_exp = 1
    for poly in polys:
        terms = []
        for mono, c in sorted(poly.terms.items()):
            c %= p
            if c == 0:
                continue
            slots = []
            for v, e in mono:
                idx = int(v[1:])
                slots.append((idx if v[0] == "X" else n + idx, e))
                max_exp = max(max_exp, e)
            terms.append((k.int_id(c), tuple(slots)))
        compiled.append(terms)
    return compiled, max_exp


class WittRing:
    """W_n(k) with id-level arithmetic and vectorized bulk addition.

    Vector ids enumerate coordinate tuples with x_0 most significant, so
    enumeration is lexicographic in the coordinates.
    """

    def __init__(self, k: FpAlgebra, n: int):
        if n < 1:
            raise DomainError("Witt length must be >= 1")
        self.k = k
        self.n = n
        self.q = k.size
        self.size = k.size ** n
        self._compiled: dict[str, tuple] = {}
        self._np: dict[str, tuple] = {}
        self._coords: np.ndarray | None = None

    def __repr__(self):
        return f"W_{self.n}({self.k.describe()})"

    # -- ids <-> coordinate ids ----------------------------------------------

    def coord_ids(self, i: int) -> tuple[int, ...]:
        out = []
        for e in range(self.n - 1, -1, -1):
            w = self.q ** e
            out.append((i // w) % self.q)
        return tuple(out)

    def id_of_coords(self, coords) -> int:
        i = 0
        for c in coords:
            i = i * self.q + c
        return i

    def vector(self, elems) -> "WittVector":
        return WittVector(self, elems)

    def element_of_id(self, i: int) -> "WittVector":
        k = self.k
        return WittVector(self, [k.element_of_id(c) for c in self.coord_ids(i)])

    def enumerate(self):
        return [self.element_of_id(i) for i in range(self.size)]

    @property
    def zero(self) -> "WittVector":
        return self.element_of_id(0)

    @property
    def one(self) -> "WittVector":
        return WittVector(self, [self.k.one] + [self.k.zero] * (self.n - 1))

    # -- compiled structure polynomials --------------------------------------

    def _ops(self, op: str):
        ent = self._compiled.get(op)
        if ent is None:
            polys = structure_polys(op, self.n, self.k.p)
            compiled, max_exp = _compile_mod_p(polys, self.n, self.k)
            pow_tab = self.k.pow_table(max_exp)
            ent = (compiled, pow_tab)
            self._compiled[op] = ent
        return ent

    def _eval_ids(self, op: str, xs, ys):
        compiled, pow_tab = self._ops(op)
        k = self.k
        slots = list(xs) + (list(ys) if ys is not None else [])
        out = []
        for terms in compiled:
            acc = 0  # id of zero
            for coeff, factors in terms:
                t = coeff
                for slot, e in factors:
                    t = k.mul_ids(t, pow_tab[slots[slot]][e])
                acc = k.add_ids(acc, t)
            out.append(acc)
        return tuple(out)

    def add_ids(self, i: int, j: int) -> int:
        return self.id_of_coords(
            self._eval_ids("sum", self.coord_ids(i), self.coord_ids(j)))

    def neg_ids(self, i: int) -> int:
        return self.id_of_coords(
            self._eval_ids("negation", self.coord_ids(i), None))

    def mul_ids(self, i: int, j: int) -> int:
        return self.id_of_coords(
            self._eval_ids("product", self.coord_ids(i), self.coord_ids(j)))

    # -- vectorized bulk operations ------------------------------------------

    def _np_tables(self, op: str):
        ent = self._np.get(op)
        if ent is None:
            compiled, pow_tab = self._ops(op)
            k = self.k
            mul = np.zeros((k.size, k.size), dtype=np.int64)
            for a in range(k.size):
                for b in range(k.size):
                    mul[a, b] = k.mul_ids(a, b)
            add = np.zeros((k.size, k.size), dtype=np.int64)
            for a in range(k.size):
                for b in range(k.size):
                    add[a, b] = k.add_ids(a, b)
            pows = np.array(pow_tab, dtype=np.int64)
            ent = (compiled, mul, add, pows)
            self._np[op] = ent
        return ent

    def coords_array(self) -> np.ndarray:
        if self._coords is None:
            arr = np.zeros((self.size, self.n), dtype=np.int64)
            ids = np.arange(self.size)
            for e in range(self.n):
                arr[:, self.n - 1 - e] = (ids // (self.q ** e)) % self.q
            self._coords = arr
        return self._coords

    def _vec_eval(self, op: str, xs: np.ndarray, ys: np.ndarray | None):
        compiled, mul, add, pows = self._np_tables(op)
        coords = self.coords_array()
        cx = coords[xs]
        cy = coords[ys] if ys is not None else None
        length = len(xs)
        out = np.zeros(length, dtype=np.int64)
        weights = self.q ** np.arange(self.n - 1, -1, -1)
        for pos, terms in enumerate(compiled):
            acc = np.zeros(length, dtype=np.int64)
            for coeff, factors in terms:
                t = np.full(length, coeff, dtype=np.int64)
                for slot, e in factors:
                    col = cx[:, slot] if slot < self.n else cy[:, slot - self.n]
                    t = mul[t, pows[col, e]]
                acc = add[acc, t]
            out += acc * weights[pos]
        return out

    def add_vec(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized Witt sum on id arrays (broadcast to a common length)."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if xs.shape != ys.shape:
            xs, ys = np.broadcast_arrays(xs, ys)
        return self._vec_eval("sum", xs, ys)

    def neg_vec(self, xs: np.ndarray) -> np.ndarray:
        return self._vec_eval("negation", np.asarray(xs, dtype=np.int64), None)

    def mul_p_vec(self, xs: np.ndarray) -> np.ndarray:
        """p-fold Witt sum, vectorized."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = xs
        for _ in range(self.k.p - 1):
            acc = self.add_vec(acc, xs)
        return acc

    # -- coordinate maps -----------------------------------------------------

    def frob_endo_ids(self, i: int) -> int:
        frob = self.k.frobenius_ids()
        return self.id_of_coords([frob[c] for c in self.coord_ids(i)])

    def versch_endo_ids(self, i: int) -> int:
        coords = self.coord_ids(i)
        return self.id_of_coords((0,) + coords[:-1])

    def restrict_ids(self, i: int) -> int:
        """Drop the top coordinate: an id of W_{n-1}(k)."""
        if self.n < 2:
            raise DomainError("cannot restrict below length 1")
        return self.id_of_coords(self.coord_ids(i)[:-1])

    def frob_mixed_ids(self, i: int) -> int:
        """Coordinatewise p-th powers then drop the top: an id of W_{n-1}."""
        if self.n < 2:
            raise DomainError("frob_mixed needs length >= 2")
        frob = self.k.frobenius_ids()
        return self.id_of_coords([frob[c] for c in self.coord_ids(i)[:-1]])

    def versch_mixed_ids(self, i: int) -> int:
        """Shift up: an id of W_{n+1}(k)."""
        coords = (0,) + self.coord_ids(i)
        out = 0
        for c in coords:
            out = out * self.q + c
        return out


@functools.lru_cache(maxsize=None)
def witt_ring(k: FpAlgebra, n: int) -> WittRing:
    return WittRing(k, n)


class WittVector:
    """An element of W_n(k): parent ring plus n coordinates in k."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: WittRing, coords):
        coords = tuple(coords)
        if len(coords) != ring.n:
            raise DomainError(
                f"expected {ring.n} coordinates, got {len(coords)}")
        for c in coords:
            if not isinstance(c, AlgElement) or c.algebra != ring.k:
                raise DomainError(f"coordinate {c!r} not in {ring.k.describe()}")
        self.ring = ring
        self.coords = coords

    @property
    def index(self) -> int:
        return self.ring.id_of_coords(c.index for c in self.coords)

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise DomainError(f"cannot combine WittVector with {other!r}")
        if other.ring.k != self.ring.k or other.ring.n != self.ring.n:
            raise DomainError(
                f"length/parent mismatch: {self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        self._check(other)
        return self.ring.element_of_id(self.ring.add_ids(self.index, other.index))

    def __neg__(self):
        return self.ring.element_of_id(self.ring.neg_ids(self.index))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return self.ring.element_of_id(self.ring.mul_ids(self.index, other.index))

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and other.ring.n == self.ring.n
            and other.ring.k == self.ring.k
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.ring.n, self.coords))

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


def w_add(a: WittVector, b: WittVector) -> WittVector:
    return a + b


def w_mul(a: WittVector, b: WittVector) -> WittVector:
    return a * b


def w_neg(a: WittVector) -> WittVector:
    return -a


def teichmuller(a: AlgElement, n: int) -> WittVector:
    """The multiplicative lift (a, 0, ..., 0) of length n."""
    ring = witt_ring(a.algebra, n)
    return WittVector(ring, (a,) + (a.algebra.zero,) * (n - 1))


def frob_endo(x: WittVector) -> WittVector:
    """Coordinatewise p-th power as a self-map of W_n."""
    return WittVector(x.ring, [c ** c.algebra.p for c in x.coords])


def frob_mixed(x: WittVector) -> WittVector:
    """Frobenius W_{n+1} -> W_n: p-th powers, then drop the top coordinate."""
    if x.ring.n < 2:
        raise DomainError("frob_mixed undefined on W_1 (no level 0 target)")
    target = witt_ring(x.ring.k, x.ring.n - 1)
    return WittVector(target, [c ** c.algebra.p for c in x.coords[:-1]])


def versch_endo(x: WittVector) -> WittVector:
    """Shift and drop the top coordinate: a self-map of W_n."""
    return WittVector(x.ring, (x.ring.k.zero,) + x.coords[:-1])


def versch_mixed(x: WittVector) -> WittVector:
    """Shift up: W_n -> W_{n+1}."""
    target = witt_ring(x.ring.k, x.ring.n + 1)
    return WittVector(target, (x.ring.k.zero,) + x.coords)


def restrict(x: WittVector) -> WittVector:
    """Drop the top coordinate: the ring map W_n -> W_{n-1}."""
    if x.ring.n < 2:
        raise DomainError("cannot restrict W_1")
    target = witt_ring(x.ring.k, x.ring.n - 1)
    return WittVector(target, x.coords[:-1])


def mul_p(x: WittVector) -> WittVector:
    """x added to itself p times (the multiplication-by-p map)."""
    acc = x
    for _ in range(x.ring.k.p - 1):
        acc = acc + x
    return acc
