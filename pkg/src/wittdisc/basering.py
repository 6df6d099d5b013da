"""Finite commutative F_p-algebras k = F_p[x]/(f).

These are the coefficient rings of the whole engine: finite fields
F_{p^d} when f is irreducible, non-reduced algebras such as F_p[t]/(t^2)
otherwise.  Carriers are tiny (p^d elements), fully enumerated in
lexicographic order of coefficient sequences, so perfectness and
nilpotence are decided by exhaustive sweeps.

Everything here is immutable after construction; the lazily built
operation tables are write-once and safe to share between threads.
"""

from __future__ import annotations

import itertools
import re

from .errors import DomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


_TERM_RE = re.compile(
    r"""^\s*(?P<coeff>\d+)?\s*\*?\s*
        (?:(?P<var>[a-zA-Z])\s*(?:\^\s*(?P<exp>\d+))?)?\s*$""",
    re.VERBOSE,
)


def parse_modulus(text: str) -> tuple[tuple[int, ...], str]:
    """Parse a modulus polynomial like ``x^2+x+1`` or ``t^2``.

    Terms may appear in any order, coefficients are optional, and a
    single variable letter is allowed.  Returns the ascending integer
    coefficient tuple and the variable letter (``x`` for constant
    moduli, which are rejected later anyway).
    """
    cleaned = text.replace("-", "+-").replace(" ", "")
    parts = [t for t in cleaned.split("+") if t]
    if not parts:
        raise DomainError(f"empty modulus string: {text!r}")
    coeffs: dict[int, int] = {}
    var = None
    for part in parts:
        sign = 1
        if part.startswith("-"):
            sign, part = -1, part[1:]
        m = _TERM_RE.match(part)
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise DomainError(f"cannot parse modulus term {part!r} in {text!r}")
        c = int(m.group("coeff")) if m.group("coeff") else 1
        if m.group("var"):
            if var is None:
                var = m.group("var")
            elif var != m.group("var"):
                raise DomainError(f"two variable letters in modulus {text!r}")
            e = int(m.group("exp")) if m.group("exp") else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
    degree = max(coeffs)
    out = tuple(coeffs.get(i, 0) for i in range(degree + 1))
    return out, (var or "x")


class AlgElement:
    """An element of an FpAlgebra: d residues mod p, zero-padded."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: "FpAlgebra", coeffs):
        self.algebra = algebra
        self.coeffs = tuple(c % algebra.p for c in coeffs)
        if len(self.coeffs) != algebra.degree:
            raise DomainError(
                f"element needs exactly {algebra.degree} coefficients, "
                f"got {len(self.coeffs)}"
            )

    def _check_parent(self, other: "AlgElement") -> None:
        if not isinstance(other, AlgElement) or other.algebra != self.algebra:
            raise DomainError(f"mixed parent algebras: {self!r} vs {other!r}")

    @property
    def index(self) -> int:
        return self.algebra.id_of(self)

    def __add__(self, other):
        self._check_parent(other)
        k = self.algebra
        return k.element_of_id(k.add_ids(self.index, other.index))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        k = self.algebra
        return k.element_of_id(k.neg_ids(self.index))

    def __mul__(self, other):
        self._check_parent(other)
        k = self.algebra
        return k.element_of_id(k.mul_ids(self.index, other.index))

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers are not defined here")
        k = self.algebra
        return k.element_of_id(k.pow_ids(self.index, e))

    def __eq__(self, other):
        return (
            isinstance(other, AlgElement)
            and other.algebra == self.algebra
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.algebra.p, self.algebra.modulus, self.coeffs))

    def __repr__(self):
        terms = []
        v = self.algebra.var
        for e in range(self.algebra.degree - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            if e == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}{v}" + (f"^{e}" if e > 1 else ""))
        return "+".join(terms) if terms else "0"


class FpAlgebra:
    """The quotient F_p[x]/(f) for a monic f of degree d >= 1."""

    def __init__(self, p: int, modulus, var: str = "x"):
        if not is_prime(p):
            raise DomainError(f"p = {p} is not prime")
        mod = tuple(c % p for c in modulus)
        while len(mod) > 1 and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) < 2:
            raise DomainError("modulus must have degree >= 1")
        if mod[-1] != 1:
            raise DomainError(f"modulus {modulus} is not monic mod {p}")
        self.p = p
        self.modulus = mod
        self.degree = len(mod) - 1
        self.size = p ** self.degree
        self.var = var
        self._elements: list[AlgElement] | None = None
        self._mul_table: list[list[int]] | None = None
        self._pow_tables: dict[int, list[list[int]]] = {}
        self._frob_ids: list[int] | None = None
        # x^j mod f for j up to 2(d-1), as coefficient tuples
        self._xpow = self._reduce_powers()

    @classmethod
    def from_modulus_string(cls, p: int, text: str) -> "FpAlgebra":
        coeffs, var = parse_modulus(text)
        return cls(p, coeffs, var=var)

    def _reduce_powers(self):
        d, p = self.degree, self.p
        pows = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        # x^d = -(f - x^d), then multiply up by x with reduction
        top = tuple((-c) % p for c in self.modulus[:d])
        pows.append(top)
        for _ in range(d + 1, 2 * d - 1):
            prev = pows[-1]
            shifted = [0] + list(prev[: d - 1])
            lead = prev[d - 1]
            nxt = tuple((shifted[i] + lead * top[i]) % p for i in range(d))
            pows.append(nxt)
        return pows

    # -- identity / equality -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FpAlgebra)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        mod = repr(self.element(
            self.modulus[:-1]))  # low part only; good enough for messages
        return f"F_{self.p}[{self.var}]/(f deg {self.degree}; low {mod})"

    def describe(self) -> str:
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.modulus[e]
            if c == 0:
                continue
            if e == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}{self.var}" + (f"^{e}" if e > 1 else ""))
        return f"F_{self.p}[{self.var}]/({'+'.join(terms)})"

    # -- carrier -------------------------------------------------------------

    def element(self, coeffs) -> AlgElement:
        coeffs = list(coeffs)
        if len(coeffs) < self.degree:
            coeffs += [0] * (self.degree - len(coeffs))
        elif len(coeffs) > self.degree:
            raise DomainError("coefficient sequence longer than the degree")
        return AlgElement(self, coeffs)

    @property
    def zero(self) -> AlgElement:
        return self.element([])

    @property
    def one(self) -> AlgElement:
        return self.element([1])

    def enumerate(self) -> list[AlgElement]:
        """All elements, lexicographic in the coefficient sequence."""
        if self._elements is None:
            self._elements = [
                AlgElement(self, c)
                for c in itertools.product(range(self.p), repeat=self.degree)
            ]
        return self._elements

    def id_of(self, a: AlgElement) -> int:
        i = 0
        for c in a.coeffs:
            i = i * self.p + c
        return i

    def element_of_id(self, i: int) -> AlgElement:
        return self.enumerate()[i]

    # -- id-level arithmetic (tables) ----------------------------------------

    def add_ids(self, i: int, j: int) -> int:
        p = self.p
        # digitwise addition in base p, most significant digit first
        res = 0
        for e in range(self.degree - 1, -1, -1):
            w = p ** e
            di, dj = (i // w) % p, (j // w) % p
            res += ((di + dj) % p) * w
        return res

    def neg_ids(self, i: int) -> int:
        p, res = self.p, 0
        for e in range(self.degree - 1, -1, -1):
            w = p ** e
            res += ((-((i // w) % p)) % p) * w
        return res

    def mul_ids(self, i: int, j: int) -> int:
        if self._mul_table is None:
            self._mul_table = self._build_mul_table()
        return self._mul_table[i][j]

    def _build_mul_table(self):
        d, p = self.degree, self.p
        elems = self.enumerate()
        table = []
        for a in elems:
            row = []
            for b in elems:
                conv = [0] * (2 * d - 1)
                for ia, ca in enumerate(a.coeffs):
                    if ca == 0:
                        continue
                    for ib, cb in enumerate(b.coeffs):
                        conv[ia + ib] = (conv[ia + ib] + ca * cb) % p
                acc = [0] * d
                for e, c in enumerate(conv):
                    if c == 0:
                        continue
                    red = self._xpow[e]
                    for t in range(d):
                        acc[t] = (acc[t] + c * red[t]) % p
                row.append(self.id_of(AlgElement(self, acc)))
            table.append(row)
        return table

    def pow_ids(self, i: int, e: int) -> int:
        """i^e by repeated squaring on element ids."""
        one = self.id_of(self.one)
        if e == 0:
            return one
        result, base = one, i
        while e:
            if e & 1:
                result = self.mul_ids(result, base)
            base = self.mul_ids(base, base)
            e >>= 1
        return result

    def pow_table(self, max_exp: int) -> list[list[int]]:
        """pow_table[i][e] = id of (element i)^e, for 0 <= e <= max_exp."""
        tab = self._pow_tables.get(max_exp)
        if tab is None:
            tab = [
                [self.pow_ids(i, e) for e in range(max_exp + 1)]
                for i in range(self.size)
            ]
            self._pow_tables[max_exp] = tab
        return tab

    def int_id(self, c: int) -> int:
        """Id of the image of the integer c (i.e. c * 1) in the algebra."""
        return self.id_of(self.element([c % self.p]))

    def frobenius_ids(self) -> list[int]:
        if self._frob_ids is None:
            self._frob_ids = [self.pow_ids(i, self.p) for i in range(self.size)]
        return self._frob_ids


def alg_add(a: AlgElement, b: AlgElement) -> AlgElement:
    return a + b


def alg_mul(a: AlgElement, b: AlgElement) -> AlgElement:
    return a * b


def alg_neg(a: AlgElement) -> AlgElement:
    return -a


def frobenius(a: AlgElement) -> AlgElement:
    """The p-th power map, computed by repeated squaring."""
    return a ** a.algebra.p


def is_perfect(k: FpAlgebra) -> bool:
    """True iff the Frobenius is a bijection on the carrier."""
    return len(set(k.frobenius_ids())) == k.size


def p_nilpotents(k: FpAlgebra) -> list[AlgElement]:
    """Elements r with r^p = 0, in enumeration order."""
    zero = k.id_of(k.zero)
    return [k.element_of_id(i) for i, f in enumerate(k.frobenius_ids()) if f == zero]
