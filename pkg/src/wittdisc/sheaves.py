"""Constructors for the named objects: M(A,b)_{m,n}, Witt sheaves,
Dieudonne-module sheaves, and pro-object towers.

Inverse limits are represented as finite towers of levels with
transition maps plus decision procedures (pro-vanishing, surjectivity
sweeps) instead of limit carriers: the complete objects in play are
pro-finite, and every claim verified downstream reduces to levelwise
facts together with pro-vanishing of truncation artifacts.
"""

from __future__ import annotations

import functools

import numpy as np

from .basering import FpAlgebra
from .abgrp import (
    FinAbGroup,
    GroupHom,
    kernel,
    quotient,
    subgroup,
)
from .errors import CapExceeded, DomainError
from .perv import PervMor, PervModule, PervObj, j_shriek, LocObj
from .wittcore import WittRing, witt_ring


# -- quotient-ring specifications ---------------------------------------------


class QuotRingSpec:
    """A base ring with a chosen element b whose quotients A/(b^e) are
    finite: the integers with b = p, or F_p[t] with b = t."""

    def __init__(self, base: str, p: int):
        if base not in ("Z", "poly"):
            raise DomainError("base must be 'Z' or 'poly'")
        self.base = base
        self.p = p

    def __repr__(self):
        return f"(Z, b={self.p})" if self.base == "Z" \
            else f"(F_{self.p}[t], b=t)"

    def quotient_size(self, e: int) -> int:
        return self.p ** e

    def quotient_group(self, e: int, cap: int) -> FinAbGroup:
        """A/(b^e) as an additive group; ids are canonical residues."""
        size = self.quotient_size(e)
        if size > cap:
            raise CapExceeded(f"|A/(b^{e})| = {size} exceeds cap {cap}")
        if self.base == "Z":
            G = FinAbGroup.cyclic(size)
            G.label = f"Z/{self.p}^{e}"
            return G
        alg = FpAlgebra(self.p, [0] * e + [1], var="t")
        G = FinAbGroup(alg.size, alg.add_ids, alg.neg_ids,
                       label=f"F_{self.p}[t]/(t^{e})",
                       elements=alg.enumerate())
        G.algebra = alg
        return G

    def mul(self, e: int, i: int, j: int) -> int:
        """Ring multiplication on canonical ids of A/(b^e)."""
        if self.base == "Z":
            return (i * j) % self.p ** e
        return self._alg(e).mul_ids(i, j)

    @functools.lru_cache(maxsize=None)
    def _alg(self, e: int) -> FpAlgebra:
        return FpAlgebra(self.p, [0] * e + [1], var="t")

    def one_id(self, e: int) -> int:
        if self.base == "Z":
            return 1
        return self._alg(e).int_id(1)

    def b_id(self, e: int) -> int:
        """Id of the element b in A/(b^e)."""
        if self.base == "Z":
            return self.p % self.p ** e
        alg = self._alg(e)
        if e == 1:
            return 0  # t == 0 in F_p[t]/(t)
        return alg.id_of(alg.element([0, 1]))

    def projection_ids(self, e_from: int, e_to: int):
        """Canonical projection A/(b^{e_from}) -> A/(b^{e_to}) on ids."""
        if e_to > e_from:
            raise DomainError("projection must lower the exponent")
        if self.base == "Z":
            m = self.p ** e_to
            return [i % m for i in range(self.p ** e_from)]
        src, tgt = self._alg(e_from), self._alg(e_to)
        out = []
        for a in src.enumerate():
            out.append(tgt.id_of(tgt.element(a.coeffs[:e_to])))
        return out

    def mult_bm_ids(self, e_from: int, e_to: int, m: int):
        """Multiplication by b^m, A/(b^{e_from}) -> A/(b^{e_to}) on the
        canonical lifts (well defined when e_to <= e_from + m)."""
        if e_to > e_from + m:
            raise DomainError("b^m-multiplication not well defined here")
        if self.base == "Z":
            mod = self.p ** e_to
            return [(self.p ** m * i) % mod for i in range(self.p ** e_from)]
        src, tgt = self._alg(e_from), self._alg(e_to)
        out = []
        for a in src.enumerate():
            shifted = [0] * m + list(a.coeffs)
            out.append(tgt.id_of(tgt.element(shifted[:e_to])))
        return out


def make_m_ab(spec: QuotRingSpec, m: int, n: int,
              cap: int = 4096) -> PervObj:
    """The diagram A/(b^n) <-> A/(b^{n+m}) with v = b^m, u = projection.

    Validity comes from nilpotence of b^m on the larger quotient; m = 0
    makes 1 - vu the zero map on a nonzero carrier and is rejected.
    """
    if m < 0 or n < 1:
        raise DomainError("need m >= 0 and n >= 1")
    phi = spec.quotient_group(n, cap)
    psi = spec.quotient_group(n + m, cap)
    u = GroupHom(psi, phi, spec.projection_ids(n + m, n), label="proj")
    v = GroupHom(phi, psi, spec.mult_bm_ids(n, n + m, m), label=f"b^{m}")
    try:
        M = PervObj(phi, psi, u, v, label=f"M{spec!r}_{{{m},{n}}}",
                    phi_mul=lambda a, b: spec.mul(n, a, b),
                    psi_mul=lambda a, b: spec.mul(n + m, a, b))
    except DomainError as exc:
        if m == 0:
            raise DomainError(
                f"m = 0 gives vu = 1 and T = 0 on a ring of size "
                f"{psi.size}; the diagram is not perverse") from exc
        raise
    return M


def make_m_ab_module(spec: QuotRingSpec, rank: int, m: int, n: int,
                     cap: int = 4096) -> PervModule:
    """The free-module diagram (N/b^n N, N/b^{n+m} N; b^m, proj) for
    N = A^rank, as a module over make_m_ab(spec, m, n)."""
    if rank < 0:
        raise DomainError("rank must be >= 0")
    base = make_m_ab(spec, m, n, cap=cap)
    if rank == 0:
        from .perv import zero_perv
        Z = zero_perv()
        return PervModule(base, Z, lambda a, x: 0, lambda a, x: 0,
                          label="0-module")
    comp_phi = [spec.quotient_group(n, cap) for _ in range(rank)]
    comp_psi = [spec.quotient_group(n + m, cap) for _ in range(rank)]
    phi = FinAbGroup.product(comp_phi) if rank > 1 else comp_phi[0]
    psi = FinAbGroup.product(comp_psi) if rank > 1 else comp_psi[0]
    if phi.size > cap or psi.size > cap:
        raise CapExceeded("module carrier exceeds cap")
    size_phi = spec.quotient_size(n)
    size_psi = spec.quotient_size(n + m)

    def split(i, size):
        out = []
        for _ in range(rank):
            out.append(i % size)
            i //= size
        return list(reversed(out))

    def join(parts, size):
        i = 0
        for c in parts:
            i = i * size + c
        return i

    proj_tab = spec.projection_ids(n + m, n)
    bm_tab = spec.mult_bm_ids(n, n + m, m)
    u = GroupHom(psi, phi,
                 [join([proj_tab[c] for c in split(i, size_psi)], size_phi)
                  for i in range(psi.size)], label="proj")
    v = GroupHom(phi, psi,
                 [join([bm_tab[c] for c in split(i, size_phi)], size_psi)
                  for i in range(phi.size)], label=f"b^{m}")
    N = PervObj(phi, psi, u, v, label=f"N{spec!r}^{rank}_{{{m},{n}}}")

    def act_phi(a, x):
        return join([spec.mul(n, a, c) for c in split(x, size_phi)], size_phi)

    def act_psi(a, x):
        return join([spec.mul(n + m, a, c) for c in split(x, size_psi)],
                    size_psi)

    return PervModule(base, N, act_phi, act_psi, label=f"A^{rank}-module")


# -- towers ---------------------------------------------------------------------


class ProGroup:
    """Levels indexed 1..n_max with transitions level n+1 -> level n."""

    def __init__(self, levels: list[FinAbGroup], transitions: list[GroupHom],
                 label="T", endos: dict | None = None):
        if len(transitions) != max(len(levels) - 1, 0):
            raise DomainError("need one transition per adjacent pair")
        for i, t in enumerate(transitions):
            if t.source is not levels[i + 1] or t.target is not levels[i]:
                raise DomainError(f"transition {i} has wrong endpoints")
        self.levels = levels
        self.transitions = transitions
        self.label = label
        self.endos = endos or {}

    def __len__(self):
        return len(self.levels)


class ProPerv:
    """Levelwise perverse diagrams with commuting transition squares."""

    def __init__(self, levels: list[PervObj], transitions: list[PervMor],
                 label="T"):
        if len(transitions) != max(len(levels) - 1, 0):
            raise DomainError("need one transition per adjacent pair")
        for i, t in enumerate(transitions):
            if t.source is not levels[i + 1] or t.target is not levels[i]:
                raise DomainError(f"transition {i} has wrong endpoints")
            t.validate()
        self.levels = levels
        self.transitions = transitions
        self.label = label

    def __len__(self):
        return len(self.levels)

    def psi_tower(self) -> ProGroup:
        return ProGroup([M.psi for M in self.levels],
                        [t.f_psi for t in self.transitions],
                        label=f"{self.label}.psi")


def tower_m_ab(spec: QuotRingSpec, m: int, n_max: int,
               cap: int = 4096) -> tuple[ProPerv, list[dict]]:
    """The n-direction tower M(A,b)_{m,n}, n = 1..n_max, with projection
    transitions, plus a levelwise comparison against j_! of the local
    system (A/(b^{n+m}), 1 - b^m)."""
    levels = [make_m_ab(spec, m, n, cap=cap) for n in range(1, n_max + 1)]
    transitions = []
    for i in range(n_max - 1):
        big, small = levels[i + 1], levels[i]
        f_phi = GroupHom(big.phi, small.phi,
                         spec.projection_ids(i + 2, i + 1), label="proj")
        f_psi = GroupHom(big.psi, small.psi,
                         spec.projection_ids(i + 2 + m, i + 1 + m),
                         label="proj")
        transitions.append(PervMor(big, small, f_phi, f_psi, label="proj"))
    tower = ProPerv(levels, transitions, label=f"M{spec!r}_{{{m},*}}")

    comparison = []
    for n, M in zip(range(1, n_max + 1), levels):
        psi = M.psi
        b_m = GroupHom.from_callable(
            psi, psi,
            lambda i, e=n + m: _scalar_power(spec, e, m, i),
            label=f"b^{m}", check=False)
        mono = M.monodromy
        expected = GroupHom(
            psi, psi,
            [psi.sub(i, b_m(i)) for i in range(psi.size)],
            label=f"1-b^{m}", check=False)
        L = LocObj(psi, mono, label=f"(A/b^{n + m}, 1-b^{m})")
        jb = j_shriek(L)
        comparison.append({
            "n": n,
            "phi_order": M.phi.size,
            "psi_order": M.psi.size,
            "j_shriek_phi_order": jb.phi.size,
            "monodromy_is_one_minus_bm": bool(
                np.array_equal(mono.images, expected.images)),
        })
    return tower, comparison


def _scalar_power(spec: QuotRingSpec, e: int, m: int, i: int) -> int:
    """i * b^m inside A/(b^e)."""
    out = i
    for _ in range(m):
        out = spec.mul(e, out, spec.b_id(e))
    return out


def m_direction_candidates(spec: QuotRingSpec, m: int, n: int,
                           cap: int = 4096) -> list[dict]:
    """The documented search for maps M(A,b)_{m,n} -> M(A,b)_{m-1,n}.

    Candidate components are drawn from the multiplication-type maps:
    f_phi in {id, b*-} on A/(b^n), f_psi in {projection, b*- then project}.
    Each candidate's two squares are checked elementwise.
    """
    if m < 2:
        raise DomainError("target needs m - 1 >= 1")
    src = make_m_ab(spec, m, n, cap=cap)
    tgt = make_m_ab(spec, m - 1, n, cap=cap)
    phi_maps = {
        "id": GroupHom(src.phi, tgt.phi, np.arange(src.phi.size),
                       label="id", check=False),
        "mult_b": GroupHom.from_callable(
            src.phi, tgt.phi,
            lambda i: _scalar_power(spec, n, 1, i), label="b", check=False),
    }
    proj = spec.projection_ids(n + m, n + m - 1)
    psi_maps = {
        "proj": GroupHom(src.psi, tgt.psi, proj, label="proj", check=False),
        "mult_b": GroupHom(
            src.psi, tgt.psi,
            spec.mult_bm_ids(n + m, n + m - 1, 1), label="b", check=False),
    }
    out = []
    for pn, fp in phi_maps.items():
        for sn, fs in psi_maps.items():
            v_lhs = fs.compose(src.v)
            v_rhs = tgt.v.compose(fp)
            u_lhs = fp.compose(src.u)
            u_rhs = tgt.u.compose(fs)
            v_ok = bool(np.array_equal(v_lhs.images, v_rhs.images))
            u_ok = bool(np.array_equal(u_lhs.images, u_rhs.images))
            out.append({
                "candidate": f"({pn}, {sn})",
                "v_square": v_ok,
                "u_square": u_ok,
                "commutes": v_ok and u_ok,
            })
    return out


# -- Witt groups and sheaves -----------------------------------------------------


class _WittElems:
    """Lazy printable elements for a Witt carrier."""

    def __init__(self, ring: WittRing):
        self.ring = ring

    def __getitem__(self, i: int):
        return self.ring.element_of_id(i)

    def __len__(self):
        return self.ring.size


@functools.lru_cache(maxsize=None)
def witt_group(k: FpAlgebra, n: int) -> FinAbGroup:
    """W_n(k) as a finite abelian group with bulk-vectorized addition."""
    ring = witt_ring(k, n)
    G = FinAbGroup(ring.size, ring.add_ids, ring.neg_ids,
                   label=f"W_{n}({k.describe()})", bulk=ring)
    G.elements = _WittElems(ring)
    G.ring = ring
    return G


@functools.lru_cache(maxsize=None)
def frob_mixed_hom(k: FpAlgebra, n: int) -> GroupHom:
    """F: W_{n+1}(k) -> W_n(k)."""
    src, tgt = witt_group(k, n + 1), witt_group(k, n)
    images = [src.ring.frob_mixed_ids(i) for i in range(src.size)]
    return GroupHom(src, tgt, images, label="F", check=False)


@functools.lru_cache(maxsize=None)
def versch_mixed_hom(k: FpAlgebra, n: int) -> GroupHom:
    """V: W_n(k) -> W_{n+1}(k)."""
    src, tgt = witt_group(k, n), witt_group(k, n + 1)
    images = [src.ring.versch_mixed_ids(i) for i in range(src.size)]
    return GroupHom(src, tgt, images, label="V", check=False)


@functools.lru_cache(maxsize=None)
def restriction_hom(k: FpAlgebra, n: int) -> GroupHom:
    """Drop the top coordinate: W_{n+1}(k) -> W_n(k)."""
    src, tgt = witt_group(k, n + 1), witt_group(k, n)
    images = [src.ring.restrict_ids(i) for i in range(src.size)]
    return GroupHom(src, tgt, images, label="res", check=False)


@functools.lru_cache(maxsize=None)
def frob_endo_hom(k: FpAlgebra, n: int) -> GroupHom:
    G = witt_group(k, n)
    images = [G.ring.frob_endo_ids(i) for i in range(G.size)]
    return GroupHom(G, G, images, label="F", check=False)


@functools.lru_cache(maxsize=None)
def versch_endo_hom(k: FpAlgebra, n: int) -> GroupHom:
    G = witt_group(k, n)
    images = [G.ring.versch_endo_ids(i) for i in range(G.size)]
    return GroupHom(G, G, images, label="V", check=False)


@functools.lru_cache(maxsize=None)
def mul_p_hom(k: FpAlgebra, n: int) -> GroupHom:
    """Multiplication by p as p-fold addition (vectorized)."""
    G = witt_group(k, n)
    images = G.ring.mul_p_vec(np.arange(G.size))
    return GroupHom(G, G, images, label="p", check=False)


@functools.lru_cache(maxsize=None)
def make_witt_sheaf(k: FpAlgebra, n: int, model: str = "mixed",
                    dual: bool = True, cap: int = 4096) -> PervObj:
    """The Witt diagram at truncation level n.

    endo model: phi = psi = W_n with the self-map pair; mixed model:
    the carriers differ by one level so that both maps are the genuine
    level-shifting Frobenius and Verschiebung.  dual swaps which of the
    two plays the variation v.
    """
    if model not in ("endo", "mixed"):
        raise DomainError(f"unknown model {model!r}")
    top = n if model == "endo" else n + 1
    if k.size ** top > cap:
        raise CapExceeded(
            f"|W_{top}(k)| = {k.size ** top} exceeds cap {cap}")
    name = "W^v" if dual else "W"
    label = f"{name}({k.describe()}, n={n}, {model})"
    if model == "endo":
        G = witt_group(k, n)
        F = frob_endo_hom(k, n)
        V = versch_endo_hom(k, n)
        ring = G.ring
        if dual:
            return PervObj(G, G, u=V, v=F, label=label,
                           phi_mul=ring.mul_ids, psi_mul=ring.mul_ids)
        return PervObj(G, G, u=F, v=V, label=label,
                       phi_mul=ring.mul_ids, psi_mul=ring.mul_ids)
    Wn = witt_group(k, n)
    Wn1 = witt_group(k, n + 1)
    F = frob_mixed_hom(k, n)
    V = versch_mixed_hom(k, n)
    if dual:
        return PervObj(Wn1, Wn, u=V, v=F, label=label,
                       phi_mul=Wn1.ring.mul_ids, psi_mul=Wn.ring.mul_ids)
    return PervObj(Wn, Wn1, u=F, v=V, label=label,
                   phi_mul=Wn.ring.mul_ids, psi_mul=Wn1.ring.mul_ids)


def witt_tower(k: FpAlgebra, n_max: int, cap: int = 4096) -> ProGroup:
    """The restriction tower W_n(k), n = 1..n_max, with the natural
    endomaps p, F, V attached levelwise."""
    if k.size ** n_max > cap:
        raise CapExceeded("tower top level exceeds cap")
    levels = [witt_group(k, n) for n in range(1, n_max + 1)]
    transitions = [restriction_hom(k, n) for n in range(1, n_max)]
    endos = {
        "p": [mul_p_hom(k, n) for n in range(1, n_max + 1)],
        "F": [frob_endo_hom(k, n) for n in range(1, n_max + 1)],
        "V": [versch_endo_hom(k, n) for n in range(1, n_max + 1)],
        "identity": [GroupHom.identity(G) for G in levels],
    }
    return ProGroup(levels, transitions, label=f"W_*({k.describe()})",
                    endos=endos)


def witt_sheaf_tower(k: FpAlgebra, n_max: int, model: str = "mixed",
                     dual: bool = True, cap: int = 4096) -> ProPerv:
    levels = [make_witt_sheaf(k, n, model, dual, cap=cap)
              for n in range(1, n_max + 1)]
    transitions = []
    for n in range(1, n_max):
        big, small = levels[n], levels[n - 1]
        if model == "endo":
            f = restriction_hom(k, n)
            transitions.append(PervMor(big, small, f, f, label="res"))
        else:
            transitions.append(PervMor(
                big, small,
                restriction_hom(k, n + 1) if dual else restriction_hom(k, n),
                restriction_hom(k, n) if dual else restriction_hom(k, n + 1),
                label="res"))
    return ProPerv(levels, transitions, label=f"W-tower({model})")


# -- Dieudonne modules ------------------------------------------------------------


class DieudonneModule:
    """A finite p-group M with operators F, V satisfying V.F = p."""

    def __init__(self, M: FinAbGroup, F: GroupHom, V: GroupHom, label="M"):
        for f in (F, V):
            if f.source is not M or f.target is not M:
                raise DomainError("F and V must be endomorphisms of M")
        from .abgrp import _p_of_order
        p = _p_of_order(M.size)
        comp = V.compose(F)
        mult_p = np.array([M.scalar(p, i) for i in range(M.size)],
                          dtype=np.int64)
        if not np.array_equal(comp.images, mult_p):
            bad = int(np.flatnonzero(comp.images != mult_p)[0])
            raise DomainError(
                f"V.F != p on {label}: witness {M.repr_of(bad)} "
                f"(V.F -> {M.repr_of(int(comp.images[bad]))}, "
                f"p* -> {M.repr_of(int(mult_p[bad]))})")
        self.M = M
        self.F = F
        self.V = V
        self.p = p
        self.label = label


def make_dieudonne_sheaf(D: DieudonneModule,
                         variation_is: str = "V") -> PervObj:
    """The diagram (M, M) with the variation taken to be V (matching the
    source construction) or F; valid because p is nilpotent on M."""
    if variation_is == "V":
        return PervObj(D.M, D.M, u=D.F, v=D.V, label=f"M({D.label})")
    if variation_is == "F":
        return PervObj(D.M, D.M, u=D.V, v=D.F, label=f"M({D.label})^v")
    raise DomainError("variation_is must be 'V' or 'F'")


# -- pro-object calculus -----------------------------------------------------------


def _resolve_maps(tower, selector):
    if isinstance(tower, ProPerv):
        grp = tower.psi_tower()
    else:
        grp = tower
    if isinstance(selector, str):
        maps = grp.endos.get(selector)
        if maps is None:
            raise DomainError(
                f"tower {grp.label} has no endomap named {selector!r}")
    else:
        maps = list(selector)
    if len(maps) != len(grp.levels):
        raise DomainError("need one endomap per level")
    return grp, maps


def _check_commutes(grp: ProGroup, maps) -> None:
    for i, t in enumerate(grp.transitions):
        lhs = t.compose(maps[i + 1])
        rhs = maps[i].compose(t)
        if not np.array_equal(lhs.images, rhs.images):
            bad = int(np.flatnonzero(lhs.images != rhs.images)[0])
            raise DomainError(
                f"selected maps do not commute with the transition "
                f"{i + 2}->{i + 1}; witness id {bad}")


def pro_kernel(tower, selector) -> ProGroup:
    """Levelwise kernels of a commuting family, with induced transitions."""
    grp, maps = _resolve_maps(tower, selector)
    _check_commutes(grp, maps)
    kers = [kernel(f, label=f"ker@{i + 1}") for i, f in enumerate(maps)]
    levels = [K for K, _ in kers]
    transitions = []
    for i, t in enumerate(grp.transitions):
        Kbig, inc_big = kers[i + 1]
        Ksmall, _ = kers[i]
        images = []
        for s in range(Kbig.size):
            tgt = t(inc_big(s))
            sub = Ksmall.parent_index(tgt)
            if sub is None:
                raise DomainError("transition leaves the kernel tower")
            images.append(sub)
        transitions.append(GroupHom(Kbig, Ksmall, images, label="res",
                                    check=False))
    return ProGroup(levels, transitions, label=f"ker({grp.label})")


def pro_cokernel(tower, selector) -> ProGroup:
    """Levelwise cokernels of a commuting family, with induced transitions."""
    grp, maps = _resolve_maps(tower, selector)
    _check_commutes(grp, maps)
    cokers = []
    for i, f in enumerate(maps):
        Q, proj = quotient(grp.levels[i], f.image_ids(),
                           label=f"coker@{i + 1}")
        cokers.append((Q, proj))
    levels = [Q for Q, _ in cokers]
    transitions = []
    for i, t in enumerate(grp.transitions):
        Qbig, _ = cokers[i + 1]
        Qsmall, proj_small = cokers[i]
        images = [proj_small(t(Qbig.rep_ids[c])) for c in range(Qbig.size)]
        transitions.append(GroupHom(Qbig, Qsmall, images, label="res",
                                    check=False))
    return ProGroup(levels, transitions, label=f"coker({grp.label})")


def is_pro_zero(T: ProGroup, window: int) -> bool:
    """True iff every composite of `window` consecutive transitions
    vanishes (the finite-level certificate that the limit is zero)."""
    if window < 1:
        raise DomainError("window must be >= 1")
    if window > len(T.levels) - 1:
        raise DomainError(
            f"window {window} needs at least {window + 1} levels")
    for top in range(window, len(T.levels)):
        comp = T.transitions[top - 1]
        for j in range(top - 2, top - window - 1, -1):
            comp = T.transitions[j].compose(comp)
        if not comp.is_zero():
            return False
    return True


def transitions_surjective(T: ProGroup) -> bool:
    return all(t.is_surjective() for t in T.transitions)
