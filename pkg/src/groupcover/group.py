"""Finite permutation groups: enumeration, products, wreath products, actions.

A Group is immutable once constructed. Elements are enumerated on demand by a
deterministic BFS over the generators (identity first, fixed generator order),
and every bitset in the package refers to that element ordering. Groups whose
order exceeds the element cap still report their order through a stabilizer
chain but refuse full enumeration.

Convention: permutations compose left to right, so the right-coset action
g -> (Hx -> Hxg) is a homomorphism.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

from . import config
from .perm import MalformedCycleWord, Perm


class CapExceeded(RuntimeError):
    pass


class Group:
    def __init__(self, degree: int, generators: Sequence[Perm], name: str | None = None):
        self.degree = int(degree)
        for g in generators:
            if g.degree != self.degree:
                raise ValueError(f"generator degree {g.degree} != group degree {degree}")
        self.generators = [g for g in generators if not g.is_identity()]
        self.name = name or f"group_deg{self.degree}"
        self._elements: list[Perm] | None = None
        self._index: dict[tuple, int] | None = None
        self._bfs_parent: np.ndarray | None = None  # (parent idx, generator idx)
        self._bfs_gen: np.ndarray | None = None
        self._order: int | None = None
        self._images: np.ndarray | None = None  # (n, degree) point images
        self._table: np.ndarray | None = None
        self._inv: np.ndarray | None = None
        self._orders: np.ndarray | None = None
        self._conj_maps: list[np.ndarray] | None = None
        self._classes: list[list[int]] | None = None
        self._power_maps: dict[int, np.ndarray] = {}
        # optional metadata attached by constructions / spec files
        self.known_maximal_words: list[list[str]] | None = None
        self.direct_factors: tuple["Group", "Group"] | None = None
        self.wreath_info: dict | None = None

    # -- enumeration ----------------------------------------------------

    def enumerate_elements(self, cap: int | None = None) -> list[Perm]:
        if self._elements is not None:
            return self._elements
        cap = cap if cap is not None else config.element_cap()
        ident = Perm.identity(self.degree)
        elements = [ident]
        index = {ident.images: 0}
        parent = [0]
        via = [0]
        queue = 0
        while queue < len(elements):
            e = elements[queue]
            for gi, g in enumerate(self.generators):
                prod = e * g
                if prod.images not in index:
                    index[prod.images] = len(elements)
                    elements.append(prod)
                    parent.append(queue)
                    via.append(gi)
                    if len(elements) > cap:
                        raise CapExceeded(
                            f"{self.name}: order exceeds element cap {cap}"
                        )
            queue += 1
        self._elements = elements
        self._index = index
        self._bfs_parent = np.array(parent, dtype=np.int32)
        self._bfs_gen = np.array(via, dtype=np.int32)
        self._order = len(elements)
        return elements

    @property
    def elements(self) -> list[Perm]:
        return self.enumerate_elements()

    @property
    def index(self) -> dict[tuple, int]:
        self.enumerate_elements()
        return self._index  # type: ignore[return-value]

    def element_index(self, p: Perm) -> int:
        idx = self.index.get(p.images)
        if idx is None:
            raise KeyError(f"{p!r} is not an element of {self.name}")
        return idx

    def __contains__(self, p: Perm) -> bool:
        if self._elements is not None or self.order <= config.element_cap():
            return p.images in self.index
        return self._stab_chain().contains(p)

    @property
    def order(self) -> int:
        if self._order is None:
            if not self.generators:
                self._order = 1
            else:
                self._order = self._stab_chain().order()
        return self._order

    def __len__(self) -> int:
        return self.order

    def _stab_chain(self) -> "StabChain":
        if not hasattr(self, "_chain"):
            self._chain = StabChain(self.degree, self.generators)
        return self._chain

    # -- vectorized kernels ---------------------------------------------

    @property
    def images_array(self) -> np.ndarray:
        if self._images is None:
            els = self.elements
            self._images = np.array([e.images for e in els], dtype=np.int16)
        return self._images

    def has_table(self) -> bool:
        return self._table is not None

    def table(self) -> np.ndarray:
        """Full multiplication table T[i, j] = index(elem_i * elem_j)."""
        if self._table is None:
            n = self.order
            if n * n * 2 > config.table_byte_cap():
                raise CapExceeded(f"{self.name}: multiplication table over byte cap")
            P = self.images_array.astype(np.int64)
            powers = (self.degree ** np.arange(self.degree)).astype(np.int64)
            codes = P @ powers
            sort_order = np.argsort(codes, kind="stable")
            sorted_codes = codes[sort_order]
            dtype = np.int16 if n <= 32767 else np.int32
            T = np.empty((n, n), dtype=dtype)
            for i in range(n):
                composed = P[:, P[i]]  # row j = images of elem_i * elem_j
                row_codes = composed @ powers
                pos = np.searchsorted(sorted_codes, row_codes)
                T[i] = sort_order[pos]
            self._table = T
        return self._table

    def inverse_array(self) -> np.ndarray:
        if self._inv is None:
            P = self.images_array.astype(np.int64)
            invP = np.argsort(P, axis=1)
            powers = (self.degree ** np.arange(self.degree)).astype(np.int64)
            codes = P @ powers
            sort_order = np.argsort(codes, kind="stable")
            sorted_codes = codes[sort_order]
            pos = np.searchsorted(sorted_codes, invP @ powers)
            self._inv = sort_order[pos].astype(np.int32)
        return self._inv

    def order_array(self) -> np.ndarray:
        if self._orders is None:
            self._orders = np.array([e.order() for e in self.elements], dtype=np.int32)
        return self._orders

    def power_map(self, k: int) -> np.ndarray:
        """Array mapping element index x to index of x**k."""
        if k < 0:
            return self.inverse_array()[self.power_map(-k)]
        if k not in self._power_maps:
            n = self.order
            T = self.table()
            result = np.zeros(n, dtype=np.int64)
            base = np.arange(n, dtype=np.int64)
            kk = k
            while kk:
                if kk & 1:
                    result = T[result, base]
                kk >>= 1
                if kk:
                    base = T[base, base]
            self._power_maps[k] = result
        return self._power_maps[k]

    def conj_by_gen_maps(self) -> list[np.ndarray]:
        """For each generator g, the array x -> index(g^-1 * x * g)."""
        if self._conj_maps is None:
            maps = []
            if self._table is not None:
                T = self._table
                inv = self.inverse_array()
                n = self.order
                for g in self.generators:
                    gi = self.element_index(g)
                    left = T[int(inv[gi])]
                    maps.append(T[left, gi].astype(np.int32))
            else:
                idx = self.index
                for g in self.generators:
                    ginv = g.inverse()
                    maps.append(
                        np.array(
                            [idx[(ginv * e * g).images] for e in self.elements],
                            dtype=np.int32,
                        )
                    )
            self._conj_maps = maps
        return self._conj_maps

    def conjugation_map(self, gi: int) -> np.ndarray:
        """Array x -> index(g^-1 * x * g) for one element index gi."""
        if self._table is not None:
            T = self._table
            inv = self.inverse_array()
            return T[T[int(inv[gi])], gi]
        g = self.elements[gi]
        ginv = g.inverse()
        idx = self.index
        return np.array(
            [idx[(ginv * e * g).images] for e in self.elements], dtype=np.int32
        )

    def closure_mask(
        self, gen_indices: Iterable[int], abort_above: int | None = None
    ) -> np.ndarray | None:
        """Boolean membership mask of the subgroup generated by the given
        element indices. Returns None if the closure exceeds abort_above."""
        n = self.order
        members = np.zeros(n, dtype=bool)
        members[0] = True
        gens = np.array(sorted({int(i) for i in gen_indices if int(i) != 0}), dtype=np.int64)
        if gens.size == 0:
            return members
        members[gens] = True
        frontier = np.concatenate(([0], gens))
        if self._table is not None:
            T = self._table
            while frontier.size:
                prods = T[np.ix_(frontier, gens)].ravel()
                prods = np.unique(prods)
                new = prods[~members[prods]]
                members[new] = True
                if abort_above is not None and members.sum() > abort_above:
                    return None
                frontier = new
        else:
            els = self.elements
            idx = self.index
            gen_perms = [els[int(g)] for g in gens]
            count = int(members.sum())
            frontier_list = list(frontier)
            while frontier_list:
                nxt = []
                for fi in frontier_list:
                    e = els[int(fi)]
                    for g in gen_perms:
                        j = idx[(e * g).images]
                        if not members[j]:
                            members[j] = True
                            nxt.append(j)
                            count += 1
                            if abort_above is not None and count > abort_above:
                                return None
                frontier_list = nxt
        return members

    def normalizer_mask(self, member_mask: np.ndarray, gen_indices: Sequence[int]) -> np.ndarray:
        """Mask of {g in G : H^g = H} given generators of H (as indices)."""
        ok = np.ones(self.order, dtype=bool)
        if self._table is not None:
            T = self._table
            inv = self.inverse_array()
            cols = np.arange(self.order)
            for hi in gen_indices:
                conj = T[T[inv, int(hi)], cols]
                ok &= member_mask[conj]
        else:
            els = self.elements
            idx = self.index
            for hi in gen_indices:
                h = els[int(hi)]
                for gi, g in enumerate(els):
                    if ok[gi] and not member_mask[idx[(g.inverse() * h * g).images]]:
                        ok[gi] = False
        return ok

    def centralizer_mask(self, element_indices: Sequence[int]) -> np.ndarray:
        ok = np.ones(self.order, dtype=bool)
        if self.order > 1 and self._table is None:
            self.table()
        T = self._table
        inv = self.inverse_array()
        cols = np.arange(self.order)
        for xi in element_indices:
            conj = T[T[inv, int(xi)], cols]
            ok &= conj == int(xi)
        return ok

    def center_mask(self) -> np.ndarray:
        return self.centralizer_mask([self.element_index(g) for g in self.generators])

    # -- conjugacy classes ----------------------------------------------

    def conjugacy_classes(self) -> list[list[int]]:
        """Partition of element indices, classes sorted by (rep order, size)."""
        if self._classes is None:
            n = self.order
            maps = self.conj_by_gen_maps()
            assigned = np.full(n, -1, dtype=np.int64)
            classes = []
            for start in range(n):
                if assigned[start] >= 0:
                    continue
                cid = len(classes)
                orbit = [start]
                assigned[start] = cid
                k = 0
                while k < len(orbit):
                    x = orbit[k]
                    for m in maps:
                        y = int(m[x])
                        if assigned[y] < 0:
                            assigned[y] = cid
                            orbit.append(y)
                    k += 1
                classes.append(sorted(orbit))
            orders = self.order_array()
            classes.sort(key=lambda c: (int(orders[c[0]]), len(c), c[0]))
            self._classes = classes
        return self._classes

    # -- misc -----------------------------------------------------------

    def subgroup_mask_from_perms(self, perms: Iterable[Perm]) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        idx = self.index
        for p in perms:
            if p.images not in idx:
                raise KeyError(f"{p!r} not in {self.name}")
            mask[idx[p.images]] = True
        return mask

    def fingerprint(self) -> tuple:
        """Cheap isomorphism-invariant summary: order, exponent, abelianness,
        sorted class sizes."""
        orders = self.order_array()
        classes = self.conjugacy_classes()
        exponent = 1
        for o in set(int(x) for x in orders):
            exponent = exponent * o // gcd(exponent, o)
        abelian = all(len(c) == 1 for c in classes)
        return (self.order, int(exponent), abelian, tuple(sorted(len(c) for c in classes)))

    def __repr__(self) -> str:
        known = self._order if self._order is not None else "?"
        return f"Group({self.name}, degree={self.degree}, order={known})"


class StabChain:
    """Incremental Schreier-Sims stabilizer chain; order and membership only.

    An element added at level l fixes base[:l], so the generating set for the
    level-l stabilizer is everything added at levels >= l. The chain is valid
    once every Schreier generator at every level sifts to the identity.
    """

    def __init__(self, degree: int, generators: Sequence[Perm]):
        self.degree = degree
        self.base: list[int] = []
        self.added: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []
        for g in generators:
            if not g.is_identity():
                self._add(g)
        self._complete()

    def _gens_at(self, level: int) -> list[Perm]:
        return [h for lvl in range(level, len(self.base)) for h in self.added[lvl]]

    def _build_orbit(self, level: int) -> None:
        beta = self.base[level]
        gens = self._gens_at(level)
        trans = {beta: Perm.identity(self.degree)}
        queue = [beta]
        while queue:
            pt = queue.pop(0)
            rep = trans[pt]
            for g in gens:
                img = g(pt)
                if img not in trans:
                    trans[img] = rep * g
                    queue.append(img)
        self.trans[level] = trans

    def _strip(self, g: Perm) -> tuple[Perm, int]:
        for lvl, beta in enumerate(self.base):
            img = g(beta)
            t = self.trans[lvl]
            if img not in t:
                return g, lvl
            g = g * t[img].inverse()
        return g, len(self.base)

    def _add(self, h: Perm) -> None:
        """Record h (known non-identity, already stripped or raw) at its level."""
        h, lvl = self._strip(h)
        if h.is_identity():
            return
        if lvl == len(self.base):
            moved = min(i for i in range(self.degree) if h(i) != i)
            self.base.append(moved)
            self.added.append([])
            self.trans.append({})
        self.added[lvl].append(h)
        for l in range(lvl, -1, -1):
            self._build_orbit(l)

    def _complete(self) -> None:
        changed = True
        while changed:
            changed = False
            for level in range(len(self.base) - 1, -1, -1):
                gens = self._gens_at(level)
                t = self.trans[level]
                for pt in list(t.keys()):
                    rep = t[pt]
                    for g in gens:
                        schreier = rep * g * t[g(pt)].inverse()
                        if schreier.is_identity():
                            continue
                        residue, _ = self._strip(schreier)
                        if not residue.is_identity():
                            self._add(residue)
                            changed = True

    def order(self) -> int:
        total = 1
        for t in self.trans:
            total *= len(t)
        return total

    def contains(self, g: Perm) -> bool:
        h, _ = self._strip(g)
        return h.is_identity()


# -- constructors --------------------------------------------------------


def group_from_generators(
    degree: int, words: Sequence[str], name: str | None = None
) -> Group:
    """Build a group from cycle words; enumerates eagerly when within cap."""
    gens = [Perm.parse(w, degree) for w in words]
    G = Group(degree, gens, name=name)
    try:
        order = G._stab_chain().order() if gens else 1
    except Exception:  # pragma: no cover - chain is total on valid perms
        order = None
    if order is not None:
        G._order = order
        if order <= config.element_cap():
            G.enumerate_elements()
    return G


def direct_product(A: Group, B: Group, name: str | None = None) -> Group:
    """External direct product acting on the disjoint union of the point sets."""
    dA, dB = A.degree, B.degree
    gens: list[Perm] = []
    for g in A.generators:
        gens.append(Perm(tuple(g.images) + tuple(range(dA, dA + dB))))
    for g in B.generators:
        gens.append(Perm(tuple(range(dA)) + tuple(i + dA for i in g.images)))
    P = Group(dA + dB, gens, name=name or f"{A.name}x{B.name}")
    P._order = A.order * B.order
    if P._order <= config.element_cap():
        P.enumerate_elements()
    P.direct_factors = (A, B)
    return P


def embedding_homs(P: Group) -> tuple["GroupHom", "GroupHom"]:
    """The canonical embeddings A -> AxB and B -> AxB of a direct product."""
    if P.direct_factors is None:
        raise ValueError("group was not built by direct_product")
    A, B = P.direct_factors
    dA, dB = A.degree, B.degree
    ia = [Perm(tuple(g.images) + tuple(range(dA, dA + dB))) for g in A.generators]
    ib = [Perm(tuple(range(dA)) + tuple(i + dA for i in g.images)) for g in B.generators]
    return GroupHom(A, P, ia), GroupHom(B, P, ib)


def wreath_cyclic_top(X: Group, m: int, name: str | None = None) -> Group:
    """X wr C_m: base X^m on m point blocks, top an m-cycle of blocks."""
    if m < 2:
        raise ValueError("wreath top order must be at least 2")
    d = X.degree
    gens: list[Perm] = []
    for g in X.generators:
        gens.append(Perm(tuple(g.images) + tuple(range(d, m * d))))
    shift = Perm(tuple((i + d) % (m * d) for i in range(m * d)))
    gens.append(shift)
    W = Group(m * d, gens, name=name or f"{X.name}_wr_C{m}")
    W._order = X.order**m * m
    if W._order <= config.element_cap():
        W.enumerate_elements()
    base_gens: list[Perm] = []
    for b in range(m):
        for g in X.generators:
            images = list(range(m * d))
            for i in range(d):
                images[b * d + i] = b * d + g.images[i]
            base_gens.append(Perm(images))
    W.wreath_info = {
        "factor": X,
        "m": m,
        "block_size": d,
        "base_generators": base_gens,
        "top_generator": shift,
    }
    return W


class NotASubgroup(ValueError):
    pass


def coset_action(G: Group, member_mask: np.ndarray, name: str | None = None) -> "GroupHom":
    """Action of G on the right cosets of the subgroup given by member_mask.

    The mask must describe a subgroup; when it is normal the image is G/H.
    """
    n = G.order
    H = np.flatnonzero(member_mask)
    if H.size == 0 or not member_mask[0]:
        raise NotASubgroup("mask does not contain the identity")
    if n % H.size != 0:
        raise NotASubgroup("subgroup order does not divide group order")
    T = G.table()
    coset_of = np.full(n, -1, dtype=np.int64)
    reps = []
    for g in range(n):
        if coset_of[g] < 0:
            cid = len(reps)
            reps.append(g)
            coset_of[T[H, g]] = cid
    num = len(reps)
    if num * H.size != n:
        raise NotASubgroup("mask is not multiplicatively closed")
    gen_images = []
    for g in G.generators:
        gi = G.element_index(g)
        images = coset_of[T[np.array(reps), gi]]
        gen_images.append(Perm(images))
    target = Group(num, gen_images, name=name or f"{G.name}_cosets")
    target.enumerate_elements()
    return GroupHom(G, target, gen_images)


class GroupHom:
    """Homomorphism defined on generators, with a cached element-level map."""

    def __init__(self, source: Group, target: Group, gen_images: Sequence[Perm]):
        if len(gen_images) != len(source.generators):
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.gen_images = list(gen_images)
        self._element_map: np.ndarray | None = None

    def element_map(self) -> np.ndarray:
        """Array mapping source element index -> target element index."""
        if self._element_map is None:
            src = self.source
            src.enumerate_elements()
            tgt = self.target
            n = src.order
            out = np.zeros(n, dtype=np.int64)
            img_idx = [tgt.element_index(p) for p in self.gen_images]
            parents = src._bfs_parent
            vias = src._bfs_gen
            if tgt._table is None and tgt.order**2 * 2 <= config.table_byte_cap():
                tgt.table()
            if tgt._table is not None:
                T = tgt.table()
                for k in range(1, n):
                    out[k] = T[out[parents[k]], img_idx[vias[k]]]
            else:
                els = tgt.elements
                idx = tgt.index
                for k in range(1, n):
                    p = els[int(out[parents[k]])] * self.gen_images[vias[k]]
                    out[k] = idx[p.images]
            self._element_map = out
        return self._element_map

    def image_order(self) -> int:
        return len(set(self.element_map().tolist()))

    def kernel_mask(self) -> np.ndarray:
        return self.element_map() == 0

    def apply(self, p: Perm) -> Perm:
        i = self.source.element_index(p)
        return self.target.elements[int(self.element_map()[i])]

    def check_homomorphism(self, sample: int | None = None) -> bool:
        """Verify img(ab) == img(a) img(b); full check when the source is small."""
        src = self.source
        emap = self.element_map()
        n = src.order
        Ts = src.table()
        Tt = self.target.table()
        if sample is None and n <= 2000:
            lhs = emap[Ts]
            rhs = Tt[np.ix_(emap, emap)]
            return bool(np.array_equal(lhs, rhs))
        rng = np.random.default_rng(0)
        k = sample or 2000
        a = rng.integers(0, n, size=k)
        b = rng.integers(0, n, size=k)
        return bool(np.all(emap[Ts[a, b]] == Tt[emap[a], emap[b]]))


def conjugacy_classes(G: Group) -> list[list[int]]:
    return G.conjugacy_classes()


__all__ = [
    "CapExceeded",
    "Group",
    "GroupHom",
    "NotASubgroup",
    "StabChain",
    "conjugacy_classes",
    "coset_action",
    "direct_product",
    "embedding_homs",
    "group_from_generators",
    "wreath_cyclic_top",
]
