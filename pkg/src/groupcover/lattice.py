"""Subgroup lattice and structural computations.

Subgroups are stored as bitsets (Python ints) over the parent group's element
index. The full lattice is enumerated by cyclic extension: seed with the
trivial subgroup plus every perfect subgroup, then repeatedly extend a known
subgroup H by prime-order elements of N_G(H)/H. Cyclic extension alone reaches
exactly the solvable subgroups, and every subgroup sits above its perfect
residual through a chain of such extensions, so the seeded closure is the
whole lattice.

Perfect subgroups are located by a two-generator sweep over (class rep,
centralizer-orbit rep) pairs followed by a join-extension fixpoint. All
perfect groups small enough to appear under the lattice cap are 2-generated,
and the enumeration is cross-checked against a naive oracle and known
subgroup counts in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import config
from .group import CapExceeded, Group, coset_action
from .perm import Perm

# -- bitset helpers -------------------------------------------------------


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    buf = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(buf, bitorder="little")[:n].astype(bool)


def bits_to_indices(bits: int, n: int) -> np.ndarray:
    return np.flatnonzero(bits_to_mask(bits, n))


class LatticeCapExceeded(CapExceeded):
    pass


class NotASubgroupError(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupRef:
    """A subgroup of `parent`: membership bitset plus generator witnesses."""

    parent: Group
    bits: int
    gens: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def mask(self) -> np.ndarray:
        return bits_to_mask(self.bits, self.parent.order)

    def indices(self) -> np.ndarray:
        return bits_to_indices(self.bits, self.parent.order)

    def is_proper(self) -> bool:
        return self.order < self.parent.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def contains(self, other: "SubgroupRef") -> bool:
        return other.bits & self.bits == other.bits

    def contains_element(self, idx: int) -> bool:
        return bool((self.bits >> int(idx)) & 1)

    def words(self) -> list[str]:
        els = self.parent.elements
        if not self.gens:
            return ["()"]
        return [els[i].word() for i in self.gens]

    def index_in_parent(self) -> int:
        return self.parent.order // self.order

    def __repr__(self) -> str:
        return f"SubgroupRef(order={self.order} in {self.parent.name})"


def subgroup_from_indices(G: Group, indices, gens=None) -> SubgroupRef:
    mask = np.zeros(G.order, dtype=bool)
    mask[np.asarray(list(indices), dtype=np.int64)] = True
    bits = mask_to_bits(mask)
    if gens is None:
        gens = generating_indices(G, bits)
    return SubgroupRef(G, bits, tuple(int(g) for g in gens))


def subgroup_from_words(G: Group, words) -> SubgroupRef:
    gens = [G.element_index(Perm.parse(w, G.degree)) for w in words]
    mask = G.closure_mask(gens)
    return SubgroupRef(G, mask_to_bits(mask), tuple(sorted({g for g in gens if g})))


def generating_indices(G: Group, bits: int) -> tuple[int, ...]:
    """Deterministic small generating set for the subgroup given by bits."""
    n = G.order
    target = bits.bit_count()
    if target == 1:
        return ()
    orders = G.order_array()
    members = bits_to_indices(bits, n)
    members = sorted((int(i) for i in members if i != 0), key=lambda i: (-int(orders[i]), i))
    gens: list[int] = []
    cur_mask = None
    for i in members:
        if cur_mask is not None and cur_mask[i]:
            continue
        gens.append(i)
        cur_mask = G.closure_mask(gens)
        if int(cur_mask.sum()) == target:
            return tuple(gens)
    raise NotASubgroupError("bitset is not multiplicatively closed")


def closure_subgroup(G: Group, gen_indices) -> SubgroupRef:
    gens = tuple(sorted({int(i) for i in gen_indices if int(i) != 0}))
    mask = G.closure_mask(gens)
    return SubgroupRef(G, mask_to_bits(mask), gens)


def conjugate_bits(G: Group, bits: int, conj_map: np.ndarray) -> int:
    mask = bits_to_mask(bits, G.order)
    out = np.zeros(G.order, dtype=bool)
    out[conj_map[mask]] = True
    return mask_to_bits(out)


def conjugacy_orbit_bits(G: Group, bits: int) -> list[int]:
    """All G-conjugates of a subgroup bitset (orbit under generator conjugation)."""
    maps = G.conj_by_gen_maps()
    seen = {bits}
    queue = [bits]
    while queue:
        b = queue.pop()
        for m in maps:
            c = conjugate_bits(G, b, m)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return sorted(seen)


def core_bits(G: Group, bits: int) -> int:
    out = bits
    for b in conjugacy_orbit_bits(G, bits):
        out &= b
    return out


# -- derived series / solvability -----------------------------------------


def _conj_closure_mask(G: Group, start_mask: np.ndarray, conj_maps) -> np.ndarray:
    """Subgroup closure of start_mask, additionally closed under the given
    conjugation maps."""
    mask = start_mask.copy()
    while True:
        sub = G.closure_mask(np.flatnonzero(mask))
        grew = False
        for m in conj_maps:
            img = np.zeros(G.order, dtype=bool)
            img[m[sub]] = True
            if np.any(img & ~sub):
                sub |= img
                grew = True
        if not grew:
            return sub
        mask = sub


def derived_mask(G: Group, gen_indices) -> np.ndarray:
    """Derived subgroup of the subgroup generated by gen_indices."""
    gens = [int(i) for i in gen_indices]
    T = G.table()
    inv = G.inverse_array()
    comm_mask = np.zeros(G.order, dtype=bool)
    comm_mask[0] = True
    for a in gens:
        for b in gens:
            c = int(T[T[int(inv[a]), int(inv[b])], int(T[a, b])])
            comm_mask[c] = True
    conj_maps = [G.conjugation_map(g) for g in gens]
    return _conj_closure_mask(G, comm_mask, conj_maps)


def is_perfect_bits(G: Group, bits: int, gens) -> bool:
    d = derived_mask(G, gens)
    return mask_to_bits(d) == bits


def is_solvable(G: Group) -> bool:
    if G.order == 1:
        return True
    gens = [G.element_index(g) for g in G.generators]
    bits = mask_to_bits(G.closure_mask(gens)) if gens else 1
    while True:
        d = derived_mask(G, gens)
        dbits = mask_to_bits(d)
        if dbits == 1:
            return True
        if dbits == bits:
            return False
        bits = dbits
        gens = generating_indices(G, dbits)


def is_abelian(G: Group) -> bool:
    return all(len(c) == 1 for c in G.conjugacy_classes())


def is_cyclic(G: Group) -> bool:
    return bool(np.any(G.order_array() == G.order))


# -- Sylow / nilpotency ----------------------------------------------------


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def sylow(G: Group, p: int) -> SubgroupRef:
    n = G.order
    if n % p != 0:
        raise ValueError(f"{p} does not divide |G| = {n}")
    full = 1
    while n % (full * p) == 0:
        full *= p
    orders = G.order_array()
    # deterministic p-element to start from
    start = None
    for i in range(n):
        o = int(orders[i])
        if o % p == 0:
            k = o
            while k % p == 0:
                k //= p
            start = int(G.power_map(k)[i])
            break
    assert start is not None
    current = closure_subgroup(G, [start])
    while current.order < full:
        nmask = G.normalizer_mask(current.mask(), current.gens)
        cand = np.flatnonzero(nmask & ~current.mask())
        pick = None
        for g in cand:
            o = int(orders[g])
            while o % p == 0:
                o //= p
            if o == 1:
                pick = int(g)
                break
        assert pick is not None, "p-subgroup not contained in a Sylow?"
        current = closure_subgroup(G, list(current.gens) + [pick])
    return current


def is_nilpotent(G: Group) -> bool:
    for p in prime_factors(G.order):
        s = sylow(G, p)
        if not bool(np.all(G.normalizer_mask(s.mask(), s.gens))):
            return False
    return True


# -- normal subgroups ------------------------------------------------------


def normal_subgroups(G: Group) -> list[SubgroupRef]:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    if getattr(G, "_normals", None) is not None:
        return G._normals
    n = G.order
    classes = G.conjugacy_classes()
    seeds: dict[int, SubgroupRef] = {}
    for cls in classes[1:]:
        mask = np.zeros(n, dtype=bool)
        mask[np.array(cls)] = True
        mask[0] = True
        sub = G.closure_mask(np.flatnonzero(mask))
        bits = mask_to_bits(sub)
        if bits not in seeds:
            seeds[bits] = SubgroupRef(G, bits, generating_indices(G, bits))
    found = dict(seeds)
    trivial_bits = 1
    found.setdefault(trivial_bits, SubgroupRef(G, trivial_bits, ()))
    worklist = list(seeds.values())
    all_list = list(found.values())
    while worklist:
        nxt = []
        for a in worklist:
            for b in list(all_list):
                join_bits = a.bits | b.bits
                if join_bits == a.bits or join_bits == b.bits:
                    continue
                sub = G.closure_mask(np.flatnonzero(bits_to_mask(join_bits, n)))
                jb = mask_to_bits(sub)
                if jb not in found:
                    ref = SubgroupRef(G, jb, generating_indices(G, jb))
                    found[jb] = ref
                    nxt.append(ref)
                    all_list.append(ref)
        worklist = nxt
    out = sorted(found.values(), key=lambda s: (s.order, s.bits))
    G._normals = out
    return out


def minimal_normal_subgroups(G: Group) -> list[SubgroupRef]:
    normals = [s for s in normal_subgroups(G) if 1 < s.order < G.order]
    out = []
    for s in normals:
        if not any(t.order < s.order and s.contains(t) for t in normals):
            out.append(s)
    if not out and G.order > 1:
        # simple group: the unique minimal normal subgroup is G itself
        full = mask_to_bits(np.ones(G.order, dtype=bool))
        out = [SubgroupRef(G, full, tuple(G.element_index(g) for g in G.generators))]
    return sorted(out, key=lambda s: (s.order, s.bits))


def socle(G: Group) -> SubgroupRef:
    mins = minimal_normal_subgroups(G)
    bits = 1
    for s in mins:
        bits |= s.bits
    sub = G.closure_mask(bits_to_indices(bits, G.order))
    b = mask_to_bits(sub)
    return SubgroupRef(G, b, generating_indices(G, b))


def is_monolithic(G: Group) -> bool:
    return len(minimal_normal_subgroups(G)) == 1


def is_normal(G: Group, ref: SubgroupRef) -> bool:
    return bool(np.all(G.normalizer_mask(ref.mask(), ref.gens)))


def center_subgroup(G: Group) -> SubgroupRef:
    bits = mask_to_bits(G.center_mask())
    return SubgroupRef(G, bits, generating_indices(G, bits))


# -- perfect subgroups -----------------------------------------------------


def _centralizer_orbit_reps(G: Group, a: int) -> list[int]:
    """One representative per orbit of C_G(a) acting on G by conjugation."""
    n = G.order
    cmask = G.centralizer_mask([a])
    cbits = mask_to_bits(cmask)
    cgens = generating_indices(G, cbits)
    maps = [G.conjugation_map(g) for g in cgens]
    seen = np.zeros(n, dtype=bool)
    reps = []
    for start in range(n):
        if seen[start]:
            continue
        reps.append(start)
        stack = [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            for m in maps:
                y = int(m[x])
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return reps


def perfect_subgroup_class_reps(G: Group) -> list[SubgroupRef]:
    """Representatives of conjugacy classes of non-trivial perfect subgroups."""
    n = G.order
    if n < 60 or is_solvable(G):
        return []
    G.table()
    orders = G.order_array()
    half = n // 2
    found: dict[int, SubgroupRef] = {}

    def record(mask: np.ndarray) -> SubgroupRef | None:
        bits = mask_to_bits(mask)
        if bits in found:
            return None
        size = bits.bit_count()
        if size < 60 or len(prime_factors(size)) < 3:
            return None
        gens = generating_indices(G, bits)
        if not is_perfect_bits(G, bits, gens):
            return None
        ref = SubgroupRef(G, bits, gens)
        found[bits] = ref
        return ref

    class_reps = [c[0] for c in G.conjugacy_classes() if int(orders[c[0]]) > 1]
    for a in class_reps:
        for b in _centralizer_orbit_reps(G, a):
            if int(orders[b]) <= 1:
                continue
            mask = G.closure_mask([a, b], abort_above=half)
            if mask is not None:
                record(mask)
    # join-extension fixpoint for perfect subgroups needing more generators
    queue = list(found.values())
    while queue:
        ref = queue.pop()
        nmask = G.normalizer_mask(ref.mask(), ref.gens)
        nbits = mask_to_bits(nmask)
        for c in _subgroup_orbit_reps(G, nbits):
            if ref.contains_element(c):
                continue
            mask = G.closure_mask(list(ref.gens) + [int(c)], abort_above=half)
            if mask is not None:
                new = record(mask)
                if new is not None:
                    queue.append(new)
    # dedup conjugates: keep the smallest bits per conjugacy orbit
    reps: list[SubgroupRef] = []
    seen_orbit: set[int] = set()
    for bits in sorted(found):
        if bits in seen_orbit:
            continue
        orbit = conjugacy_orbit_bits(G, bits)
        seen_orbit.update(orbit)
        reps.append(found[bits])
    return reps


def _subgroup_orbit_reps(G: Group, normalizer_bits: int) -> list[int]:
    """Element orbit representatives under conjugation by a subgroup (given by
    bits of its members); used to cut duplicate join extensions."""
    gens = generating_indices(G, normalizer_bits)
    maps = [G.conjugation_map(g) for g in gens]
    n = G.order
    seen = np.zeros(n, dtype=bool)
    reps = []
    for start in range(n):
        if seen[start]:
            continue
        reps.append(start)
        stack = [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            for m in maps:
                y = int(m[x])
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return reps


# -- full lattice by cyclic extension ---------------------------------------


def all_subgroups(G: Group) -> list[SubgroupRef]:
    """Every subgroup of G, sorted by (order, bitset)."""
    if getattr(G, "_lattice", None) is not None:
        return G._lattice
    n = G.order
    if n > config.lattice_cap():
        raise LatticeCapExceeded(
            f"|{G.name}| = {n} exceeds the lattice cap {config.lattice_cap()}; "
            "supply maximal_subgroups in the group spec file instead"
        )
    G.table()
    orders = G.order_array()
    primes = prime_factors(n)
    found: dict[int, SubgroupRef] = {}

    def add(bits: int, gens: tuple[int, ...]) -> bool:
        if bits in found:
            return False
        if len(gens) > 3:
            gens = generating_indices(G, bits)
        found[bits] = SubgroupRef(G, bits, gens)
        return True

    add(1, ())
    for ref in perfect_subgroup_class_reps(G):
        for bits in conjugacy_orbit_bits(G, ref.bits):
            add(bits, generating_indices(G, bits))
    full_mask = np.ones(n, dtype=bool)
    add(mask_to_bits(full_mask), tuple(G.element_index(g) for g in G.generators))

    T = G.table()
    queue = sorted(found.values(), key=lambda s: (s.order, s.bits))
    head = 0
    worklist = list(queue)
    while head < len(worklist):
        H = worklist[head]
        head += 1
        if H.order == n:
            continue
        hmask = H.mask()
        hidx = np.flatnonzero(hmask)
        nmask = G.normalizer_mask(hmask, H.gens) if H.order > 1 else full_mask
        cand_base = nmask & ~hmask
        quotient = n // H.order
        for p in primes:
            if quotient % p != 0:
                continue
            pm = G.power_map(p)
            cand = cand_base & hmask[pm]
            alive = np.flatnonzero(cand)
            dead = np.zeros(n, dtype=bool)
            for g in alive:
                g = int(g)
                if dead[g]:
                    continue
                umask = hmask.copy()
                coset = hidx
                for _ in range(p - 1):
                    coset = T[coset, g]
                    umask[coset] = True
                dead |= umask
                bits = mask_to_bits(umask)
                if bits not in found:
                    ref = SubgroupRef(G, bits, tuple(H.gens) + (g,))
                    if len(ref.gens) > 3:
                        ref = SubgroupRef(G, bits, generating_indices(G, bits))
                    found[bits] = ref
                    worklist.append(ref)
    out = sorted(found.values(), key=lambda s: (s.order, s.bits))
    G._lattice = out
    return out


# -- maximal subgroups / Frattini -------------------------------------------


def maximal_subgroups(G: Group) -> list[SubgroupRef]:
    """All maximal proper subgroups; uses an externally attached list when the
    lattice is out of reach."""
    if getattr(G, "_maximals", None) is not None:
        return G._maximals
    if G.known_maximal_words is not None:
        out = []
        for words in G.known_maximal_words:
            gens = [G.element_index(Perm.parse(w, G.degree)) for w in words]
            ref = closure_subgroup(G, gens)
            if not ref.is_proper():
                raise NotASubgroupError("listed maximal subgroup equals the group")
            out.append(ref)
        for a in out:
            for b in out:
                if a is not b and a.contains(b):
                    raise NotASubgroupError(
                        "listed maximal subgroups are not pairwise incomparable"
                    )
        out = sorted(out, key=lambda s: (s.order, s.bits))
        G._maximals = out
        return out
    subs = all_subgroups(G)
    proper = [s for s in subs if 1 <= s.order < G.order]
    by_order: dict[int, list[SubgroupRef]] = {}
    for s in proper:
        by_order.setdefault(s.order, []).append(s)
    out = []
    for s in proper:
        is_max = True
        for o, bucket in by_order.items():
            if o <= s.order or o % s.order != 0:
                continue
            if any(t.contains(s) for t in bucket):
                is_max = False
                break
        if is_max:
            out.append(s)
    out = sorted(out, key=lambda s: (s.order, s.bits))
    G._maximals = out
    return out


def frattini(G: Group) -> SubgroupRef:
    bits = None
    for m in maximal_subgroups(G):
        bits = m.bits if bits is None else bits & m.bits
    if bits is None:  # trivial group: no maximal subgroups
        bits = 1
    return SubgroupRef(G, bits, generating_indices(G, bits))


def is_primitive(G: Group) -> bool:
    """Has a core-free maximal subgroup."""
    for m in maximal_subgroups(G):
        if core_bits(G, m.bits) == 1:
            return True
    return False


# -- chief factors with complement counts -----------------------------------


@dataclass(frozen=True)
class ChiefFactorReport:
    K: SubgroupRef
    H: SubgroupRef
    order: int
    multiple_complements: bool


def _complement_count_at_least_two(Q: Group, mbits: int) -> bool:
    """Does the minimal normal subgroup M of Q (bits given) have >= 2
    complements in Q?"""
    msize = mbits.bit_count()
    want = Q.order // msize
    count = 0
    for s in all_subgroups(Q):
        if s.order == want and (s.bits & mbits) == 1:
            count += 1
            if count >= 2:
                return True
    return False


def chief_factors_with_complements(G: Group) -> list[ChiefFactorReport]:
    """All chief factors H/K over all normal K, flagged by whether they have
    more than one complement in G/K."""
    if getattr(G, "_chief_reports", None) is not None:
        return G._chief_reports
    reports = []
    normals = normal_subgroups(G)
    by_bits = {s.bits: s for s in normals}
    for K in normals:
        if K.order == G.order:
            continue
        hom = coset_action(G, K.mask())
        Q = hom.target
        emap = hom.element_map()
        for M in minimal_normal_subgroups(Q):
            mmask_q = M.mask()
            pre_mask = mmask_q[emap]
            pre_bits = mask_to_bits(pre_mask)
            H = by_bits.get(pre_bits)
            if H is None:
                H = SubgroupRef(G, pre_bits, generating_indices(G, pre_bits))
            flag = _complement_count_at_least_two(Q, M.bits)
            reports.append(ChiefFactorReport(K, H, M.order, flag))
    reports.sort(key=lambda r: (r.order, r.K.order, r.K.bits))
    G._chief_reports = reports
    return reports


__all__ = [
    "ChiefFactorReport",
    "LatticeCapExceeded",
    "NotASubgroupError",
    "SubgroupRef",
    "all_subgroups",
    "bits_to_indices",
    "bits_to_mask",
    "center_subgroup",
    "chief_factors_with_complements",
    "closure_subgroup",
    "conjugacy_orbit_bits",
    "core_bits",
    "derived_mask",
    "frattini",
    "generating_indices",
    "is_abelian",
    "is_cyclic",
    "is_monolithic",
    "is_nilpotent",
    "is_normal",
    "is_perfect_bits",
    "is_primitive",
    "is_solvable",
    "mask_to_bits",
    "maximal_subgroups",
    "minimal_normal_subgroups",
    "normal_subgroups",
    "prime_factors",
    "socle",
    "subgroup_from_indices",
    "subgroup_from_words",
    "sylow",
]
