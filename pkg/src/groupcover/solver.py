"""Exact sigma(G) through a reduction pipeline plus exact minimum set cover.

The cover universe is one generator per maximal cyclic subgroup: a subgroup
contains g exactly when it contains <g>, so covering those generators covers
the group. Candidates for a full-group instance are the maximal subgroups.

The exact engine is a MILP (HiGHS via scipy) with a deterministic pure-Python
branch-and-bound kept for small instances and cross-checks; the counting and
order-sum ("minimal index") bounds drive the bounds-only fallback when a time
budget runs out.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import inf

import numpy as np

from . import config
from .group import CapExceeded, Group, coset_action
from .lattice import (
    LatticeCapExceeded,
    SubgroupRef,
    all_subgroups,
    bits_to_mask,
    chief_factors_with_complements,
    frattini,
    generating_indices,
    is_cyclic,
    is_monolithic,
    is_nilpotent,
    is_primitive,
    is_solvable,
    mask_to_bits,
    maximal_subgroups,
    minimal_normal_subgroups,
    normal_subgroups,
    prime_factors,
    sylow,
)

try:
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import csr_matrix

    _HAVE_MILP = True
except ImportError:  # pragma: no cover
    _HAVE_MILP = False

INFINITY = inf


class TomkinsonAssumptionError(RuntimeError):
    """Raised when a non-cyclic solvable group has no chief factor with more
    than one complement; that would contradict the solvable covering theorem."""


class BoundViolation(RuntimeError):
    pass


class InfeasibleCover(RuntimeError):
    pass


# -- cover instances --------------------------------------------------------


@dataclass
class CoverInstance:
    group: Group
    universe: list[int]  # element index of one generator per target
    candidates: list[SubgroupRef]
    cover_bits: list[int]  # bitset over universe positions, per candidate
    origin: str  # "full-group" | "coset-restricted"

    @property
    def n_targets(self) -> int:
        return len(self.universe)


def maximal_cyclic_generators(G: Group, restrict_mask: np.ndarray | None = None) -> list[int]:
    """One generator per cyclic subgroup <g> (g ranging over the restricted
    set) that is maximal among those cyclic subgroups."""
    n = G.order
    T = G.table()
    orders = G.order_array()
    allowed = np.ones(n, dtype=bool) if restrict_mask is None else restrict_mask.copy()
    allowed[0] = False
    dominated = np.zeros(n, dtype=bool)
    power_lists: dict[int, list[int]] = {}
    for g in range(1, n):
        if not allowed[g]:
            continue
        og = int(orders[g])
        powers = [g]
        cur = g
        for _ in range(og - 2):
            cur = int(T[cur, g])
            powers.append(cur)
        power_lists[g] = powers
        for k in range(2, og):
            if np.gcd(k, og) > 1:
                dominated[powers[k - 1]] = True
    out = []
    seen: set[frozenset] = set()
    for g in range(1, n):
        if not allowed[g] or dominated[g]:
            continue
        key = frozenset(power_lists[g])
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def build_cover_instance(
    G: Group,
    restrict: np.ndarray | None = None,
    candidates: list[SubgroupRef] | None = None,
) -> CoverInstance:
    """Universe: maximal cyclic subgroups (of the restricted element set);
    candidates default to the maximal subgroups of G."""
    if candidates is None:
        candidates = maximal_subgroups(G)
    origin = "coset-restricted" if restrict is not None else "full-group"
    candidates = sorted(candidates, key=lambda s: (-s.order, s.bits))
    universe = maximal_cyclic_generators(G, restrict)
    cover_bits = []
    for c in candidates:
        bits = 0
        for pos, t in enumerate(universe):
            if c.contains_element(t):
                bits |= 1 << pos
        cover_bits.append(bits)
    return CoverInstance(G, universe, candidates, cover_bits, origin)


def instance_is_feasible(inst: CoverInstance) -> bool:
    hit = 0
    for b in inst.cover_bits:
        hit |= b
    full = (1 << inst.n_targets) - 1
    return hit == full


# -- exact minimum cover ----------------------------------------------------


@dataclass
class CoverSolve:
    size: int | None  # None when not solved exactly
    witness: list[int] | None  # candidate positions
    lower: int
    upper: int | float
    exact: bool
    engine: str


def greedy_cover(inst: CoverInstance) -> list[int] | None:
    full = (1 << inst.n_targets) - 1
    covered = 0
    chosen = []
    while covered != full:
        best, best_gain = -1, 0
        for j, b in enumerate(inst.cover_bits):
            gain = (b & ~covered).bit_count()
            if gain > best_gain:
                best, best_gain = j, gain
        if best < 0:
            return None
        chosen.append(best)
        covered |= inst.cover_bits[best]
    return chosen


def counting_lower_bound(inst: CoverInstance, uncovered: int, chosen_count: int) -> int:
    """Standard counting bound: how many candidates, greedily by raw coverage
    of the remaining targets, are needed just by cardinality."""
    remaining = uncovered.bit_count()
    if remaining == 0:
        return chosen_count
    gains = sorted(
        ((b & uncovered).bit_count() for b in inst.cover_bits), reverse=True
    )
    total, k = 0, 0
    for g in gains:
        if g == 0:
            break
        total += g
        k += 1
        if total >= remaining:
            return chosen_count + k
    return chosen_count + len(gains) + 1  # infeasible remainder


def order_sum_lower_bound(inst: CoverInstance) -> int:
    """Minimal-index style bound: a cover's member orders must sum past the
    number of elements to cover (members share at least the identity)."""
    G = inst.group
    if inst.origin == "full-group":
        needed = G.order
    else:
        # the cover must contain the union of the target cyclic subgroups
        T = G.table()
        orders = G.order_array()
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        for t in inst.universe:
            cur = int(t)
            mask[cur] = True
            for _ in range(int(orders[t]) - 2):
                cur = int(T[cur, t])
                mask[cur] = True
        needed = int(mask.sum())
    sizes = sorted((c.order for c in inst.candidates), reverse=True)
    total, k = 0, 0
    for s in sizes:
        total += s
        k += 1
        if total - (k - 1) >= needed:
            return k
    return len(sizes) + 1


def _bnb_exact(
    inst: CoverInstance, ub_hint: int | None, deadline: float | None
) -> CoverSolve:
    """Deterministic branch and bound: branch on the least-covered uncovered
    target, candidates tried by descending fresh coverage then position."""
    full = (1 << inst.n_targets) - 1
    m = len(inst.cover_bits)
    target_candidates: list[list[int]] = [[] for _ in range(inst.n_targets)]
    for j, b in enumerate(inst.cover_bits):
        bb = b
        while bb:
            low = bb & -bb
            target_candidates[low.bit_length() - 1].append(j)
            bb ^= low
    if any(not tc for tc in target_candidates):
        raise InfeasibleCover("some target is hit by no candidate")

    best_witness = greedy_cover(inst)
    best = len(best_witness) if best_witness is not None else m + 1
    if ub_hint is not None and ub_hint < best:
        best = ub_hint + 0  # witness of that size to be found by search
    root_lb = max(
        counting_lower_bound(inst, full, 0),
        order_sum_lower_bound(inst) if inst.origin == "full-group" else 0,
    )
    timed_out = False

    def recurse(uncovered: int, chosen: list[int], acc_lb_ok: bool) -> None:
        nonlocal best, best_witness, timed_out
        if timed_out or (deadline is not None and time.monotonic() > deadline):
            timed_out = True
            return
        if uncovered == 0:
            if len(chosen) < best:
                best = len(chosen)
                best_witness = list(chosen)
            return
        if len(chosen) + 1 >= best:
            return
        if counting_lower_bound(inst, uncovered, len(chosen)) >= best:
            return
        # least-covered target
        pick, pick_deg = -1, m + 1
        bb = uncovered
        while bb:
            low = bb & -bb
            t = low.bit_length() - 1
            deg = sum(1 for j in target_candidates[t] if inst.cover_bits[j] & uncovered & (1 << t))
            if deg < pick_deg:
                pick, pick_deg = t, deg
            bb ^= low
        cands = sorted(
            (j for j in target_candidates[pick]),
            key=lambda j: (-(inst.cover_bits[j] & uncovered).bit_count(), j),
        )
        for j in cands:
            chosen.append(j)
            recurse(uncovered & ~inst.cover_bits[j], chosen, acc_lb_ok)
            chosen.pop()
            if timed_out:
                return

    recurse(full, [], True)
    if timed_out:
        ub = best if best_witness is not None else inf
        return CoverSolve(None, None, root_lb, ub, False, "bnb")
    return CoverSolve(best, best_witness, best, best, True, "bnb")


def _milp_exact(
    inst: CoverInstance, time_budget: float | None
) -> CoverSolve:
    m = len(inst.cover_bits)
    rows, cols = [], []
    for j, b in enumerate(inst.cover_bits):
        bb = b
        while bb:
            low = bb & -bb
            rows.append(low.bit_length() - 1)
            cols.append(j)
            bb ^= low
    A = csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(inst.n_targets, m)
    )
    options = {"time_limit": time_budget} if time_budget else {}
    res = milp(
        c=np.ones(m),
        constraints=LinearConstraint(A, lb=1),
        integrality=np.ones(m),
        bounds=Bounds(0, 1),
        options=options,
    )
    if res.status == 0:
        witness = sorted(int(j) for j in np.flatnonzero(res.x > 0.5))
        size = int(round(res.fun))
        return CoverSolve(size, witness, size, size, True, "milp")
    lower = 0
    if getattr(res, "mip_dual_bound", None) is not None:
        lower = int(np.ceil(res.mip_dual_bound - 1e-9))
    upper: int | float = inf
    witness = None
    if res.x is not None and res.fun is not None:
        sel = sorted(int(j) for j in np.flatnonzero(res.x > 0.5))
        covered = 0
        for j in sel:
            covered |= inst.cover_bits[j]
        if covered == (1 << inst.n_targets) - 1:
            upper = len(sel)
            witness = sel
    return CoverSolve(None, witness, lower, upper, False, "milp")


def exact_min_cover(
    inst: CoverInstance,
    lb_hint: int = 0,
    ub_hint: int | None = None,
    time_budget: float | None = None,
    engine: str = "auto",
) -> CoverSolve:
    """Exact minimum cover with deterministic witness; on budget exhaustion
    returns the best (lower, upper) interval flagged non-exact."""
    if not instance_is_feasible(inst):
        raise InfeasibleCover("universe not covered by the candidates")
    if inst.n_targets == 0:
        return CoverSolve(0, [], 0, 0, True, "trivial")
    if engine == "auto":
        engine = "milp" if (_HAVE_MILP and len(inst.cover_bits) > 12) else "bnb"
    if engine == "milp" and not _HAVE_MILP:
        engine = "bnb"
    if engine == "milp":
        solve = _milp_exact(inst, time_budget)
    else:
        deadline = time.monotonic() + time_budget if time_budget else None
        solve = _bnb_exact(inst, ub_hint, deadline)
    root_lb = max(
        lb_hint,
        counting_lower_bound(inst, (1 << inst.n_targets) - 1, 0),
        order_sum_lower_bound(inst) if inst.origin == "full-group" else 0,
    )
    if solve.exact:
        return solve
    lower = max(solve.lower, root_lb)
    upper = solve.upper
    if upper is inf:
        g = greedy_cover(inst)
        if g is not None:
            upper = len(g)
    return CoverSolve(None, solve.witness, lower, upper, False, solve.engine)


def brute_force_min_cover(inst: CoverInstance) -> tuple[int, list[int]]:
    """Oracle-grade exhaustive search over candidate subsets by size; only for
    small instances (<= ~20 candidates)."""
    from itertools import combinations

    m = len(inst.cover_bits)
    full = (1 << inst.n_targets) - 1
    for k in range(0, m + 1):
        for combo in combinations(range(m), k):
            covered = 0
            for j in combo:
                covered |= inst.cover_bits[j]
            if covered == full:
                return k, list(combo)
    raise InfeasibleCover("no subset covers the universe")


# -- sigma pipeline ---------------------------------------------------------


@dataclass
class SigmaResult:
    group_name: str
    value: int | float | None  # int, INFINITY, or None for bounds-only
    lower: int | float
    upper: int | float
    witness: list[SubgroupRef] | None
    method: str
    timings: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.value is not None

    def json_dict(self) -> dict:
        def enc(v):
            if v == INFINITY:
                return "infinity"
            return v

        out: dict = {"group": self.group_name}
        if self.value is not None:
            out["sigma"] = enc(self.value)
        else:
            out["interval"] = [enc(self.lower), enc(self.upper)]
        out["method"] = self.method
        out["witness"] = (
            [w.words() for w in self.witness] if self.witness is not None else None
        )
        out["timings"] = self.timings
        return out


def _subgroup_as_group(G: Group, ref: SubgroupRef, name: str) -> Group:
    els = G.elements
    gens = [els[i] for i in ref.gens]
    sub = Group(G.degree, gens, name=name)
    sub._order = ref.order
    sub.enumerate_elements()
    return sub


def _quotient(G: Group, ref: SubgroupRef):
    hom = coset_action(G, ref.mask(), name=f"{G.name}/N{ref.order}")
    return hom


def _lift_witness(G: Group, hom, quotient_witness: list[SubgroupRef]) -> list[SubgroupRef]:
    """Preimages in G of a cover of the quotient."""
    emap = hom.element_map()
    out = []
    for w in quotient_witness:
        qmask = w.mask()
        pre_mask = qmask[emap]
        bits = mask_to_bits(pre_mask)
        out.append(SubgroupRef(G, bits, generating_indices(G, bits)))
    return out


def _coprime_split(G: Group) -> tuple[SubgroupRef, SubgroupRef] | None:
    """Find G = A x B with A the product of the normal Sylow subgroups and B a
    normal complement of coprime order; None when no such split exists."""
    n = G.order
    primes = prime_factors(n)
    if len(primes) < 2:
        return None
    normal_sylow_gens: list[int] = []
    normal_part = 1
    for p in primes:
        s = sylow(G, p)
        if bool(np.all(G.normalizer_mask(s.mask(), s.gens))):
            normal_sylow_gens.extend(s.gens)
            normal_part *= s.order
    if normal_part in (1, n):
        return None
    mask = G.closure_mask(normal_sylow_gens)
    abits = mask_to_bits(mask)
    A = SubgroupRef(G, abits, generating_indices(G, abits))
    assert A.order == normal_part
    want = n // normal_part
    for cand in normal_subgroups(G):
        if cand.order == want and (cand.bits & A.bits) == 1:
            return A, cand
    return None


def _product_with_factor_bits(G: Group, w_bits: int, other_bits: int) -> int:
    """Bitset of the product set W * O inside G (both given by bitsets)."""
    T = G.table()
    widx = np.flatnonzero(bits_to_mask(w_bits, G.order))
    oidx = np.flatnonzero(bits_to_mask(other_bits, G.order))
    mask = np.zeros(G.order, dtype=bool)
    for w in widx:
        mask[T[int(w), oidx]] = True
    return mask_to_bits(mask)


def sigma(
    G: Group,
    time_budget: float | None = None,
    disable: tuple[str, ...] = (),
    _depth: int = 0,
) -> SigmaResult:
    """sigma(G) through the reduction pipeline; see module docstring."""
    t_start = time.monotonic()
    budget = time_budget if time_budget is not None else config.solve_budget()
    timings: dict = {}

    if G.order == 1 or is_cyclic(G):
        return SigmaResult(G.name, INFINITY, INFINITY, INFINITY, None, "cyclic")

    # (1) Frattini reduction
    if "frattini" not in disable:
        try:
            phi = frattini(G)
        except LatticeCapExceeded:
            phi = None
        if phi is not None and phi.order > 1:
            hom = _quotient(G, phi)
            inner = sigma(hom.target, time_budget=budget, disable=disable, _depth=_depth + 1)
            witness = (
                _lift_witness(G, hom, inner.witness) if inner.witness is not None else None
            )
            return SigmaResult(
                G.name,
                inner.value,
                inner.lower,
                inner.upper,
                witness,
                f"frattini-then:{inner.method}",
                {"frattini_order": phi.order, **inner.timings},
            )

    # (2) coprime direct split
    if "coprime" not in disable:
        split = _coprime_split(G)
        if split is not None:
            Aref, Bref = split
            Agrp = _subgroup_as_group(G, Aref, f"{G.name}_A{Aref.order}")
            Bgrp = _subgroup_as_group(G, Bref, f"{G.name}_B{Bref.order}")
            ra = sigma(Agrp, time_budget=budget, disable=disable, _depth=_depth + 1)
            rb = sigma(Bgrp, time_budget=budget, disable=disable, _depth=_depth + 1)
            pick, pick_ref, other_ref = (
                (ra, Aref, Bref) if ra.upper <= rb.upper else (rb, Bref, Aref)
            )
            witness = None
            if pick.witness is not None:
                witness = []
                sub_to_G = {  # map factor-element index -> G element index
                    i: G.element_index(p)
                    for i, p in enumerate(
                        _subgroup_as_group(G, pick_ref, "tmp").elements
                    )
                }
                for w in pick.witness:
                    w_bits_G = 0
                    for i in np.flatnonzero(w.mask()):
                        w_bits_G |= 1 << sub_to_G[int(i)]
                    bits = _product_with_factor_bits(G, w_bits_G, other_ref.bits)
                    witness.append(SubgroupRef(G, bits, generating_indices(G, bits)))
            value = min(ra.value, rb.value) if (ra.exact and rb.exact) else None
            lower = min(ra.lower, rb.lower)
            upper = min(ra.upper, rb.upper)
            return SigmaResult(
                G.name, value, lower, upper, witness, "coprime-split", timings
            )

    solvable = is_solvable(G)

    # (3) nilpotent formula
    if solvable and "nilpotent" not in disable and is_nilpotent(G):
        p_pick = None
        for p in sorted(prime_factors(G.order)):
            s = sylow(G, p)
            orders = G.order_array()
            syl_cyclic = any(int(orders[i]) == s.order for i in s.indices())
            if not syl_cyclic:
                p_pick = p
                break
        assert p_pick is not None, "non-cyclic nilpotent group with all Sylows cyclic"
        value = p_pick + 1
        witness = None
        method = "nilpotent"
        if G.order <= config.lattice_cap():
            inst = build_cover_instance(G)
            solve = exact_min_cover(inst, time_budget=budget)
            if solve.exact:
                assert solve.size == value, (
                    f"nilpotent formula {value} != exact cover {solve.size} on {G.name}"
                )
                witness = [inst.candidates[j] for j in solve.witness]
        return SigmaResult(G.name, value, value, value, witness, method, timings)

    # (4) solvable: Tomkinson q+1
    if solvable and "tomkinson" not in disable:
        reports = chief_factors_with_complements(G)
        flagged = [r for r in reports if r.multiple_complements]
        if not flagged:
            raise TomkinsonAssumptionError(
                f"{G.name}: non-cyclic solvable group with no chief factor having "
                "more than one complement; covering theorem assumption violated"
            )
        q = min(r.order for r in flagged)
        value = q + 1
        witness = None
        if G.order <= config.lattice_cap():
            inst = build_cover_instance(G)
            solve = exact_min_cover(inst, time_budget=budget)
            if solve.exact:
                assert solve.size == value, (
                    f"Tomkinson value {value} != exact cover {solve.size} on {G.name}"
                )
                witness = [inst.candidates[j] for j in solve.witness]
        return SigmaResult(G.name, value, value, value, witness, "tomkinson", timings)

    # (5) exact set cover over maximal subgroups
    t0 = time.monotonic()
    inst = build_cover_instance(G)
    timings["instance_s"] = round(time.monotonic() - t0, 3)
    t0 = time.monotonic()
    solve = exact_min_cover(inst, time_budget=budget)
    timings["solve_s"] = round(time.monotonic() - t0, 3)
    timings["total_s"] = round(time.monotonic() - t_start, 3)
    if solve.exact:
        witness = [inst.candidates[j] for j in solve.witness]
        from .certificates import verify_cover

        check = verify_cover(G, witness)
        assert check.ok, f"solver witness failed cover verification on {G.name}"
        return SigmaResult(
            G.name, solve.size, solve.size, solve.size, witness, "exact-cover", timings
        )
    return SigmaResult(
        G.name, None, max(solve.lower, 3), solve.upper, None, "bounds-only", timings
    )


# -- sigma over cosets (sigma_Omega, sigma_star) ------------------------------


def supplements_of(X: Group, N: SubgroupRef) -> list[SubgroupRef]:
    """Proper subgroups H with HN = X (every proper subgroup when N = X)."""
    subs = all_subgroups(X)
    out = []
    for H in subs:
        if H.order == X.order:
            continue
        inter = (H.bits & N.bits).bit_count()
        if H.order * N.order == X.order * inter:
            out.append(H)
    return out


def smallest_supplement_index(X: Group, N: SubgroupRef) -> int:
    sups = supplements_of(X, N)
    if not sups:
        raise ValueError("no proper supplement exists")
    return X.order // max(s.order for s in sups)


def _validate_primitive_monolithic(X: Group, N: SubgroupRef) -> None:
    if not is_monolithic(X):
        raise ValueError(f"{X.name} is not monolithic")
    mins = minimal_normal_subgroups(X)
    if mins[0].bits != N.bits:
        raise ValueError("N is not the unique minimal normal subgroup")
    if not is_primitive(X):
        raise ValueError(f"{X.name} is not primitive")


def coset_mask(X: Group, N: SubgroupRef, rep: int) -> np.ndarray:
    T = X.table()
    mask = np.zeros(X.order, dtype=bool)
    mask[T[N.indices(), int(rep)]] = True
    return mask


def sigma_omega(
    X: Group,
    N: SubgroupRef,
    omega_reps,
    time_budget: float | None = None,
    validate: bool = True,
) -> int | float:
    """Minimum number of supplements of N covering the union of the cosets
    N*rep; INFINITY when no supplement family covers it."""
    if validate:
        _validate_primitive_monolithic(X, N)
    mask = np.zeros(X.order, dtype=bool)
    for rep in omega_reps:
        mask |= coset_mask(X, N, int(rep))
    sups = supplements_of(X, N)
    inst = build_cover_instance(X, restrict=mask, candidates=sups)
    inst = CoverInstance(X, inst.universe, inst.candidates, inst.cover_bits, "coset-restricted")
    if not instance_is_feasible(inst):
        return INFINITY
    solve = exact_min_cover(inst, time_budget=time_budget)
    if not solve.exact:
        raise CapExceeded("sigma_omega solve exceeded its budget")
    return solve.size


def minimal_generating_coset_subsets(X: Group, N: SubgroupRef) -> list[list[int]]:
    """Inclusion-minimal subsets of cosets of N whose union generates X,
    each given by representative element indices. Requires |X/N| within the
    coset-subset cap."""
    from itertools import combinations

    hom = _quotient(X, N)
    Q = hom.target
    if Q.order > config.coset_subset_cap():
        raise CapExceeded(
            f"|X/N| = {Q.order} exceeds the coset-subset cap "
            f"{config.coset_subset_cap()}"
        )
    emap = hom.element_map()
    reps: dict[int, int] = {}
    for i in range(X.order):
        q = int(emap[i])
        if q not in reps:
            reps[q] = i
    q_ids = sorted(reps)
    minimal: list[set[int]] = []
    out: list[list[int]] = []
    for k in range(1, Q.order + 1):
        for combo in combinations(q_ids, k):
            s = set(combo)
            if any(m <= s for m in minimal):
                continue
            gmask = Q.closure_mask([c for c in combo])
            if int(gmask.sum()) == Q.order:
                minimal.append(s)
                out.append([reps[c] for c in combo])
    return out


def sigma_star(
    X: Group, N: SubgroupRef, time_budget: float | None = None
) -> tuple[int | float, list[int] | None]:
    """min sigma_Omega over unions of cosets generating X; returns the value
    and the witnessing coset representatives."""
    _validate_primitive_monolithic(X, N)
    best: int | float = INFINITY
    best_omega = None
    for omega in minimal_generating_coset_subsets(X, N):
        val = sigma_omega(X, N, omega, time_budget=time_budget, validate=False)
        if val < best:
            best = val
            best_omega = omega
    return best, best_omega


def spancoprime_closure(X: Group, N: SubgroupRef, covered_reps) -> list[int]:
    """Close a set of cosets (given by representatives) under the rule: once
    the coset of y is covered, so is the coset of y^a for every a coprime to
    the order of y. Returns one representative per covered coset."""
    hom = _quotient(X, N)
    emap = hom.element_map()
    orders = X.order_array()
    covered_q: set[int] = {int(emap[int(r)]) for r in covered_reps}
    changed = True
    while changed:
        changed = False
        current = set(covered_q)
        for y in range(X.order):
            if int(emap[y]) not in current:
                continue
            oy = int(orders[y])
            cur = y
            for a in range(2, oy):
                cur = int(X.table()[cur, y])
                if np.gcd(a, oy) == 1:
                    q = int(emap[cur])
                    if q not in covered_q:
                        covered_q.add(q)
                        changed = True
    reps: dict[int, int] = {}
    for i in range(X.order):
        q = int(emap[i])
        if q in covered_q and q not in reps:
            reps[q] = i
    return sorted(reps.values())


# -- bound checks ------------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    ok: bool
    detail: str


def bound_checks(
    G: Group,
    result: SigmaResult,
    normals: str = "minimal",
    time_budget: float | None = None,
) -> list[BoundCheck]:
    """Post-hoc checks from the covering-number inequalities; raises
    BoundViolation on any failure."""
    checks: list[BoundCheck] = []

    if result.witness is not None and result.exact and result.value != INFINITY:
        min_index = min(G.order // w.order for w in result.witness)
        ok = min_index < result.value
        checks.append(
            BoundCheck("minimal-index", ok, f"min index {min_index} < sigma {result.value}")
        )

    if G.order > 1:
        pool = (
            minimal_normal_subgroups(G)
            if normals == "minimal"
            else [s for s in normal_subgroups(G) if 0 < s.order < G.order or s.order == G.order]
        )
        for N in pool:
            if N.order == 1:
                continue
            if N.order == G.order:
                quotient_sigma = INFINITY  # trivial quotient is cyclic
            else:
                hom = _quotient(G, N)
                quotient_sigma = sigma(hom.target, time_budget=time_budget).upper
            ok = result.upper <= quotient_sigma or quotient_sigma == INFINITY
            checks.append(
                BoundCheck(
                    "quotient-monotone",
                    bool(ok),
                    f"sigma <= sigma(G/N) for |N| = {N.order}: "
                    f"{result.upper} <= {quotient_sigma}",
                )
            )

    try:
        abelian_normals = [
            s
            for s in normal_subgroups(G)
            if 1 < s.order < G.order and _bits_abelian(G, s)
        ]
        if abelian_normals and G.order <= config.lattice_cap():
            zbits = mask_to_bits(G.center_mask())
            subs = all_subgroups(G)
            for V in abelian_normals:
                if (V.bits & zbits) != 1:
                    continue
                want = G.order // V.order
                complemented = any(
                    s.order == want and (s.bits & V.bits) == 1 for s in subs
                )
                if complemented:
                    bound = 2 * V.order - 1
                    ok = result.lower <= bound
                    checks.append(
                        BoundCheck(
                            "abelian-complemented-normal",
                            bool(ok),
                            f"sigma <= 2|V|-1 = {bound} for |V| = {V.order}",
                        )
                    )
    except LatticeCapExceeded:
        pass

    bad = [c for c in checks if not c.ok]
    if bad:
        raise BoundViolation("; ".join(f"{c.name}: {c.detail}" for c in bad))
    return checks


def _bits_abelian(G: Group, ref: SubgroupRef) -> bool:
    T = G.table()
    idx = ref.indices()
    sub = T[np.ix_(idx, idx)]
    return bool(np.array_equal(sub, sub.T))


__all__ = [
    "BoundCheck",
    "BoundViolation",
    "CoverInstance",
    "CoverSolve",
    "INFINITY",
    "InfeasibleCover",
    "SigmaResult",
    "TomkinsonAssumptionError",
    "brute_force_min_cover",
    "build_cover_instance",
    "bound_checks",
    "counting_lower_bound",
    "exact_min_cover",
    "greedy_cover",
    "instance_is_feasible",
    "maximal_cyclic_generators",
    "minimal_generating_coset_subsets",
    "order_sum_lower_bound",
    "sigma",
    "sigma_omega",
    "sigma_star",
    "smallest_supplement_index",
    "spancoprime_closure",
    "supplements_of",
]
