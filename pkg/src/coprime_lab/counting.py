"""Exact counting of constrained tuples in boxes.

Three counting routes, all integer-exact:

* brute force (``count_box_bruteforce``) — enumeration with numpy-vectorized
  inner dimensions; the oracle everything else is checked against;
* Möbius inclusion-exclusion (``count_mobius`` / ``count_mutual_mobius``) —
  one squarefree summation variable d_S per constrained coordinate subset S
  (the full index set for mutual, all pairs for pairwise, all k-subsets for
  k-wise).  Since membership in each class is exactly "gcd(x_S) = 1 for every
  such S", expanding each indicator as sum_{d | gcd} mu(d) gives

      count = sum over assignments (d_S) of prod_S mu(d_S) * prod_i N_i(L_i),

  where L_i = lcm of the d_S over subsets containing coordinate i and N_i(L)
  counts the x <= B_i divisible by L that satisfy coordinate i's side
  condition.  Assignments are enumerated depth-first with the last subset
  vectorized; the identity is certified against brute force in the tests.
* the recursive pairwise counter (``count_toth``) — peels one coordinate per
  level, memoizing on the radical of the accumulated coprimality modulus.

Also here: divisibility-pattern counts and the gcd/lcm weighted sums.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm, prod

import numpy as np

from . import arith
from .constraints import (
    METHOD_BRUTEFORCE,
    METHOD_MOBIUS,
    METHOD_PREFIX_GRID,
    METHOD_TOTH,
    Box,
    CoprimeTo,
    CountResult,
    DivisibleBy,
    Residue,
    TupleConstraint,
)
from .errors import CapacityError, UnsupportedError

BRUTE_VOLUME_CAP = 25_000_000_000
GENERIC_PREFIX_CAP = 20_000_000
ENGINE_MAX_SUBSETS = 128


def worker_count() -> int:
    """Thread cap: COPRIME_LAB_THREADS if set, else available parallelism."""
    env = os.environ.get("COPRIME_LAB_THREADS")
    if env is not None:
        try:
            v = int(env)
        except ValueError as exc:
            raise ValueError(f"COPRIME_LAB_THREADS must be an integer, got {env!r}") from exc
        if v < 1:
            raise ValueError(f"COPRIME_LAB_THREADS must be >= 1, got {v}")
        return v
    return os.cpu_count() or 1


@lru_cache(maxsize=3)
def shared_tables(limit: int) -> arith.ArithTables:
    """Sieve tables rounded up to a power of two, shared across counters."""
    size = 2048
    while size < limit:
        size *= 2
    return arith.build_tables(size)


# ---------------------------------------------------------------------------
# membership


def member(x: tuple[int, ...], constraint: TupleConstraint) -> bool:
    """Does the tuple satisfy the class condition and all side conditions?

    The k-wise test uses the prime-multiplicity characterization (each prime
    may divide at most k-1 coordinates), which costs one factorization per
    coordinate instead of C(r,k) gcds.
    """
    if len(x) != constraint.r:
        raise ValueError(f"expected {constraint.r} coordinates, got {len(x)}")
    if any(v < 1 for v in x):
        raise ValueError(f"coordinates must be positive, got {x}")
    for v, side in zip(x, constraint.effective_sides()):
        if side is not None and not side.admits(v):
            return False
    if constraint.kind == "mutual":
        g = 0
        for v in x:
            g = gcd(g, v)
        return g == 1
    if constraint.kind == "pairwise":
        return all(
            gcd(x[i], x[j]) == 1 for i in range(len(x)) for j in range(i + 1, len(x))
        )
    k = constraint.k
    counts: dict[int, int] = {}
    for v in x:
        for p, _ in arith.factor_small(v):
            counts[p] = counts.get(p, 0) + 1
            if counts[p] > k - 1:
                return False
    return True


def member_bulk(cols: list[np.ndarray], constraint: TupleConstraint) -> np.ndarray:
    """Vectorized membership over column arrays (one array per coordinate).

    Evaluates the subset-gcd form of the class condition (equivalent to
    `member`, which the tests pin down) so batches stay in numpy.
    """
    mask = np.ones(len(cols[0]), dtype=bool)
    for col, side in zip(cols, constraint.effective_sides()):
        if side is None:
            continue
        if isinstance(side, CoprimeTo):
            mask &= np.gcd(col, side.modulus) == 1
        elif isinstance(side, DivisibleBy):
            mask &= col % side.modulus == 0
        else:
            mask &= col % side.modulus == side.residue
    for subset in constraint.subsets():
        g = cols[subset[0]]
        for i in subset[1:]:
            g = np.gcd(g, cols[i])
        mask &= g == 1
    return mask


# ---------------------------------------------------------------------------
# side-condition coordinate counters: N(L) = #{x <= B : L | x, side holds}


class _SideCounter:
    """Counts multiples of L in [1, B] that satisfy one side condition."""

    def __init__(self, bound: int, side) -> None:
        self.bound = bound
        self.side = side
        if isinstance(side, CoprimeTo):
            self._sq = arith.squarefree_divisors_signed(side.modulus)
        elif isinstance(side, Residue):
            # modular inverse table per divisor of the modulus
            self._inv: dict[int, np.ndarray] = {}
            a = side.modulus
            divs = [d for d in range(1, a + 1) if a % d == 0]
            for v in divs:
                tab = np.zeros(v, dtype=np.int64)
                for x in range(v):
                    if gcd(x, v) == 1:
                        tab[x] = pow(x, -1, v)
                self._inv[v] = tab
            self._divs = divs

    def vec(self, L: np.ndarray) -> np.ndarray:
        B = self.bound
        L = np.asarray(L, dtype=np.int64)
        side = self.side
        if side is None:
            return B // L
        if isinstance(side, DivisibleBy):
            a = side.modulus
            M = L // np.gcd(L, a) * a
            return B // M
        if isinstance(side, CoprimeTo):
            c = side.modulus
            ok = np.gcd(L, c) == 1
            out = np.zeros(len(L), dtype=np.int64)
            for e, s in self._sq:
                out += s * (B // (L * e))
            out[~ok] = 0
            return out
        # Residue: x ≡ 0 (mod L) and x ≡ b (mod a); solvable iff gcd(L,a) | b,
        # one class mod lcm(L,a) with representative L*y, y = (b/g)·(L/g)^-1 mod a/g.
        a, b = side.modulus, side.residue
        g = np.gcd(L, a)
        ok = (b % g) == 0
        a2 = a // g
        L2 = (L // g) % a2
        y = np.zeros(len(L), dtype=np.int64)
        for v in self._divs:
            sel = a2 == v
            if v > 1 and sel.any():
                y[sel] = ((b // g[sel]) * self._inv[v][L2[sel]]) % v
        M = L * a2
        c = L * y
        cnt = np.where(c == 0, B // M, np.where(c <= B, (B - c) // M + 1, 0))
        return np.where(ok, cnt, 0)

    def scalar(self, L: int) -> int:
        return int(self.vec(np.array([L], dtype=np.int64))[0])


def _allowed_values(bound: int, side) -> np.ndarray:
    """All admissible coordinate values in [1, bound] as an int64 array."""
    v = np.arange(1, bound + 1, dtype=np.int64)
    if side is None:
        return v
    if isinstance(side, CoprimeTo):
        return v[np.gcd(v, side.modulus) == 1]
    if isinstance(side, DivisibleBy):
        return v[v % side.modulus == 0]
    return v[v % side.modulus == side.residue]


# ---------------------------------------------------------------------------
# brute force


def count_box_bruteforce(box: Box, constraint: TupleConstraint) -> CountResult:
    """Exact count by enumeration; the oracle for every other method.

    Specialized vectorized paths cover r in {2,3,4}; others fall back to a
    prefix enumeration with a vectorized last coordinate.  Volume capped at
    2.5e10.
    """
    if box.r != constraint.r:
        raise ValueError(f"box is {box.r}-dimensional, constraint wants {constraint.r}")
    if box.volume() > BRUTE_VOLUME_CAP:
        raise CapacityError(
            f"box volume {box.volume()} exceeds the brute-force cap {BRUTE_VOLUME_CAP}"
        )
    vals = [
        _allowed_values(b, side)
        for b, side in zip(box.bounds, constraint.effective_sides())
    ]
    if any(len(v) == 0 for v in vals):
        count = 0
    else:
        r, k = constraint.r, constraint.effective_k
        if r == 2:
            count = _brute_2d(vals)
        elif r == 3 and k == 2:
            count = _brute_pc3(vals)
        elif r == 3 and k == 3:
            count = _brute_c3(vals)
        elif r == 4 and k == 2:
            count = _brute_pc4(vals)
        elif r == 4 and k == 3:
            count = _brute_k34(vals)
        elif r == 4 and k == 4:
            count = _brute_c4(vals)
        else:
            count = _brute_generic(vals, constraint.subsets())
    return CountResult(count=count, constraint=constraint, box=box, method=METHOD_BRUTEFORCE)


def _brute_2d(vals) -> int:
    v1, v2 = vals
    total = 0
    step = max(1, (1 << 22) // max(1, len(v2)))
    for i in range(0, len(v1), step):
        total += int(np.count_nonzero(np.gcd.outer(v1[i : i + step], v2) == 1))
    return total


def _thread_map_sum(fn, items) -> int:
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return sum(fn(it) for it in items)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(fn, items))


def _brute_pc3(vals) -> int:
    # sum over x2 of (# coprime x1)(# coprime x3) restricted to coprime (x1,x3):
    # with 0/1 matrices A=coprime(v1,v2), B=coprime(v2,v3), C=coprime(v1,v3),
    # count = sum(C * (A @ B)).  Entries stay <= len(v2) < 2^24, exact in f32.
    v1, v2, v3 = vals
    A = (np.gcd.outer(v1, v2) == 1).astype(np.float32)
    B = (np.gcd.outer(v2, v3) == 1).astype(np.float32)
    C = (np.gcd.outer(v1, v3) == 1).astype(np.float32)
    return int(round(float(np.sum((A @ B) * C, dtype=np.float64))))


def _brute_c3(vals) -> int:
    v1, v2, v3 = vals

    def chunk(x1: int) -> int:
        g12 = np.gcd(int(x1), v2)
        sub = 0
        ones = np.count_nonzero(g12 == 1) * len(v3)
        rest = g12[g12 > 1]
        if len(rest):
            sub = int(np.count_nonzero(np.gcd.outer(rest, v3) == 1))
        return ones + sub

    return _thread_map_sum(chunk, [int(x) for x in v1])


def _brute_pc4(vals) -> int:
    v1, v2, v3, v4 = vals
    A23 = (np.gcd.outer(v2, v3) == 1).astype(np.float32)
    A24 = (np.gcd.outer(v2, v4) == 1).astype(np.float32)
    A34 = (np.gcd.outer(v3, v4) == 1).astype(np.float32)

    def per_x1(x1: int) -> int:
        t2 = (np.gcd(x1, v2) == 1).astype(np.float32)
        t3 = (np.gcd(x1, v3) == 1).astype(np.float32)
        t4 = (np.gcd(x1, v4) == 1).astype(np.float32)
        P = (A23 * t2[:, None]).T @ A24  # P[x3, x4] = # admissible x2
        total = np.sum(P * A34 * t3[:, None] * t4[None, :], dtype=np.float64)
        return int(round(float(total)))

    return _thread_map_sum(per_x1, [int(x) for x in v1])


def _brute_k34(vals) -> int:
    # every 3 of 4 coordinates must have gcd 1
    v1, v2, v3, v4 = vals
    G23 = np.gcd.outer(v2, v3)
    T = np.gcd(G23[:, :, None], v4[None, None, :]) == 1  # triple (2,3,4)

    def per_x1(x1: int) -> int:
        g2 = np.gcd(x1, v2)
        g3 = np.gcd(x1, v3)
        U = np.gcd.outer(g2, v3) == 1  # triple (1,2,3)
        V = np.gcd.outer(g2, v4) == 1  # triple (1,2,4)
        W = np.gcd.outer(g3, v4) == 1  # triple (1,3,4)
        E = U[:, :, None] & V[:, None, :]
        E &= W[None, :, :]
        E &= T
        return int(np.count_nonzero(E))

    return _thread_map_sum(per_x1, [int(x) for x in v1])


def _brute_c4(vals) -> int:
    v1, v2, v3, v4 = vals

    def per_x1(x1: int) -> int:
        g12 = np.gcd(x1, v2)
        total = int(np.count_nonzero(g12 == 1)) * len(v3) * len(v4)
        for g in g12[g12 > 1]:
            g13 = np.gcd(int(g), v3)
            total += int(np.count_nonzero(g13 == 1)) * len(v4)
            rest = g13[g13 > 1]
            if len(rest):
                total += int(np.count_nonzero(np.gcd.outer(rest, v4) == 1))
        return total

    return _thread_map_sum(per_x1, [int(x) for x in v1])


def _brute_generic(vals, subsets) -> int:
    r = len(vals)
    prefix_volume = prod(len(v) for v in vals[: r - 1])
    if prefix_volume > GENERIC_PREFIX_CAP:
        raise CapacityError(
            f"no specialized brute-force path for this shape and the prefix "
            f"enumeration would need {prefix_volume} states"
        )
    last = r - 1
    with_last = [S for S in subsets if last in S]
    closers = {
        d: [S for S in subsets if last not in S and max(S) == d] for d in range(r)
    }
    vlast = vals[last]
    total = 0
    chosen = [0] * (r - 1)

    def rec(depth: int) -> None:
        nonlocal total
        if depth == last:
            mask = np.ones(len(vlast), dtype=bool)
            for S in with_last:
                g = 0
                for i in S:
                    if i != last:
                        g = gcd(g, chosen[i])
                mask &= np.gcd(g, vlast) == 1
            total += int(np.count_nonzero(mask))
            return
        for x in vals[depth]:
            chosen[depth] = int(x)
            ok = True
            for S in closers[depth]:
                g = 0
                for i in S:
                    g = gcd(g, chosen[i])
                if g != 1:
                    ok = False
                    break
            if ok:
                rec(depth + 1)

    rec(0)
    return total


# ---------------------------------------------------------------------------
# the Möbius engine


def _capped_divisors(primes: tuple[int, ...], cap: int) -> list[tuple[int, int]]:
    """All (g, mu(g)) with g a product of the given primes and g <= cap."""
    out = [(1, 1)]
    for p in primes:
        out += [(d * p, -s) for d, s in out if d * p <= cap]
    return out


def _mobius_enumerate(bounds, subsets, tables, emit) -> None:
    """DFS over squarefree assignments (d_S), last subset vectorized.

    ``emit(cols, w)`` receives one chunk: per-coordinate L values (int scalar
    or int64 array) and the int64 weight vector prod mu(d_S); only assignments
    with every L_i <= B_i are produced (any other contributes zero).
    """
    r = len(bounds)
    nmax = max(bounds)
    sq = tables.squarefree_up_to(nmax)
    mu = tables.mobius[sq].astype(np.int64)
    order = list(subsets)
    depth_count = len(order)

    L = [1] * r
    coord_primes: list[tuple[int, ...]] = [()] * r

    def rec(t: int, weight: int) -> None:
        S = order[t]
        base_primes = tuple(sorted({p for i in S for p in coord_primes[i]}))
        cap = max(bounds[i] for i in S)
        leaf = t == depth_count - 1
        for g, mu_g in _capped_divisors(base_primes, cap):
            Lg = [lcm(L[i], g) for i in S]
            F = min(bounds[i] // lg for i, lg in zip(S, Lg))
            if F < 1:
                continue
            pos = int(np.searchsorted(sq, F, side="right"))
            fs = sq[:pos]
            mus = mu[:pos]
            if base_primes:
                base = prod(base_primes)
                keep = np.gcd(fs, base) == 1
                fs = fs[keep]
                mus = mus[keep]
            if len(fs) == 0:
                continue
            if leaf:
                cols: list[object] = list(L)
                for i, lg in zip(S, Lg):
                    cols[i] = lg * fs
                emit(cols, (weight * mu_g) * mus)
            else:
                savedL = [L[i] for i in S]
                savedP = [coord_primes[i] for i in S]
                g_primes = arith.prime_divisors(g) if g > 1 else ()
                for f, mu_f in zip(fs.tolist(), mus.tolist()):
                    f_primes = (
                        tuple(p for p, _ in arith.factorize(int(f), tables))
                        if f > 1
                        else ()
                    )
                    for i, lg in zip(S, Lg):
                        L[i] = lg * f
                        coord_primes[i] = tuple(
                            sorted(set(coord_primes[i]) | set(g_primes) | set(f_primes))
                        )
                    rec(t + 1, weight * mu_g * mu_f)
                    for i, lv, pv in zip(S, savedL, savedP):
                        L[i] = lv
                        coord_primes[i] = pv

    if depth_count == 0:
        emit([1] * r, np.ones(1, dtype=np.int64))
        return
    rec(0, 1)


_ASSIGN_CACHE: OrderedDict[tuple, tuple[np.ndarray, np.ndarray]] = OrderedDict()
_ASSIGN_CACHE_MAX = 2
_CACHE_VOLUME_MIN = 10**9


def _cached_assignments(bounds, subsets, tables) -> tuple[np.ndarray, np.ndarray]:
    """Materialized assignment table (L matrix int32, weights int8) for reuse
    across many side-condition variants on the same box shape."""
    key = (tuple(bounds), tuple(subsets))
    if key in _ASSIGN_CACHE:
        _ASSIGN_CACHE.move_to_end(key)
        return _ASSIGN_CACHE[key]
    cols_chunks: list[np.ndarray] = []
    w_chunks: list[np.ndarray] = []

    def emit(cols, w):
        m = len(w)
        a = np.empty((m, len(cols)), dtype=np.int32)
        for i, c in enumerate(cols):
            a[:, i] = c
        cols_chunks.append(a)
        w_chunks.append(w.astype(np.int8))

    _mobius_enumerate(bounds, subsets, tables, emit)
    A = np.concatenate(cols_chunks) if cols_chunks else np.empty((0, len(bounds)), np.int32)
    W = np.concatenate(w_chunks) if w_chunks else np.empty(0, np.int8)
    _ASSIGN_CACHE[key] = (A, W)
    while len(_ASSIGN_CACHE) > _ASSIGN_CACHE_MAX:
        _ASSIGN_CACHE.popitem(last=False)
    return A, W


def count_mobius(box: Box, constraint: TupleConstraint) -> CountResult:
    """Exact count via subset-variable Möbius inclusion-exclusion.

    Handles every class and side-condition combination; cost grows with the
    number of constrained subsets, so very wide k-wise systems are refused.
    """
    if box.r != constraint.r:
        raise ValueError(f"box is {box.r}-dimensional, constraint wants {constraint.r}")
    subsets = constraint.subsets()
    if len(subsets) > ENGINE_MAX_SUBSETS:
        raise CapacityError(
            f"{len(subsets)} constrained subsets exceed the engine cap "
            f"{ENGINE_MAX_SUBSETS}; use Monte Carlo instead"
        )
    if min(box.bounds) == 0:
        return CountResult(count=0, constraint=constraint, box=box, method=METHOD_MOBIUS)
    tables = shared_tables(max(box.bounds))
    counters = [
        _SideCounter(b, side)
        for b, side in zip(box.bounds, constraint.effective_sides())
    ]

    use_cache = box.volume() >= _CACHE_VOLUME_MIN and len(subsets) >= 3
    if use_cache:
        A, W = _cached_assignments(box.bounds, subsets, tables)
        total = 0
        step = 1 << 22
        for lo in range(0, len(W), step):
            chunk = slice(lo, lo + step)
            acc = W[chunk].astype(np.int64)
            for i, counter in enumerate(counters):
                acc *= counter.vec(A[chunk, i].astype(np.int64))
            total += int(acc.sum())
        return CountResult(count=total, constraint=constraint, box=box, method=METHOD_MOBIUS)

    total = 0

    def emit(cols, w):
        nonlocal total
        acc = w
        for c, counter in zip(cols, counters):
            if isinstance(c, (int, np.integer)):
                n = counter.scalar(int(c))
                if n == 0:
                    return
                acc = acc * n
            else:
                acc = acc * counter.vec(c)
        total += int(acc.sum())

    _mobius_enumerate(box.bounds, subsets, tables, emit)
    return CountResult(count=total, constraint=constraint, box=box, method=METHOD_MOBIUS)


def count_mutual_mobius(box: Box, constraint: TupleConstraint) -> CountResult:
    """The one-variable Möbius counter for the mutual class.

    Accepts DivisibleBy/Residue side conditions; CoprimeTo (and grouping)
    are outside this counter's contract and are refused — the general
    ``count_mobius`` handles them.
    """
    if constraint.kind != "mutual":
        raise UnsupportedError(
            f"count_mutual_mobius requires the mutual class, got {constraint.kind}"
        )
    if constraint.blocks is not None or any(
        isinstance(s, CoprimeTo) for s in constraint.sides
    ):
        raise UnsupportedError(
            "count_mutual_mobius supports DivisibleBy/Residue side conditions only"
        )
    return count_mobius(box, constraint)


def count_box(box: Box, constraint: TupleConstraint, method: str | None = None) -> CountResult:
    """Count with the requested method, or the fastest valid one (Möbius)."""
    if method in (None, "auto", "mobius"):
        return count_mobius(box, constraint)
    if method == "bruteforce":
        return count_box_bruteforce(box, constraint)
    if method == "toth":
        u = _toth_modulus(constraint)
        res = count_toth(box.bounds, u)
        return CountResult(count=res.count, constraint=constraint, box=box, method=METHOD_TOTH)
    if method == "grid":
        from . import discrepancy

        grid = discrepancy.build_grid(box.n, constraint)
        idx = tuple(b for b in box.bounds)
        count = int(grid.cumulative[idx])
        return CountResult(count=count, constraint=constraint, box=box, method=METHOD_PREFIX_GRID)
    raise ValueError(f"unknown counting method {method!r}")


def _toth_modulus(constraint: TupleConstraint) -> int:
    """The uniform coprimality modulus u for the recursive pairwise counter."""
    if constraint.kind != "pairwise":
        raise UnsupportedError("the recursive counter handles the pairwise class only")
    if constraint.blocks is not None:
        if len(constraint.blocks) == 1:
            return constraint.block_moduli[0]
        raise UnsupportedError("the recursive counter needs a single uniform modulus")
    if any(s is not None for s in constraint.sides):
        raise UnsupportedError("the recursive counter supports no per-coordinate sides")
    return 1


# ---------------------------------------------------------------------------
# recursive pairwise counter with radical memoization

_TOTH_MEMO: dict[tuple, int] = {}
_TOTH_MEMO_MAX = 4_000_000
TOTH_BOUND_CAP = 100_000


@lru_cache(maxsize=8)
def _radical_groups(m: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Group 1..m by the sorted tuple of primes dividing the value."""
    tables = shared_tables(m)
    groups: dict[tuple[int, ...], int] = {}
    for t in range(1, m + 1):
        key = tuple(p for p, _ in arith.factorize(t, tables))
        groups[key] = groups.get(key, 0) + 1
    return tuple(sorted(groups.items()))


def _coprime_count(bound: int, primes: tuple[int, ...]) -> int:
    """#{t <= bound : no prime in `primes` divides t}."""
    mask = np.ones(bound + 1, dtype=bool)
    mask[0] = False
    for p in primes:
        if p <= bound:
            mask[p::p] = False
    return int(np.count_nonzero(mask))


def count_toth(bounds: tuple[int, ...], u: int = 1) -> CountResult:
    """Pairwise-coprime tuples in the box, all coordinates coprime to u.

    Recursive: the last coordinate t is peeled off and folded into the
    coprimality modulus, P(bounds, u) = sum over t <= bounds[-1], gcd(t,u)=1
    of P(bounds[:-1], rad(t*u)); values of t are grouped by radical and the
    recursion memoizes on (bounds prefix, radical truncated to usable primes).
    Exact but exponential-ish in r; meant for modest bounds.
    """
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) < 1:
        raise ValueError("bounds must have at least one coordinate")
    if any(b < 0 for b in bounds):
        raise ValueError(f"bounds must be nonnegative, got {bounds}")
    if u < 1:
        raise ValueError(f"u must be >= 1, got {u}")
    if max(bounds, default=0) > TOTH_BOUND_CAP:
        raise CapacityError(
            f"recursive counter capped at bounds <= {TOTH_BOUND_CAP}, got {bounds}"
        )

    u_primes = tuple(p for p, _ in arith.factor_small(u))

    def rec(depth: int, vprimes: tuple[int, ...]) -> int:
        if depth == 0:
            return 1
        nmax_prefix = max(bounds[:depth])
        vkey = tuple(p for p in vprimes if p <= nmax_prefix)
        key = (bounds[:depth], vkey)
        hit = _TOTH_MEMO.get(key)
        if hit is not None:
            return hit
        if depth == 1:
            total = _coprime_count(bounds[0], vkey)
        else:
            n_d = bounds[depth - 1]
            total = 0
            vset = set(vkey)
            for rho, cnt in _radical_groups(n_d):
                if vset.isdisjoint(rho):
                    merged = tuple(sorted(vset | set(rho)))
                    total += cnt * rec(depth - 1, merged)
        if len(_TOTH_MEMO) >= _TOTH_MEMO_MAX:
            raise CapacityError("recursive counter memo budget exceeded")
        _TOTH_MEMO[key] = total
        return total

    count = rec(len(bounds), u_primes) if min(bounds) > 0 else 0

    r = len(bounds)
    n = max(bounds)
    box = Box(bounds=bounds, n=max(n, 1))
    if r >= 2:
        if u == 1:
            constraint = TupleConstraint.pairwise(r)
        else:
            constraint = TupleConstraint.grouped(
                "pairwise", r, (tuple(range(r)),), (u,)
            )
    else:
        constraint = None
    return CountResult(count=count, constraint=constraint, box=box, method=METHOD_TOTH)


# ---------------------------------------------------------------------------
# divisibility patterns


@dataclass(frozen=True)
class PatternMatrix:
    """0/1 matrix saying which listed prime divides which coordinate."""

    primes: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]  # one row per prime, r columns

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(
            self, "entries", tuple(tuple(int(e) for e in row) for row in self.entries)
        )
        if len(self.primes) != len(self.entries):
            raise ValueError("one entry row per prime required")
        if any(self.primes[i] >= self.primes[i + 1] for i in range(len(self.primes) - 1)):
            raise ValueError("primes must be strictly increasing")
        for p in self.primes:
            fac = arith.factor_small(p)
            if len(fac) != 1 or fac[0][1] != 1:
                raise ValueError(f"{p} is not prime")
        if self.entries:
            width = len(self.entries[0])
            if any(len(row) != width for row in self.entries):
                raise ValueError("ragged entry rows")
            if any(e not in (0, 1) for row in self.entries for e in row):
                raise ValueError("entries must be 0 or 1")

    @property
    def r(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def pattern_count(n: int, pattern: PatternMatrix, alpha) -> CountResult:
    """#{x <= n*alpha : p_i | x_j exactly when entries[i][j] = 1}.

    Per coordinate: inclusion-exclusion over the primes required NOT to
    divide, on top of the forced divisor (product of required primes);
    coordinates multiply since the conditions are independent across j.
    """
    box = Box.from_alpha(n, alpha)
    if pattern.r != box.r:
        raise ValueError(f"pattern has {pattern.r} columns, alpha has {box.r}")
    total = 1
    for j, bound in enumerate(box.bounds):
        forced = prod(p for p, row in zip(pattern.primes, pattern.entries) if row[j])
        banned = [p for p, row in zip(pattern.primes, pattern.entries) if not row[j]]
        cnt = 0
        for sub, sign in _signed_subset_products(banned):
            cnt += sign * (bound // (forced * sub))
        total *= cnt
        if total == 0:
            break
    return CountResult(count=total, constraint=None, box=box, method=METHOD_MOBIUS)


def _signed_subset_products(primes) -> list[tuple[int, int]]:
    out = [(1, 1)]
    for p in primes:
        out += [(d * p, -s) for d, s in out]
    return out


# ---------------------------------------------------------------------------
# weighted gcd / lcm sums


def weighted_sum_gcd(n: int, alpha) -> int:
    """Exact sum of gcd(x, y) over x <= floor(n a), y <= floor(n b).

    Expanded as sum over d of d * sum over squarefree k of
    mu(k) floor(A/dk) floor(B/dk); the identity with the totient form
    sum_e phi(e) floor(A/e) floor(B/e) is a test oracle.
    """
    box = Box.from_alpha(n, alpha)
    if box.r != 2:
        raise ValueError("gcd-weighted sums are defined for 2-dimensional boxes")
    A, B = box.bounds
    m = min(A, B)
    if m == 0:
        return 0
    tables = shared_tables(m)
    mob = tables.mobius
    total = 0
    for d in range(1, m + 1):
        top = m // d
        k = np.arange(1, top + 1, dtype=np.int64)
        mu_k = mob[1 : top + 1].astype(np.int64)
        e = d * k
        total += d * int(np.sum(mu_k * (A // e) * (B // e)))
    return int(total)


def weighted_sum_lcm(n: int, alpha) -> int:
    """Exact sum of lcm(x, y) over the box, grouped by the gcd.

    With S(m) = m(m+1)/2 and J(m) = m * prod over p | m of (1 - p):
    sum lcm = sum over m of J(m) S(floor(A/m)) S(floor(B/m)).  Intermediate
    magnitudes stay below sum A^2 B^2 / (4 m^2) ~ 0.45 n^4, int64-safe up to
    n ~ 6e4, far past the grid budget; larger n raises a capacity error.
    """
    box = Box.from_alpha(n, alpha)
    if box.r != 2:
        raise ValueError("lcm-weighted sums are defined for 2-dimensional boxes")
    A, B = box.bounds
    m = min(A, B)
    if m == 0:
        return 0
    if n > 60_000:
        raise CapacityError("lcm-weighted sums overflow 64-bit safety above n = 60000")
    tables = shared_tables(m)
    J = np.arange(m + 1, dtype=np.int64)
    for p in tables.primes:
        p = int(p)
        if p > m:
            break
        J[p::p] *= 1 - p
    idx = np.arange(1, m + 1, dtype=np.int64)
    fa = A // idx
    fb = B // idx
    terms = J[1:] * (fa * (fa + 1) // 2) * (fb * (fb + 1) // 2)
    return int(terms.sum())
