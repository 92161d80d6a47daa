"""Finite abelian groups in canonical divisor-chain form, and the homology of
the two-term integer complex

    Q/Z --(mult. by v)--> (Q/Z)^a --(M)--> (Q/Z)^b

at the middle, computed for all primes at once.

The closed form (divisible rank a - 1 - rank M, finite part given by the
elementary divisors of M) is validated in the test suite against an
independent brute-force enumeration; it is never trusted on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .errors import ComplexConditionViolated, StateSpaceTooLarge, ZeroAugmentation
from .linalg import IntegerMatrix, smith_normal_form

#: Upper bound on brute-force enumeration work (explored candidate values).
STATE_GUARD = 10_000_000


def _isprime(n: int) -> bool:
    from sympy import isprime  # deferred: keeps CLI startup fast

    return bool(isprime(int(n)))


def _factorint(n: int) -> dict[int, int]:
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(int(n)).items()}


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z/d_1 + ... + Z/d_s with d_1 | d_2 | ...,
    every d_k >= 2.  Two finite abelian groups are isomorphic exactly when
    their chains coincide, so equality of chains is the canonical test."""

    divisor_chain: tuple[int, ...]

    def __post_init__(self):
        chain = tuple(int(d) for d in self.divisor_chain)
        object.__setattr__(self, "divisor_chain", chain)
        for d in chain:
            if d < 2:
                raise ValueError(f"divisor chain entries must be >= 2, got {d}")
        for a, b in zip(chain, chain[1:]):
            if b % a:
                raise ValueError(f"not a divisibility chain: {a} does not divide {b}")

    @property
    def order(self) -> int:
        return prod(self.divisor_chain)

    @property
    def is_trivial(self) -> bool:
        return not self.divisor_chain

    def primes(self) -> tuple[int, ...]:
        """Primes dividing the group order, ascending."""
        if self.is_trivial:
            return ()
        return tuple(sorted(_factorint(self.order)))

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.divisor_chain)


TRIVIAL_GROUP = FiniteAbelianGroup(())


def canonical_group(orders: Sequence[int]) -> FiniteAbelianGroup:
    """Canonical form of the direct sum of Z/order_k.

    Computed as the divisor chain of diag(orders): the Smith normal form
    machinery already produces invariant factors, so no factorization is
    needed here.  Orders equal to 1 contribute nothing.
    """
    cleaned = []
    for k, n in enumerate(orders):
        n = int(n)
        if n < 1:
            raise ValueError(f"orders must be >= 1, got {n} at position {k}")
        if n > 1:
            cleaned.append(n)
    if not cleaned:
        return TRIVIAL_GROUP
    dec = smith_normal_form(IntegerMatrix.diagonal(cleaned))
    return FiniteAbelianGroup(tuple(d for d in dec.elementary_divisors if d > 1))


def ell_primary(group: FiniteAbelianGroup, ell: int) -> FiniteAbelianGroup:
    """The ell-Sylow subgroup, in canonical form."""
    if not _isprime(ell):
        raise ValueError(f"{ell} is not prime")
    chain = []
    for d in group.divisor_chain:
        part = 1
        while d % ell == 0:
            part *= ell
            d //= ell
        if part > 1:
            chain.append(part)
    return FiniteAbelianGroup(tuple(chain))


@dataclass(frozen=True)
class QZHomology:
    """Middle homology of the Q/Z complex: a divisible part of finite corank
    plus a finite group.  A nonzero divisible rank signals data inconsistent
    with a genuine degeneration and is surfaced, never dropped."""

    divisible_rank: int
    finite_part: FiniteAbelianGroup


def _check_complex(v: Sequence[int], m: IntegerMatrix) -> tuple[int, ...]:
    vec = tuple(int(x) for x in v)
    if len(vec) != m.cols:
        raise ValueError(f"augmentation vector has length {len(vec)}, matrix has {m.cols} columns")
    if not any(vec):
        raise ZeroAugmentation("augmentation vector is zero")
    image = m.mul_vector(vec)
    if any(image):
        raise ComplexConditionViolated(f"M v != 0 (got {image})")
    return vec


def qz_complex_homology(v: Sequence[int], m: IntegerMatrix) -> QZHomology:
    """Homology at the middle of Q/Z -> (Q/Z)^a -> (Q/Z)^b.

    Ker(M on (Q/Z)^a) is an extension of the torsion of coker(M: Z^a -> Z^b)
    by a divisible group of rank a - rank(M); quotienting by the image of the
    rank-one divisible subgroup spanned by v leaves divisible rank
    a - 1 - rank(M) and the finite part unchanged.  The precondition M v = 0
    with v != 0 forces rank(M) <= a - 1, so the rank is never negative.
    """
    _check_complex(v, m)
    dec = smith_normal_form(m)
    finite = FiniteAbelianGroup(tuple(d for d in dec.elementary_divisors if d > 1))
    return QZHomology(divisible_rank=m.cols - 1 - dec.rank, finite_part=finite)


@dataclass(frozen=True)
class BruteForceAnswer:
    """Level-n quotient computed by exhaustive enumeration."""

    ell: int
    level: int
    order: int
    divisor_chain: tuple[int, ...]


def _solve_linear_congruence(c: int, r: int, modulus: int) -> list[int]:
    """All x in [0, modulus) with c*x = r (mod modulus)."""
    from math import gcd

    c %= modulus
    r %= modulus
    if c == 0:
        return list(range(modulus)) if r == 0 else []
    g = gcd(c, modulus)
    if r % g:
        return []
    m2 = modulus // g
    x0 = (r // g) * pow(c // g, -1, m2) % m2
    return [x0 + t * m2 for t in range(g)]


def _enumeration_order(rows: list[tuple[int, ...]], a: int) -> list[int]:
    """Order coordinates so constraint rows complete as early as possible."""
    remaining = set(range(a))
    supports = [frozenset(j for j, c in enumerate(r) if c) for r in rows]
    order: list[int] = []
    chosen: set[int] = set()
    while remaining:
        best = None
        best_key = None
        for cand in sorted(remaining):
            would = chosen | {cand}
            completed = sum(1 for s in supports if s and s <= would and not s <= chosen)
            membership = sum(1 for s in supports if cand in s)
            key = (-completed, -membership, cand)
            if best_key is None or key < best_key:
                best, best_key = cand, key
        order.append(best)
        chosen.add(best)
        remaining.discard(best)
    return order


def brute_force_qz_homology(
    v: Sequence[int], m: IntegerMatrix, ell: int, level: int
) -> BruteForceAnswer:
    """Independent oracle: enumerate lambda in ((ell^-level Z)/Z)^a with
    M lambda integral, quotient by the multiples of v, and read off the
    quotient's order and cyclic structure from element-order counts.

    The enumeration is a depth-first sweep of the product space; subtrees
    are cut only when an already-complete constraint row rules them out, so
    the traversal remains exhaustive.  Work is capped by STATE_GUARD.
    """
    if not _isprime(ell):
        raise ValueError(f"{ell} is not prime")
    if level < 1:
        raise ValueError("level must be >= 1")
    vec = _check_complex(v, m)
    a = m.cols
    modulus = ell**level

    rows = [m.row(i) for i in range(m.rows) if any(m.row(i))]
    order = _enumeration_order(rows, a)
    pos_of = {coord: k for k, coord in enumerate(order)}

    # rows_done[k]: rows whose full support is assigned once slot k is set
    rows_done: list[list[tuple[int, ...]]] = [[] for _ in range(a)]
    for r in rows:
        last = max(pos_of[j] for j, c in enumerate(r) if c)
        rows_done[last].append(r)

    kernel: list[tuple[int, ...]] = []
    assignment = [0] * a
    explored = 0

    def residue(row: tuple[int, ...]) -> int:
        return sum(row[j] * assignment[j] for j in range(a)) % modulus

    def descend(k: int) -> None:
        nonlocal explored
        if k == a:
            kernel.append(tuple(assignment))
            return
        coord = order[k]
        pinned = rows_done[k]
        if pinned:
            # solve the first completed row for this coordinate, then filter
            first = pinned[0]
            rest = sum(first[j] * assignment[j] for j in range(a) if j != coord)
            candidates = _solve_linear_congruence(first[coord], -rest, modulus)
        else:
            candidates = range(modulus)
        for val in candidates:
            explored += 1
            if explored > STATE_GUARD:
                raise StateSpaceTooLarge(
                    f"enumeration guard of {STATE_GUARD} states exceeded "
                    f"(ell={ell}, level={level}, {a} coordinates)"
                )
            assignment[coord] = val
            if all(residue(r) == 0 for r in pinned):
                descend(k + 1)
        assignment[coord] = 0

    descend(0)

    # The boundary subgroup is Im(alpha) intersected with the level-n kernel.
    # Multiplication by ell is onto Q/Z, so the ell-part of gcd(v) must be
    # stripped first: mu*v lands in level n for mu of level n + val_ell(gcd v).
    strip = 0
    vals = [x for x in vec if x]
    while all(x % ell ** (strip + 1) == 0 for x in vals):
        strip += 1
    reduced = tuple(x // ell**strip for x in vec)
    boundary = {tuple(t * x % modulus for x in reduced) for t in range(modulus)}
    if len(kernel) % len(boundary):
        raise AssertionError("boundary subgroup does not divide kernel")  # pragma: no cover
    quotient_order = len(kernel) // len(boundary)

    # N_j = number of quotient elements killed by ell^j; the increments of
    # log_ell N_j count chain entries with exponent >= j.
    counts = []
    for j in range(level + 1):
        scale = ell**j
        killed = sum(
            1 for x in kernel if tuple(scale * c % modulus for c in x) in boundary
        )
        counts.append(killed // len(boundary))
    exps_at_least = []
    for j in range(1, level + 1):
        ratio = counts[j] // counts[j - 1]
        e = 0
        while ratio > 1:
            ratio //= ell
            e += 1
        exps_at_least.append(e)
    chain: list[int] = []
    for j, here in enumerate(exps_at_least, start=1):
        after = exps_at_least[j] if j < len(exps_at_least) else 0
        chain.extend([ell**j] * (here - after))
    chain.sort()

    return BruteForceAnswer(ell=ell, level=level, order=quotient_order, divisor_chain=tuple(chain))


def stabilized_brute_force(
    v: Sequence[int], m: IntegerMatrix, ell: int, level: int = 2
) -> tuple[BruteForceAnswer, BruteForceAnswer, bool]:
    """Run the oracle at consecutive levels; once the orders agree the level-n
    answer equals the ell-part of the true homology."""
    low = brute_force_qz_homology(v, m, ell, level)
    high = brute_force_qz_homology(v, m, ell, level + 1)
    return low, high, low.order == high.order
