"""Desk-scale model of the glued spectrum (R \\ {0}) + T^k.

For a finitely generated frequency lattice of rank k, the spectrum of

    C_{0, R\\{0}}(R)  (+)  span of the characters chi_l

is the disjoint union of Y = R \\ {0} and the k-torus (the dual of Z^k),
carrying the non-product topology generated by three kinds of subbasis
sets: open sets of Y, co-compact sets of Y joined with the whole torus, and
joint character preimages of open discs.  Points of the torus kill the
C_0 part; real points evaluate both summands.

Everything is finite and decidable here: algebra elements are a declared
C_0 function plus a finite character sum with exact integer coordinates
over the asserted Q-independent basis; convergence is certified against a
finite family of neighbourhoods, not proved topologically.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    RankMismatch,
    TargetNotInNeighborhood,
    ValidationError,
)

TWO_PI = 2.0 * math.pi

EPS_TAIL = 1e-2
_F0_PROBES = (0.0, 1e3, -1e3, 1e6, -1e6)


@dataclass(frozen=True)
class FrequencyBasis:
    """Labels and numeric values of Q-linearly independent frequencies.

    Independence is asserted by the caller; rank 0 models the algebra of
    constants (whose spectrum is a single point).
    """

    labels: tuple
    values: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValidationError("labels and values must align")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("basis labels must be distinct")

    @property
    def rank(self):
        return len(self.labels)


class CharacterSum:
    """Finite sum of characters with integer frequency coordinates.

    A term (coeff, (n_1, ..., n_k)) is coeff * chi_l with l = sum n_j b_j;
    on the torus it evaluates to coeff * e^{i <n, theta>}.
    """

    def __init__(self, terms, rank):
        self.rank = int(rank)
        acc = {}
        for coeff, coords in terms:
            coords = tuple(int(v) for v in coords)
            if len(coords) != self.rank:
                raise RankMismatch(
                    f"coordinate vector {coords} does not match rank {self.rank}"
                )
            acc[coords] = acc.get(coords, 0.0 + 0.0j) + complex(coeff)
        self.terms = tuple(sorted(acc.items()))

    def frequency(self, coords, basis):
        return sum(n * b for n, b in zip(coords, basis.values))

    def eval_real(self, y, basis):
        if basis.rank != self.rank:
            raise RankMismatch("basis rank does not match the character sum")
        out = 0.0 + 0.0j
        for coords, coeff in self.terms:
            out += coeff * np.exp(1j * self.frequency(coords, basis) * y)
        return out

    def eval_torus(self, thetas):
        if len(thetas) != self.rank:
            raise RankMismatch(
                f"torus point of rank {len(thetas)} against character rank {self.rank}"
            )
        out = 0.0 + 0.0j
        for coords, coeff in self.terms:
            out += coeff * np.exp(1j * sum(n * t for n, t in zip(coords, thetas)))
        return out

    def __mul__(self, other):
        if other.rank != self.rank:
            raise RankMismatch("character sums of different rank")
        terms = []
        for c1, a1 in self.terms:
            for c2, a2 in other.terms:
                terms.append((a1 * a2, tuple(x + y for x, y in zip(c1, c2))))
        return CharacterSum(terms, self.rank)

    def conjugate(self):
        return CharacterSum(
            [(a.conjugate(), tuple(-x for x in c)) for c, a in self.terms], self.rank
        )


def char(coords, coeff=1.0 + 0.0j):
    coords = tuple(int(v) for v in coords)
    return CharacterSum([(coeff, coords)], len(coords))


def _zero_f0(y):
    return 0.0


@dataclass(frozen=True)
class AlgebraElement:
    """Element f0 + f1: a C_0 part on R \\ {0} plus a character sum.

    f0 membership in C_{0, R\\{0}} is asserted by the caller and
    spot-checked at the probes 0, +-1e3, +-1e6 against EPS_TAIL.
    """

    basis: FrequencyBasis
    f1: CharacterSum
    f0: callable = field(default=_zero_f0)

    def __post_init__(self):
        if self.f1.rank != self.basis.rank:
            raise RankMismatch("character sum rank does not match the basis")
        for probe in _F0_PROBES:
            if abs(self.f0(probe)) > EPS_TAIL:
                raise ValidationError(
                    f"f0 fails the C_0,R\\{{0}} spot check at {probe:g}: "
                    f"|f0| = {abs(self.f0(probe)):.3e}"
                )

    def multiply(self, other):
        """Product; the f0*f1 cross terms fold into the C_0 part."""
        if other.basis is not self.basis and other.basis != self.basis:
            raise RankMismatch("algebra elements over different bases")
        f0a, f1a = self.f0, self.f1
        f0b, f1b = other.f0, other.f1
        basis = self.basis

        def f0(y):
            return (f0a(y) * f0b(y)
                    + f0a(y) * f1b.eval_real(y, basis)
                    + f0b(y) * f1a.eval_real(y, basis))

        return AlgebraElement(basis=basis, f1=f1a * f1b, f0=f0)


@dataclass(frozen=True)
class GluedPoint:
    """Point of (R \\ {0}) + T^k: a nonzero real or a tuple of angles."""

    kind: str
    y: float = None
    angles: tuple = None

    @property
    def rank(self):
        return None if self.kind == "real" else len(self.angles)


def real_point(y):
    y = float(y)
    if y == 0.0:
        raise ValidationError("real glued points must be nonzero")
    return GluedPoint(kind="real", y=y)


def torus_point(angles):
    normalized = tuple(float(t) % TWO_PI for t in angles)
    return GluedPoint(kind="torus", angles=normalized)


def evaluate(pt, g):
    """Character evaluation: f0(y) + f1(y) at real points, f1(theta) on the torus."""
    if pt.kind == "real":
        return complex(g.f0(pt.y)) + g.f1.eval_real(pt.y, g.basis)
    return g.f1.eval_torus(pt.angles)


def iota(c, basis):
    """Natural map R -> glued spectrum: identity off 0, 0 to the torus identity."""
    c = float(c)
    if c != 0.0:
        return real_point(c)
    return torus_point((0.0,) * basis.rank)


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float


@dataclass(frozen=True)
class SubbasisSet:
    """One generating open set of the glued topology.

    kind 1: union of open intervals of Y (torus part empty);
    kind 2: complement of a compact K inside Y, joined with the full torus
            (K is a finite union of closed intervals avoiding 0);
    kind 3: joint preimage of a disc union under a character sum, read on Y
            through the real frequencies and on the torus through the
            integer coordinates.
    """

    kind: int
    intervals: tuple = ()          # type 1: open (a, b)
    compact: tuple = ()            # type 2: closed [a, b], 0 not in [a, b]
    f: CharacterSum = None         # type 3
    basis: FrequencyBasis = None   # type 3
    discs: tuple = ()              # type 3

    def __post_init__(self):
        if self.kind == 2:
            for a, b in self.compact:
                if a > b or (a <= 0.0 <= b):
                    raise ValidationError(
                        f"[{a}, {b}] is not a compact subset of R \\ {{0}}"
                    )
        if self.kind == 3 and (self.f is None or self.basis is None):
            raise ValidationError("type-3 sets need a character sum and a basis")


def type1(intervals):
    return SubbasisSet(kind=1, intervals=tuple((float(a), float(b)) for a, b in intervals))


def type2(compact):
    return SubbasisSet(kind=2, compact=tuple((float(a), float(b)) for a, b in compact))


def type3(f, basis, discs):
    return SubbasisSet(
        kind=3, f=f, basis=basis,
        discs=tuple(Disc(complex(c), float(r)) for c, r in discs),
    )


def in_subbasis(pt, S):
    """Membership of a glued point in a subbasis set."""
    if S.kind == 1:
        if pt.kind != "real":
            return False
        return any(a < pt.y < b for a, b in S.intervals)
    if S.kind == 2:
        if pt.kind == "torus":
            return True
        return not any(a <= pt.y <= b for a, b in S.compact)
    if pt.kind == "real":
        value = S.f.eval_real(pt.y, S.basis)
    else:
        value = S.f.eval_torus(pt.angles)
    return any(abs(value - d.center) < d.radius for d in S.discs)


def converges(seq, target, nbhd, basis, min_tail=None):
    """Finite-family convergence certificate for iota(c_n) -> target.

    True iff for every supplied neighbourhood there is an N such that all
    later sequence members map into it, where the tail [N, end) must cover
    at least ``min_tail`` members (default: a tenth of the sequence, at
    least 10) so a single lucky last element cannot certify.  Raises
    TargetNotInNeighborhood when some set misses the target.
    """
    seq = [float(c) for c in seq]
    if len(seq) < 2:
        raise ValidationError("convergence certificates need a long sequence")
    if min_tail is None:
        min_tail = max(10, len(seq) // 10)
    for S in nbhd:
        if not in_subbasis(target, S):
            raise TargetNotInNeighborhood(
                f"target is outside a supplied type-{S.kind} set"
            )
    points = [iota(c, basis) for c in seq]
    for S in nbhd:
        inside = [in_subbasis(p, S) for p in points]
        last_violation = -1
        for i, ok in enumerate(inside):
            if not ok:
                last_violation = i
        if len(seq) - (last_violation + 1) < min_tail:
            return False
    return True


def bump(center, halfwidth, height=1.0):
    """Compactly supported C_0 separating function (vanishes off the bump)."""
    c, w, h = float(center), float(halfwidth), float(height)
    if w <= 0:
        raise ValidationError("halfwidth must be positive")

    def f0(y):
        u = (y - c) / w
        if abs(u) >= 1.0:
            return 0.0
        return h * (1.0 - u * u) ** 2

    return f0
