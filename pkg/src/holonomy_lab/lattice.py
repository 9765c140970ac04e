"""Exact Z-span arithmetic over edge-length sets and embeddability verdicts.

Lengths live in a finite-rank Q-vector space over a declared set of
Q-linearly independent basis reals (independence is asserted by the caller,
not verified -- it is undecidable in general).  Membership l in span_Z L is
decided exactly: denominators are cleared to a common integer matrix and
the question becomes integer-lattice membership, solved by a Hermite-style
row-echelon basis over arbitrary-precision integers.  No floating point
enters this module.

Two symbolic variants stand in for length sets that are not finitely
generated: FULL_LINE (the lengths of all piecewise linear paths span all of
R over Z) and a dyadic span (barycentric subdivision produces lengths
l / 2^k).  Their subset rules are fixed from the corresponding structural
arguments rather than computed.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BasisMismatch, ValidationError

FINITE = "finite"
FULL_LINE_VARIANT = "full_line"
DYADIC = "dyadic"

EXTENDS_INJECTIVELY = "extends_injectively"
EXTENDS_NON_INJECTIVELY = "extends_non_injectively"
NO_EXTENSION = "no_extension"
UNKNOWN = "unknown"

GLYPHS = {
    EXTENDS_INJECTIVELY: "++",
    EXTENDS_NON_INJECTIVELY: "+",
    NO_EXTENSION: "-",
    UNKNOWN: "?",
}


def _xgcd(a, b):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


class ZLattice:
    """Integer lattice in Z^n held as a row-echelon basis with pivots."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = []  # echelon rows, pivot columns strictly increasing

    def _pivot_col(self, row):
        for j, v in enumerate(row):
            if v:
                return j
        return None

    def add(self, vec):
        vec = list(vec)
        if len(vec) != self.dim:
            raise ValueError("dimension mismatch")
        i = 0
        while True:
            j = self._pivot_col(vec)
            if j is None:
                return
            while i < len(self.rows) and self._pivot_col(self.rows[i]) < j:
                i += 1
            if i == len(self.rows) or self._pivot_col(self.rows[i]) > j:
                self.rows.insert(i, vec)
                return
            row = self.rows[i]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [v - q * r for v, r in zip(vec, row)]
            else:
                g, x, y = _xgcd(a, b)
                new_row = [x * r + y * v for r, v in zip(row, vec)]
                new_vec = [(-b // g) * r + (a // g) * v for r, v in zip(row, vec)]
                self.rows[i] = new_row
                vec = new_vec

    def __contains__(self, vec):
        vec = list(vec)
        if len(vec) != self.dim:
            raise ValueError("dimension mismatch")
        for row in self.rows:
            j = self._pivot_col(row)
            if vec[j] == 0:
                continue
            if vec[j] % row[j]:
                return False
            q = vec[j] // row[j]
            vec = [v - q * r for v, r in zip(vec, row)]
        return not any(vec)

    def hermite_basis(self):
        """Canonical Hermite form: positive pivots, entries above reduced."""
        rows = [list(r) for r in self.rows]
        for i, row in enumerate(rows):
            j = self._pivot_col(row)
            if row[j] < 0:
                rows[i] = [-v for v in row]
        for i in range(len(rows) - 1, -1, -1):
            j = self._pivot_col(rows[i])
            p = rows[i][j]
            for k in range(i):
                q = rows[k][j] // p
                if q:
                    rows[k] = [v - q * r for v, r in zip(rows[k], rows[i])]
        return tuple(tuple(r) for r in rows)


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValidationError(f"exact rational expected, got {x!r} ({type(x).__name__})")


def fraction_vector(values):
    return tuple(_to_fraction(v) for v in values)


@dataclass(frozen=True)
class LengthSet:
    """Edge-length set: finite rational vectors, the full line, or a dyadic span."""

    variant: str
    basis_labels: tuple = ()
    elements: tuple = ()
    base_length: tuple = None

    def __str__(self):
        if self.variant == FULL_LINE_VARIANT:
            return "FullLine"
        if self.variant == DYADIC:
            return f"DyadicSpan({_vec_str(self.base_length, self.basis_labels)})"
        gens = ", ".join(_vec_str(e, self.basis_labels) for e in self.elements)
        return f"{{{gens}}}"


def _vec_str(vec, labels):
    parts = []
    for coeff, label in zip(vec, labels):
        if coeff == 0:
            continue
        if label == "1":
            parts.append(str(coeff))
        elif coeff == 1:
            parts.append(label)
        else:
            parts.append(f"{coeff}*{label}")
    return " + ".join(parts) if parts else "0"


FULL_LINE = LengthSet(variant=FULL_LINE_VARIANT)


def finite_lengths(basis_labels, elements):
    labels = tuple(basis_labels)
    if len(set(labels)) != len(labels):
        raise ValidationError("basis labels must be distinct")
    elems = tuple(fraction_vector(e) for e in elements)
    for e in elems:
        if len(e) != len(labels):
            raise BasisMismatch(
                f"element of dimension {len(e)} over a basis of rank {len(labels)}"
            )
        if not any(e):
            raise ValidationError("zero-length edges are excluded")
    return LengthSet(variant=FINITE, basis_labels=labels, elements=elems)


def dyadic_span(basis_labels, base_length):
    labels = tuple(basis_labels)
    base = fraction_vector(base_length)
    if len(base) != len(labels):
        raise BasisMismatch("base length dimension does not match basis rank")
    if not any(base):
        raise ValidationError("dyadic span needs a nonzero base length")
    return LengthSet(variant=DYADIC, basis_labels=labels, base_length=base)


def _check_basis(L1, L2):
    if L1.variant == FULL_LINE_VARIANT or L2.variant == FULL_LINE_VARIANT:
        return
    if L1.basis_labels != L2.basis_labels:
        raise BasisMismatch(
            f"bases {L1.basis_labels} and {L2.basis_labels} are incompatible"
        )


def _integer_matrix(vectors):
    """Clear denominators jointly; Z-span membership is scale invariant."""
    denom = 1
    for vec in vectors:
        for v in vec:
            denom = denom * v.denominator // gcd(denom, v.denominator)
    return [[int(v * denom) for v in vec] for vec in vectors], denom


def _finite_lattice(L, extra):
    rows, _ = _integer_matrix(list(L.elements) + [extra])
    lat = ZLattice(len(L.basis_labels))
    for row in rows[:-1]:
        lat.add(row)
    return lat, rows[-1]


def _dyadic_ratio(vec, base):
    """The rational q with vec == q * base, or None."""
    q = None
    for v, b in zip(vec, base):
        if b == 0:
            if v != 0:
                return None
            continue
        r = v / b
        if q is None:
            q = r
        elif r != q:
            return None
    return q


def _is_dyadic(q):
    return q is not None and q != 0 and (q.denominator & (q.denominator - 1)) == 0


def zspan_member(l, L):
    """Exact decision of l in span_Z L for nonzero l."""
    if L.variant == FULL_LINE_VARIANT:
        return True
    vec = fraction_vector(l)
    if len(vec) != len(L.basis_labels):
        raise BasisMismatch(
            f"query of dimension {len(vec)} over a basis of rank {len(L.basis_labels)}"
        )
    if not any(vec):
        raise ValidationError("zero length is excluded from membership queries")
    if L.variant == DYADIC:
        return _is_dyadic(_dyadic_ratio(vec, L.base_length))
    lat, target = _finite_lattice(L, vec)
    return target in lat


def zspan_subset(L1, L2):
    """Exact decision of span_Z L1 subseteq span_Z L2."""
    if L2.variant == FULL_LINE_VARIANT:
        return True
    if L1.variant == FULL_LINE_VARIANT:
        return False
    _check_basis(L1, L2)
    if L1.variant == DYADIC:
        if L2.variant == DYADIC:
            return _is_dyadic(_dyadic_ratio(L1.base_length, L2.base_length))
        # A finitely generated lattice has no infinitely 2-divisible
        # nonzero subgroup (inf of the dyadic lengths is zero).
        return False
    if L2.variant == DYADIC:
        return all(_is_dyadic(_dyadic_ratio(e, L2.base_length)) for e in L1.elements)
    return all(zspan_member(e, L2) for e in L1.elements)


def zspan_equal(L1, L2):
    return zspan_subset(L1, L2) and zspan_subset(L2, L1)


def hermite_basis(L):
    """Canonical HNF basis of a finite length set (after clearing denominators)."""
    if L.variant != FINITE:
        raise ValidationError("hermite_basis applies to finite length sets only")
    rows, denom = _integer_matrix(list(L.elements))
    lat = ZLattice(len(L.basis_labels))
    for row in rows:
        lat.add(row)
    return tuple(tuple(Fraction(v, denom) for v in row) for row in lat.hermite_basis())


@dataclass(frozen=True)
class Verdict:
    """Embeddability verdict with an optional witness description."""

    tag: str
    witness: str = None

    def __post_init__(self):
        if self.tag == NO_EXTENSION and not self.witness:
            raise ValidationError("a no-extension verdict requires a witness")

    @property
    def glyph(self):
        return GLYPHS[self.tag]


NONSTRAIGHT_WITNESS = "non-AP matrix function (f_{r,t} family)"


def embed_verdict(L_cosm, L_grav, grav_has_nonstraight):
    """Verdict on extending the classical embedding to the quantum spaces.

    Non-straight gravity paths contribute matrix functions vanishing at
    infinity but not identically (the f_{r,t} family), which no
    almost-periodic algebra contains: no extension.  Otherwise the verdict
    reduces to the lattice comparison of the two length sets: restriction
    algebra inside the cosmological one iff span_Z L_grav subseteq
    span_Z L_cosm, injective extension iff the spans agree.
    """
    if grav_has_nonstraight:
        return Verdict(NO_EXTENSION, witness=NONSTRAIGHT_WITNESS)
    if not zspan_subset(L_grav, L_cosm):
        witness = _subset_witness(L_grav, L_cosm)
        return Verdict(NO_EXTENSION, witness=witness)
    if zspan_subset(L_cosm, L_grav):
        return Verdict(EXTENDS_INJECTIVELY)
    return Verdict(EXTENDS_NON_INJECTIVELY)


def _subset_witness(L_grav, L_cosm):
    if L_grav.variant == FULL_LINE_VARIANT:
        return "gravity lengths span all of R over Z, exceeding the cosmological lattice"
    if L_grav.variant == DYADIC:
        return "infinitely 2-divisible subdivision lengths (inf of the length set is 0)"
    for e in L_grav.elements:
        if not zspan_member(e, L_cosm):
            return f"length outside lattice: {_vec_str(e, L_grav.basis_labels)}"
    return "lattice comparison failed"


# --- constellation matrix -------------------------------------------------

GRAVITY_ROWS = ("G_omega", "G_infty", "G_k", "G_PL", "G_Gamma", "G_Gamma_PL", "G_B")
COSMOLOGY_COLUMNS = ("C_same", "C_PL", "C_fixgeo", "C_min")

EXCEPTION_NOTES = {
    1: "classical space fails to embed iff all edge lengths in the graph are "
       "commensurable; unknown for a general fixed graph",
    2: "conjectural: holds if no non-straight holonomy entry is almost periodic",
    3: "injective only if the graph's edge lengths span R over Z "
       "(needs uncountably many edges)",
    4: "sign flips if every graph edge length lies in the Z-span of the two "
       "incommensurable lengths",
    5: "injectivity as in exception 3 (the starting graph must be uncountable)",
    6: "extends iff the starting graph had an edge length inside the Z-span; "
       "reported verdict follows the inf-argument",
}

EXPECTED_TABLE = {
    ("G_omega", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_omega", "C_PL"): (NO_EXTENSION, None),
    ("G_omega", "C_fixgeo"): (NO_EXTENSION, None),
    ("G_omega", "C_min"): (NO_EXTENSION, None),
    ("G_infty", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_infty", "C_PL"): (NO_EXTENSION, None),
    ("G_infty", "C_fixgeo"): (NO_EXTENSION, None),
    ("G_infty", "C_min"): (NO_EXTENSION, None),
    ("G_k", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_k", "C_PL"): (NO_EXTENSION, None),
    ("G_k", "C_fixgeo"): (NO_EXTENSION, None),
    ("G_k", "C_min"): (NO_EXTENSION, None),
    ("G_PL", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_PL", "C_PL"): (EXTENDS_INJECTIVELY, None),
    ("G_PL", "C_fixgeo"): (EXTENDS_INJECTIVELY, None),
    ("G_PL", "C_min"): (NO_EXTENSION, None),
    ("G_Gamma", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_Gamma", "C_PL"): (UNKNOWN, 2),
    ("G_Gamma", "C_fixgeo"): (UNKNOWN, 2),
    ("G_Gamma", "C_min"): (UNKNOWN, 2),
    ("G_Gamma_PL", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_Gamma_PL", "C_PL"): (EXTENDS_NON_INJECTIVELY, 3),
    ("G_Gamma_PL", "C_fixgeo"): (EXTENDS_NON_INJECTIVELY, 3),
    ("G_Gamma_PL", "C_min"): (NO_EXTENSION, 4),
    ("G_B", "C_same"): (EXTENDS_INJECTIVELY, None),
    ("G_B", "C_PL"): (EXTENDS_NON_INJECTIVELY, 5),
    ("G_B", "C_fixgeo"): (EXTENDS_NON_INJECTIVELY, 5),
    ("G_B", "C_min"): (NO_EXTENSION, 6),
}

# Desk-scale encodings over the asserted Q-independent basis (1, sqrt2, sqrt3).
_BASIS3 = ("1", "sqrt2", "sqrt3")
_C_MIN = finite_lengths(_BASIS3, [(1, 0, 0), (0, 1, 0)])
_GAMMA_PL_LENGTHS = finite_lengths(_BASIS3, [(1, 0, 0), (0, 0, 1)])
_B_LENGTHS = dyadic_span(_BASIS3, (1, 0, 0))

_COLUMN_SETS = {"C_PL": FULL_LINE, "C_fixgeo": FULL_LINE, "C_min": _C_MIN}

_ROW_SCENARIOS = {
    # (length set, has non-straight paths, conjecture row)
    "G_omega": (FULL_LINE, True, False),
    "G_infty": (FULL_LINE, True, False),
    "G_k": (FULL_LINE, True, False),
    "G_PL": (FULL_LINE, False, False),
    "G_Gamma": (_GAMMA_PL_LENGTHS, True, True),
    "G_Gamma_PL": (_GAMMA_PL_LENGTHS, False, False),
    "G_B": (_B_LENGTHS, False, False),
}

_CELL_EXCEPTIONS = {(r, c): e for (r, c), (_, e) in EXPECTED_TABLE.items() if e}


@dataclass(frozen=True)
class ConstellationCell:
    row: str
    column: str
    verdict: Verdict
    exception: int = None


@dataclass(frozen=True)
class ConstellationMatrix:
    rows: tuple
    columns: tuple
    cells: tuple  # of ConstellationCell, row-major
    classical_row: tuple  # of (column, value, exception or None)

    def cell(self, row, column):
        for c in self.cells:
            if c.row == row and c.column == column:
                return c
        raise KeyError((row, column))


def _classical_flag(row):
    """Does the classical line inject for C_same (lengths = the row's set)?"""
    lengths, _, conjecture = _ROW_SCENARIOS[row]
    if conjecture:
        return "unknown"
    if lengths.variant == FULL_LINE_VARIANT:
        return "yes"
    if lengths.variant == DYADIC:
        return "no"  # all lengths are rational multiples of one base length
    for i, e1 in enumerate(lengths.elements):
        for e2 in lengths.elements[i + 1:]:
            if _dyadic_ratio(e1, e2) is None:  # no common rational ratio
                return "yes"
    return "no"


def constellation_matrix(preset="paper", gamma_includes_circle=False):
    """Verdict table over the built-in row/column scenarios.

    C_same cells are injective extensions by construction.  The fixed-graph
    conjecture row emits unknown verdicts unless the scenario declares a
    circle inside the graph; exception-tagged cells carry their tag instead
    of being silently resolved.
    """
    if preset != "paper":
        raise ValidationError(f"unknown preset {preset!r}")
    cells = []
    for row in GRAVITY_ROWS:
        lengths, nonstraight, conjecture = _ROW_SCENARIOS[row]
        for col in COSMOLOGY_COLUMNS:
            exception = _CELL_EXCEPTIONS.get((row, col))
            if col == "C_same":
                verdict = Verdict(EXTENDS_INJECTIVELY)
            elif conjecture and not gamma_includes_circle:
                verdict = Verdict(UNKNOWN)
            elif conjecture:
                verdict = Verdict(NO_EXTENSION, witness=NONSTRAIGHT_WITNESS)
            else:
                verdict = embed_verdict(_COLUMN_SETS[col], lengths, nonstraight)
            cells.append(ConstellationCell(row=row, column=col,
                                           verdict=verdict, exception=exception))
    classical = []
    for col in COSMOLOGY_COLUMNS:
        if col == "C_same":
            classical.append((col, "per-row: " + ", ".join(
                f"{row}={_classical_flag(row)}" for row in GRAVITY_ROWS), 1))
        else:
            classical.append((col, "yes", None))
    return ConstellationMatrix(
        rows=GRAVITY_ROWS, columns=COSMOLOGY_COLUMNS,
        cells=tuple(cells), classical_row=tuple(classical),
    )


def matrix_mismatches(matrix):
    """Cells disagreeing with the expected table (normally empty)."""
    out = []
    for cell in matrix.cells:
        expected_tag, expected_exc = EXPECTED_TABLE[(cell.row, cell.column)]
        if cell.verdict.tag != expected_tag or cell.exception != expected_exc:
            out.append((cell.row, cell.column, cell.verdict.tag, expected_tag))
    return out
