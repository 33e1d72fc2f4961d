"""Transition matrices between q-fundamental and enriched q-monomial functions.

Rows and columns of ``B_n`` are the subsets of ``[n-1]`` in reverse
lexicographic order, i.e. by ``revlex_rank``.  Row ``I`` holds the
coefficients of ``L^(q)_I`` on the ``eta^(q)_J``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .coeff import IntPoly, ONE, Q, RatFunc, ZERO, as_ratfunc, eval_at, q_factorial, q_number
from .combinat import SubsetIndex, format_subset, subsets_revlex
from .qsym import L_q_set, _q, l_q_via_eta, merge_index

__all__ = [
    "QMatrix",
    "build_Bn",
    "build_An",
    "verify_block_recurrences",
    "det",
    "det_bareiss",
    "det_interpolation",
    "det_An_recurrence",
    "det_An_closed_form",
    "det_Bn",
    "recdet_check",
    "det_formula_check",
    "aux_sequence",
    "invert",
    "invert_Bn",
    "lq_to_M_matrix",
    "factor_report",
    "basis_evidence",
    "SingularMatrixError",
]


class SingularMatrixError(ZeroDivisionError):
    pass


class QMatrix:
    """Square matrix over Q(q) with optional subset labels."""

    __slots__ = ("entries", "labels")

    def __init__(self, entries: Sequence[Sequence], labels: Sequence | None = None):
        rows = [[as_ratfunc(x) for x in row] for row in entries]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        self.entries = rows
        self.labels = list(labels) if labels is not None else None

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        n = self.dim
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for k in range(n):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return QMatrix(out, self.labels)

    def scale(self, c) -> "QMatrix":
        c = as_ratfunc(c)
        return QMatrix([[c * x for x in row] for row in self.entries], self.labels)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.labels
        )

    def block(self, rows: range, cols: range) -> "QMatrix":
        return QMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def map(self, fn) -> "QMatrix":
        return QMatrix([[fn(x) for x in row] for row in self.entries], self.labels)

    def specialize(self, x) -> "QMatrix":
        return self.map(lambda c: RatFunc.from_fraction(eval_at(c, x)))

    def _label_text(self) -> list:
        if self.labels is None:
            return [str(i) for i in range(self.dim)]
        return [format_subset(l.members) if isinstance(l, SubsetIndex) else str(l) for l in self.labels]

    def to_text(self) -> str:
        labels = self._label_text()
        lines = ["cols: " + ", ".join(labels)]
        for lab, row in zip(labels, self.entries):
            lines.append(f"{lab}: " + ", ".join(str(x) for x in row))
        return "\n".join(lines)

    __str__ = to_text

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": self._label_text(),
            "rows": [[str(x) for x in row] for row in self.entries],
        }


@lru_cache(maxsize=None)
def build_Bn(n: int, q=None) -> QMatrix:
    """Transition matrix from ``L^(q)_I`` to ``eta^(q)_J`` for ``I, J`` in ``[n-1]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return QMatrix([[ONE]], [SubsetIndex(0)])
    labels = subsets_revlex(n)
    rows = []
    for I in labels:
        coeffs = l_q_via_eta(I, q)
        rows.append([coeffs.get(J, ZERO) for J in labels])
    return QMatrix(rows, labels)


def _block_range(k: int) -> range:
    if k <= 1:
        return range(0, 1)
    return range(1 << (k - 2), 1 << (k - 1))


@lru_cache(maxsize=None)
def build_An(n: int, q=None) -> QMatrix:
    """Diagonal block of ``B_n`` on the subsets with maximum ``n-1`` (max of empty = 0)."""
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    B = build_Bn(n, q)
    r = _block_range(n)
    out = B.block(r, r)
    out.labels = [B.labels[i] for i in r]
    return out


def _compare(expected: QMatrix, got: QMatrix, offset=(0, 0), name="") -> list:
    bad = []
    for i, row in enumerate(expected.entries):
        for j, e in enumerate(row):
            g = got.entries[i + offset[0]][j + offset[1]]
            if e != g:
                bad.append({"block": name, "row": i + offset[0], "col": j + offset[1],
                            "expected": str(e), "got": str(g)})
    return bad


def verify_block_recurrences(n: int, q=None) -> dict:
    """Entrywise check of ``B_n = [[B_{n-1}, 0], [B_{n-1}, A_n]]`` and
    ``A_n = [[(q-1)B_{n-2}, -qB_{n-2}], [(q-1)B_{n-2}, (q-1)A_{n-1}]]``.
    """
    qq = _q(q)
    mismatches = []
    if n >= 2:
        B = build_Bn(n, q)
        Bp = build_Bn(n - 1, q)
        h = Bp.dim
        zero = QMatrix([[ZERO] * h for _ in range(h)])
        mismatches += _compare(Bp, B, (0, 0), "B_n upper-left")
        mismatches += _compare(zero, B, (0, h), "B_n upper-right")
        mismatches += _compare(Bp, B, (h, 0), "B_n lower-left")
        mismatches += _compare(build_An(n, q), B, (h, h), "B_n lower-right")
    if n >= 2:
        A = build_An(n, q)
        B2 = build_Bn(n - 2, q)
        h = B2.dim
        if n == 2:
            # 1x1 case: A_2 = (q-1) B_0
            mismatches += _compare(B2.scale(qq - 1), A, (0, 0), "A_2")
        else:
            mismatches += _compare(B2.scale(qq - 1), A, (0, 0), "A_n upper-left")
            mismatches += _compare(B2.scale(-qq), A, (0, h), "A_n upper-right")
            mismatches += _compare(B2.scale(qq - 1), A, (h, 0), "A_n lower-left")
            mismatches += _compare(build_An(n - 1, q).scale(qq - 1), A, (h, h), "A_n lower-right")
    return {"n": n, "ok": not mismatches, "mismatches": mismatches}


# -- determinants ------------------------------------------------------------------

def _clear_denominators(M: QMatrix) -> tuple:
    """Integer-polynomial matrix and the RatFunc factor ``det(M) = det(P) * factor``."""
    rows = []
    factor = ONE
    for row in M.entries:
        den = IntPoly.const(1)
        for x in row:
            if not x.den.is_one():
                g = den.gcd(x.den)
                den = den * x.den.divmod_exact(g)
        rows.append([x.num * den.divmod_exact(x.den) for x in row])
        factor = factor / RatFunc(den)
    return rows, factor


def _bareiss(rows: list, zero, exact_div) -> object:
    n = len(rows)
    if n == 0:
        return None
    a = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                val = piv * row_i[j] - aik * row_k[j]
                if prev is not None:
                    val = exact_div(val, prev)
                row_i[j] = val
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def det_bareiss(M: QMatrix) -> RatFunc:
    """Fraction-free elimination in Z[q] after clearing row denominators."""
    if M.dim == 0:
        return ONE
    rows, factor = _clear_denominators(M)
    d = _bareiss(rows, IntPoly(), lambda a, b: a.divmod_exact(b))
    return RatFunc(d) * factor


def _int_det(rows: list) -> int:
    if not rows:
        return 1
    return _bareiss(rows, 0, lambda a, b: a // b)


def _newton_to_poly(xs: list, ys: list) -> list:
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
        for k in range(n):
            new[k] -= poly[k] * xs[i]
        new[0] += coef[i]
        poly = new
    return poly


def det_interpolation(M: QMatrix) -> RatFunc:
    """Determinant by evaluation at integer points and Newton interpolation.

    Degree bound: ``dim * max entry degree`` of the denominator-cleared matrix.
    """
    if M.dim == 0:
        return ONE
    rows, factor = _clear_denominators(M)
    maxdeg = max((p.degree for r in rows for p in r), default=0)
    bound = M.dim * max(maxdeg, 0)
    xs = list(range(bound + 1))
    ys = [_int_det([[p(x) for p in r] for r in rows]) for x in xs]
    coeffs = _newton_to_poly(xs, ys)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolated determinant has non-integer coefficients")
    return RatFunc(IntPoly(int(c) for c in coeffs)) * factor


def det(M: QMatrix, method: str = "bareiss") -> RatFunc:
    if method == "bareiss":
        return det_bareiss(M)
    if method == "interpolation":
        return det_interpolation(M)
    raise ValueError(f"unknown determinant method {method!r}")


@lru_cache(maxsize=None)
def det_Bn(n: int, q=None) -> RatFunc:
    """``det B_n`` as the product of the diagonal block determinants."""
    out = ONE
    for k in range(1, n + 1):
        out = out * det_bareiss(build_An(k, q))
    return out


def aux_sequence(count: int, q=None) -> list:
    """``(alpha_i, beta_i)`` for ``i < count`` from ``(1, 0)`` and the step
    ``(alpha, beta) -> ((q-1) alpha + beta, q alpha)``."""
    qq = _q(q)
    out = [(ONE, ZERO)]
    while len(out) < count:
        a, b = out[-1]
        out.append(((qq - 1) * a + b, qq * a))
    return out[:count]


def det_An_recurrence(n: int, q=None, exact_power: bool = True) -> RatFunc:
    """``|A_n|`` by unrolling the determinant recurrence with the auxiliary sequence.

    Step ``i`` contributes ``|B_{n-2-i}| t_i^k`` with ``t_i = (q-1) alpha_i + beta_i``
    and ``k = 2^(n-3-i)``; ``exact_power=False`` uses ``k = 1`` throughout.
    """
    if n == 1:
        return ONE
    qq = _q(q)
    seq = aux_sequence(n - 1, q)
    out = ONE
    for i in range(n - 2):
        a, b = seq[i]
        k = (1 << (n - 3 - i)) if exact_power else 1
        out = out * det_Bn(n - 2 - i, q) * ((qq - 1) * a + b) ** k
    a, b = seq[n - 2]
    return out * ((qq - 1) * a + b)


def det_An_closed_form(n: int) -> RatFunc:
    """``|A_n|`` in closed form from the exact recurrence.

    With ``t_i = (-1)^(i+1) [i+2]_{-q}``:
    ``|A_n| = t_{n-2} prod_{i=0}^{n-3} t_i^(2^(n-3-i)) |B_{n-2-i}|``.
    """
    if n == 1:
        return ONE
    out = RatFunc(q_number(n, negate=True)) * (-1) ** (n - 1)
    for i in range(n - 2):
        t = RatFunc(q_number(i + 2, negate=True)) * (-1) ** (i + 1)
        out = out * t ** (1 << (n - 3 - i)) * det_Bn(n - 2 - i)
    return out


def recdet_check(n: int, a, b, q=None, exact_power: bool = True) -> bool:
    """``|a A_n + b B_{n-1}| = t^k |B_{n-2}| |t A_{n-1} + q a B_{n-2}|`` with ``t = (q-1)a + b``.

    Block elimination gives ``k = 2^(n-3)`` (the size of ``B_{n-2}``);
    ``exact_power=False`` checks the variant with ``k = 1``.
    """
    if n < 3:
        raise ValueError("recurrence needs n >= 3")
    qq = _q(q)
    a, b = as_ratfunc(a), as_ratfunc(b)
    lhs = det_bareiss(build_An(n, q).scale(a) + build_Bn(n - 1, q).scale(b))
    t = (qq - 1) * a + b
    inner = build_An(n - 1, q).scale(t) + build_Bn(n - 2, q).scale(qq * a)
    k = (1 << (n - 3)) if exact_power else 1
    rhs = t ** k * det_Bn(n - 2, q) * det_bareiss(inner)
    return lhs == rhs


def det_formula_check(n: int, interpolation: bool = True) -> dict:
    """Compare ``|A_n|`` with ``(-1)^(n(n-1)/2) [n]_{-q}! prod_{i<=n-2} |B_i|``."""
    A = build_An(n)
    direct = det_bareiss(A)
    prod_B = ONE
    for i in range(1, n - 1):
        prod_B = prod_B * det_Bn(i)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    formula = RatFunc(q_factorial(n, negate=True)) * prod_B * sign
    report = {
        "n": n,
        "det_A": str(direct),
        "formula": str(formula),
        "formula_ok": direct == formula,
        "exact_recurrence_ok": det_An_recurrence(n) == direct,
        "closed_form_ok": det_An_closed_form(n) == direct,
    }
    qq = Q
    aux_ok = True
    for i, (a, b) in enumerate(aux_sequence(n + 1)):
        lhs = (qq - 1) * a + b
        rhs = RatFunc(q_number(i + 2, negate=True)) * (-1) ** (i + 1)
        closed = (qq ** (i + 2) - (-1) ** (i + 2)) / (qq + 1)
        aux_ok = aux_ok and lhs == rhs == closed
    report["aux_sequence_ok"] = aux_ok
    if interpolation:
        report["interpolation_ok"] = det_interpolation(A) == direct
    report["ok"] = all(v for k, v in report.items() if k.endswith("_ok"))
    return report


# -- inversion ----------------------------------------------------------------------

def invert(M: QMatrix, q_value=None) -> QMatrix:
    """Gauss-Jordan inverse over Q(q)."""
    n = M.dim
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M.entries)]
    for k in range(n):
        piv_row = None
        best = None
        for i in range(k, n):
            x = a[i][k]
            if x:
                size = x.num.degree + x.den.degree
                if best is None or size < best:
                    piv_row, best = i, size
        if piv_row is None:
            where = f" at q = {q_value}" if q_value is not None else ""
            raise SingularMatrixError(f"matrix is singular{where}")
        a[k], a[piv_row] = a[piv_row], a[k]
        inv_p = ONE / a[k][k]
        a[k] = [x * inv_p if x else x for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                row_k = a[k]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], row_k)]
    return QMatrix([r[n:] for r in a], M.labels)


@lru_cache(maxsize=None)
def invert_Bn(n: int, q=None) -> QMatrix:
    """Inverse of ``B_n``; row ``J`` expresses ``eta^(q)_J`` over the ``L^(q)_I``."""
    qv = None
    if q is not None:
        qv = as_ratfunc(q)
        qv = qv.constant_value() if qv.is_constant() else qv
    return invert(build_Bn(n, q), qv)


# -- basis theorem evidence -------------------------------------------------------------

@lru_cache(maxsize=None)
def lq_to_M_matrix(n: int, q=None) -> QMatrix:
    """Row ``I``: coefficients of ``L^(q)_I`` on ``M_K`` (K by merge-set rank)."""
    labels = subsets_revlex(n)
    rows = []
    for I in labels:
        elem = L_q_set(I, q)
        row = [ZERO] * len(labels)
        for alpha, c in elem.terms.items():
            row[merge_index(alpha).rank] = c
        rows.append(row)
    return QMatrix(rows, labels)


def factor_report(f: RatFunc, n: int) -> dict:
    """Trial-divide by ``[k]_{-q}`` (k = n..2) and ``q+1``; report what remains."""
    f = as_ratfunc(f)
    if not f.is_poly():
        raise ValueError("factor report expects a polynomial")
    rest = f.num
    exps = {}
    factors = [(f"[{k}]_(-q)", q_number(k, negate=True)) for k in range(n, 1, -1)]
    factors.append(("q+1", IntPoly((1, 1))))
    for name, p in factors:
        e = 0
        while rest and p.divides(rest):
            rest = rest.divmod_exact(p)
            e += 1
        if e:
            exps[name] = e
    return {
        "exponents": exps,
        "residual": str(rest),
        "unit_residual": rest in (IntPoly.const(1), IntPoly.const(-1)),
    }


def basis_evidence(n: int, samples: Iterable = (2, -2, Fraction(3, 2), Fraction(-1, 2))) -> dict:
    """Determinant of the full ``L^(q) -> M`` transition in degree ``n`` and its specializations."""
    T = lq_to_M_matrix(n)
    d = det_bareiss(T)
    # det T = det B_n * prod over J of (q+1)^(n-|J|)
    expected = det_Bn(n)
    for J in subsets_revlex(n):
        expected = expected * (Q + 1) ** (n - len(J))
    factors = factor_report(d, n)
    at = {}
    for x in samples:
        at[str(Fraction(x))] = str(eval_at(d, x))
    report = {
        "n": n,
        "det": str(d),
        "product_of_blocks_ok": d == expected,
        "factors": factors,
        "values": at,
        "nonzero_at_samples": all(eval_at(d, x) != 0 for x in samples if Fraction(x) not in (1, -1)),
        "zero_at_q=1": eval_at(d, 1) == 0,
        "zero_at_q=-1": eval_at(d, -1) == 0,
    }
    report["ok"] = (
        report["product_of_blocks_ok"]
        and factors["unit_residual"]
        and report["nonzero_at_samples"]
        and report["zero_at_q=-1"]
        and (report["zero_at_q=1"] or n < 2)
    )
    return report
