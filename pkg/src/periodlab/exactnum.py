"""Exact arithmetic and linear algebra.

Three coefficient fields are supported by the elimination routines:

* the rationals, as :class:`fractions.Fraction`;
* the rational function field ``Q(t_1, ..., t_m)``, as :class:`ModelFieldElement`;
* prime fields ``F_p``, as plain integers reduced mod ``p`` (pass ``p=``).

There is no floating point anywhere in here.
"""

from __future__ import annotations

import re

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np
import sympy
from sympy import QQ
from sympy.polys.fields import FracField

Rational = Fraction


class CapacityError(ValueError):
    """A computation would exceed the documented size limits."""

_RATIONAL = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"``, ``"a"`` or an int into a Fraction; floats are refused."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        if not _RATIONAL.match(text.strip()):
            raise ValueError(f"{text!r} is not of the form a or a/b")
        return Fraction(text.strip())
    raise TypeError(f"cannot read {text!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Q(t_1, ..., t_m)


class ModelField:
    """The field ``Q(t_1, ..., t_m)`` on a fixed, ordered tuple of variable names."""

    def __init__(self, names: tuple[str, ...]):
        if not names:
            raise ValueError("a model field needs at least one variable")
        self.names = tuple(names)
        self._symbols = tuple(sympy.Symbol(n) for n in self.names)
        self._K = FracField(self._symbols, QQ)

    def __repr__(self):
        return f"ModelField({', '.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, ModelField) and other.names == self.names

    def __hash__(self):
        return hash(("ModelField", self.names))

    @property
    def gens(self) -> tuple[ModelFieldElement, ...]:
        return tuple(ModelFieldElement(g) for g in self._K.gens)

    @property
    def zero(self) -> ModelFieldElement:
        return ModelFieldElement(self._K.zero)

    @property
    def one(self) -> ModelFieldElement:
        return ModelFieldElement(self._K.one)

    def __call__(self, value) -> ModelFieldElement:
        if isinstance(value, ModelFieldElement):
            if value.field != self:
                raise ValueError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, int):
            return ModelFieldElement(self._K(value))
        if isinstance(value, Fraction):
            return ModelFieldElement(self._K(QQ(value.numerator, value.denominator)))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} into {self}")

    def parse(self, text: str) -> ModelFieldElement:
        if "." in text:
            raise ValueError(f"{text!r} is not exact")
        local = dict(zip(self.names, self._symbols))
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ValueError(f"unreadable field element {text!r}") from exc
        stray = {str(s) for s in expr.free_symbols} - set(self.names)
        if stray:
            raise ValueError(f"{text!r} uses variables {sorted(stray)} outside {self.names}")
        if expr.has(sympy.Float):
            raise ValueError(f"{text!r} is not exact")
        return ModelFieldElement(self._K.from_expr(expr))


@lru_cache(maxsize=None)
def model_field(*names: str) -> ModelField:
    """Shared field object for a variable tuple, so elements compare across calls."""
    return ModelField(tuple(names or ("t",)))


def variables_in(texts: Iterable[str]) -> tuple[str, ...]:
    """Sorted variable names occurring in a collection of element strings."""
    found: set[str] = set()
    for text in texts:
        expr = sympy.sympify(str(text).replace("^", "**"), rational=True)
        found |= {str(s) for s in expr.free_symbols}
    return tuple(sorted(found))


class ModelFieldElement:
    """An element of ``Q(t_1, ..., t_m)``, kept as a reduced fraction of polynomials.

    Equality is exact. Arithmetic with ints and Fractions coerces them into
    the field; mixing elements of two different fields raises ``ValueError``.
    """

    __slots__ = ("_f",)

    def __init__(self, f):
        self._f = f

    @property
    def field(self) -> ModelField:
        return model_field(*(str(s) for s in self._f.field.symbols))

    def _coerce(self, other):
        if isinstance(other, ModelFieldElement):
            if other._f.field != self._f.field:
                raise ValueError("elements live over different variable sets")
            return other._f
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return self._f.field(other)
        if isinstance(other, Fraction):
            return self._f.field(QQ(other.numerator, other.denominator))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModelFieldElement(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModelFieldElement(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModelFieldElement(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModelFieldElement(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero in model field")
        return ModelFieldElement(self._f / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self._f:
            raise ZeroDivisionError("division by zero in model field")
        return ModelFieldElement(o / self._f)

    def __neg__(self):
        return ModelFieldElement(-self._f)

    def __pow__(self, k: int):
        return ModelFieldElement(self._f**k)

    def __bool__(self):
        return bool(self._f)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._f == o

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self._f)

    def __repr__(self):
        return f"ModelFieldElement({self})"

    def __str__(self):
        return str(self._f.as_expr()).replace(" ", "")

    def is_constant(self) -> bool:
        return self._f.numer.is_ground and self._f.denom.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        q = QQ.convert(self._f.numer.LC) / QQ.convert(self._f.denom.LC)
        return Fraction(int(q.numerator), int(q.denominator))

    def numerator_denominator(self):
        """The reduced numerator and denominator as sympy ring elements."""
        return self._f.numer, self._f.denom


def _mpq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _grlex_key(mono: tuple[int, ...]):
    return (sum(mono), mono)


def cleared_numerators(values: Sequence) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
    """Multiply all inputs by one common polynomial denominator.

    Returns the occurring monomials in ascending graded-lex order and, for each
    input, its numerator's coefficients on those monomials.
    """
    fields = {v.field for v in values if isinstance(v, ModelFieldElement)}
    if len(fields) > 1:
        raise ValueError(f"inputs over mismatched variable sets: {sorted(f.names for f in fields)}")
    field = fields.pop() if fields else model_field()
    elems = [field(v) for v in values]
    denom = field._K.ring.one
    for e in elems:
        denom = denom.lcm(e._f.denom)
    polys = [e._f.numer * denom.exquo(e._f.denom) for e in elems]
    monos = sorted({m for p in polys for m in p.keys()}, key=_grlex_key)
    if not monos:
        monos = [(0,) * len(field.names)]
    rows = [[_mpq(p.get(m, QQ.zero)) for m in monos] for p in polys]
    return monos, rows


def coefficient_matrix(values: Sequence) -> list[list[Fraction]]:
    """Rational coefficient rows of the cleared numerators of ``values``.

    The rows are Q-linearly dependent exactly when the inputs are.
    """
    return cleared_numerators(values)[1]


# ---------------------------------------------------------------------------
# elimination


def _is_zero(x, p):
    return (x % p == 0) if p is not None else not x


def rref(rows: Sequence[Sequence], ncols: int | None = None, *, p: int | None = None):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``.

    Entries may be Fractions, ints, or ModelFieldElements; with ``p`` given
    they are integers interpreted mod ``p``.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if p is not None:
        m = [[int(x) % p for x in r] for r in m]
    else:
        m = [[x if isinstance(x, ModelFieldElement) else Fraction(x) for x in r] for r in m]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if not _is_zero(m[i][c], p)), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if p is not None:
            inv = pow(m[r][c], -1, p)
            m[r] = [(x * inv) % p for x in m[r]]
        else:
            lead = m[r][c]
            m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c], p):
                f = m[i][c]
                if p is not None:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
                else:
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def kernel_from_rref(reduced, pivots, ncols: int, *, p: int | None = None):
    """Kernel basis: one vector per free column, equal to 1 there and 0 at other free columns."""
    one, zero = (1, 0) if p is not None else (Fraction(1), Fraction(0))
    sample = next((x for r in reduced for x in r if isinstance(x, ModelFieldElement)), None)
    if sample is not None:
        one, zero = sample.field.one, sample.field.zero
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(reduced, pivots):
            v[pc] = (-row[f]) % p if p is not None else -row[f]
        basis.append(v)
    return basis


def rref_rank_kernel(rows: Sequence[Sequence], ncols: int | None = None, *, p: int | None = None):
    """Rank and right kernel of a matrix over Q, Q(t...) or F_p.

    >>> rref_rank_kernel([[1, 2], [2, 4]])
    (1, [[Fraction(-2, 1), Fraction(1, 1)]])
    """
    if ncols is None:
        ncols = len(rows[0]) if len(rows) else 0
    if p is not None and len(rows):
        reduced, pivots = rref_mod_p(np.asarray(rows, dtype=np.int64), p)
        reduced = [[int(x) for x in r] for r in reduced]
    else:
        reduced, pivots = rref(rows, ncols, p=p)
    return len(pivots), kernel_from_rref(reduced, pivots, ncols, p=p)


def rank(rows: Sequence[Sequence], *, p: int | None = None) -> int:
    if p is not None:
        a = np.asarray(rows, dtype=np.int64)
        return rank_mod_p(a, p) if a.size else 0
    return len(rref(rows)[1])


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*rows)]


def rref_mod_p(a: np.ndarray, p: int):
    """Vectorised reduced echelon form over F_p for integer arrays."""
    if p < 2 or p > 46340:
        raise ValueError("modulus must be a prime below 46341 (int64 products)")
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        rows_to_fix = np.nonzero(col)[0]
        if rows_to_fix.size:
            m[rows_to_fix] = (m[rows_to_fix] - np.outer(col[rows_to_fix], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank over F_p by forward elimination on a shrinking block."""
    m = np.array(a, dtype=np.int64) % p
    if m.shape[0] > m.shape[1]:
        m = m.T.copy()
    r = 0
    for c in range(m.shape[1]):
        if r == m.shape[0]:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv], c:] = m[[piv, r], c:]
        m[r, c:] = (m[r, c:] * pow(int(m[r, c]), -1, p)) % p
        below = r + 1 + np.nonzero(m[r + 1:, c])[0]
        if below.size:
            m[below, c:] = (m[below, c:] - np.outer(m[below, c], m[r, c:])) % p
        r += 1
    return r


# ---------------------------------------------------------------------------
# small finite fields F_q, q = p^f


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1:
                break
            return p, f
    raise ValueError(f"{q} is not a prime power")


class FiniteField:
    """Table-driven ``F_q`` for small prime powers ``q``.

    Elements are the integers ``0..q-1``: the base-``p`` digits of an element
    are its coefficients on ``1, x, ..., x^(f-1)`` modulo a fixed irreducible
    polynomial.
    """

    def __init__(self, q: int):
        if q < 2:
            raise ValueError(f"{q} is not a prime power")
        p, f = _prime_power(q)
        self.q, self.p, self.degree = q, p, f
        self.modulus = self._find_irreducible() if f > 1 else None
        self.add = [[self._add(a, b) for b in range(q)] for a in range(q)]
        self.mul = [[self._mul(a, b) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [None] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]

    def __repr__(self):
        return f"FiniteField({self.q})"

    def _digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.degree)]

    def _number(self, digits):
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _add(self, a, b):
        return self._number([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _polymul(self, u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] = (out[i + j] + x * y) % self.p
        return out

    def _reduce(self, poly, modulus):
        poly = list(poly)
        deg = len(modulus) - 1
        for i in range(len(poly) - 1, deg - 1, -1):
            c = poly[i]
            if c:
                for j in range(deg + 1):
                    poly[i - deg + j] = (poly[i - deg + j] - c * modulus[j]) % self.p
        return (poly + [0] * deg)[:deg]

    def _find_irreducible(self):
        f, p = self.degree, self.p
        for tail in product(range(p), repeat=f):
            modulus = list(tail) + [1]
            if modulus[0] and self._irreducible(modulus):
                return modulus
        raise RuntimeError("no irreducible polynomial found")

    def _irreducible(self, modulus):
        deg = len(modulus) - 1
        for d in range(1, deg // 2 + 1):
            for tail in product(range(self.p), repeat=d):
                if not any(self._reduce(modulus, list(tail) + [1])):
                    return False
        return True

    def _mul(self, a, b):
        prod_ = self._polymul(self._digits(a), self._digits(b))
        if self.modulus is None:
            return prod_[0] % self.p
        return self._number(self._reduce(prod_, self.modulus))

    def elements(self) -> range:
        return range(self.q)
