"""Sparse multivariate polynomials over the rationals.

Coefficients are ``gmpy2.mpq`` values.  A monomial is stored as a single
packed integer: the total degree sits in the top 32-bit field and the
exponent of ``x_1`` .. ``x_n`` in the fields below it, ``x_1`` most
significant.  Multiplying monomials is then integer addition, and sorting
packed keys sorts by total degree first.
"""

from __future__ import annotations

import functools
from typing import Iterable, Iterator, Mapping, Sequence

import gmpy2

Scalar = type(gmpy2.mpq())

FIELD_BITS = 32
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_DEGREE = FIELD_MASK


class ArityError(ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class DegreeOverflowError(OverflowError):
    pass


class _MinusInfinity:
    """Degree of the zero polynomial.

    Compares below every integer but refuses arithmetic, so a zero degree
    can never leak silently into a computed bound.
    """

    __slots__ = ()

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"

    def _no_arith(self, other):
        raise TypeError("the degree of the zero polynomial supports no arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arith


NEG_INF = _MinusInfinity()


def scalar(value) -> Scalar:
    """Coerce an int, str ``"a/b"``, Fraction or mpq into an exact rational."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return gmpy2.mpq(value)


ZERO = scalar(0)
ONE = scalar(1)


def format_scalar(c: Scalar) -> str:
    return str(c)


# -- monomial packing -------------------------------------------------------

def _shift(nvars: int, j: int) -> int:
    return FIELD_BITS * (nvars - 1 - j)


def pack(exps: Sequence[int]) -> int:
    n = len(exps)
    key = 0
    deg = 0
    for e in exps:
        if e < 0:
            raise ValueError("negative exponent")
        deg += e
        key = (key << FIELD_BITS) | e
    if deg > MAX_DEGREE:
        raise DegreeOverflowError(f"total degree {deg} exceeds 32-bit exponent fields")
    return (deg << (FIELD_BITS * n)) | key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for j in range(nvars - 1, -1, -1):
        out[j] = key & FIELD_MASK
        key >>= FIELD_BITS
    return tuple(out)


def key_degree(key: int, nvars: int) -> int:
    return key >> (FIELD_BITS * nvars)


@functools.lru_cache(maxsize=None)
def _unit_key(nvars: int, j: int) -> int:
    return (1 << (FIELD_BITS * nvars)) | (1 << _shift(nvars, j))


# -- the polynomial type ----------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[int, Scalar] | None = None):
        # ``terms`` maps packed keys to nonzero mpq values and is taken over
        # without copying; use the classmethods for untrusted input.
        if nvars < 0:
            raise ValueError("number of variables must be non-negative")
        self.nvars = nvars
        self._terms = {} if terms is None else terms
        self._hash = None

    # construction

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Sequence[int], object] | Iterable) -> "Polynomial":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Scalar] = {}
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ArityError(f"monomial {exps} does not have {nvars} exponents")
            k = pack(exps)
            acc[k] = acc.get(k, ZERO) + scalar(c)
        return cls(nvars, {k: c for k, c in acc.items() if c})

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = scalar(c)
        return cls(nvars, {0: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "Polynomial":
        """The coordinate ``x_{j+1}`` (``j`` is zero-based)."""
        if not 0 <= j < nvars:
            raise IndexError(f"variable index {j} out of range for {nvars} variables")
        return cls(nvars, {_unit_key(nvars, j): ONE})

    @classmethod
    def linear_form(cls, coeffs: Sequence, constant=0) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        c0 = scalar(constant)
        if c0:
            terms[0] = c0
        for j, a in enumerate(coeffs):
            a = scalar(a)
            if a:
                terms[_unit_key(n, j)] = a
        return cls(n, terms)

    # basic protocol

    def terms(self) -> Iterator[tuple[tuple[int, ...], Scalar]]:
        """(exponent tuple, coefficient) pairs in graded-lex printing order."""
        for k in self._sorted_keys():
            yield unpack(k, self.nvars), self._terms[k]

    def _sorted_keys(self) -> list[int]:
        n = self.nvars
        low = (1 << (FIELD_BITS * n)) - 1
        # ascending total degree; inside a degree, larger x1 exponent first
        return sorted(self._terms, key=lambda k: (k >> (FIELD_BITS * n), -(k & low)))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Scalar)):
            return self._terms == ({0: scalar(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self._terms.get(pack(exps), ZERO)

    def constant_term(self) -> Scalar:
        return self._terms.get(0, ZERO)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def variables(self) -> set[int]:
        """Zero-based indices of the variables that occur."""
        used = set()
        for k in self._terms:
            for j, e in enumerate(unpack(k, self.nvars)):
                if e:
                    used.add(j)
        return used

    # degree

    def degree(self):
        if not self._terms:
            return NEG_INF
        return key_degree(max(self._terms), self.nvars)

    def min_degree(self):
        if not self._terms:
            return NEG_INF
        return key_degree(min(self._terms), self.nvars)

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        n = self.nvars
        parts: dict[int, dict[int, Scalar]] = {}
        for k, c in self._terms.items():
            parts.setdefault(key_degree(k, n), {})[k] = c
        return {d: Polynomial(n, parts[d]) for d in sorted(parts)}

    def homogeneous_part(self, d: int) -> "Polynomial":
        n = self.nvars
        return Polynomial(n, {k: c for k, c in self._terms.items() if key_degree(k, n) == d})

    def is_homogeneous(self) -> bool:
        """True for the zero polynomial and for single-degree polynomials."""
        n = self.nvars
        return len({key_degree(k, n) for k in self._terms}) <= 1

    def truncate(self, maxdeg: int) -> "Polynomial":
        limit = (maxdeg + 1) << (FIELD_BITS * self.nvars)
        return Polynomial(self.nvars, {k: c for k, c in self._terms.items() if k < limit})

    # ring operations

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ArityError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return Polynomial.constant(self.nvars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = scalar(c)
        if not c:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.mul(other)
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                return NotImplemented
            other = other.constant_term()
        other = scalar(other)
        if not other:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(1 / other)

    def mul(self, other: "Polynomial", maxdeg: int | None = None) -> "Polynomial":
        """Product, optionally discarding every term of degree above ``maxdeg``."""
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Polynomial(self.nvars)
        n = self.nvars
        top = FIELD_BITS * n
        if maxdeg is None:
            if (max(a) >> top) + (max(b) >> top) > MAX_DEGREE:
                raise DegreeOverflowError("product degree exceeds 32-bit exponent fields")
        if len(a) < len(b):
            a, b = b, a
        acc: dict[int, Scalar] = {}
        get = acc.get
        if maxdeg is None:
            for kb, cb in b.items():
                for ka, ca in a.items():
                    k = ka + kb
                    acc[k] = get(k, ZERO) + ca * cb
        else:
            limit = (maxdeg + 1) << top
            a_sorted = sorted(a.items())
            for kb, cb in b.items():
                room = limit - kb
                for ka, ca in a_sorted:
                    if ka >= room:
                        break
                    k = ka + kb
                    acc[k] = get(k, ZERO) + ca * cb
        return Polynomial(n, {k: c for k, c in acc.items() if c})

    def __pow__(self, e: int, maxdeg: int | None = None) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1)
        if e == 0:
            return result
        if self._terms and maxdeg is None and self.degree() * e > MAX_DEGREE:
            raise DegreeOverflowError("power degree exceeds 32-bit exponent fields")
        if len(self._terms) == 1:
            (k, c), = self._terms.items()
            if maxdeg is not None and key_degree(k, self.nvars) * e > maxdeg:
                return Polynomial(self.nvars)
            return Polynomial(self.nvars, {k * e: c ** e})
        # repeated multiplication beats squaring for sparse inputs
        result = self
        for _ in range(e - 1):
            result = result.mul(self, maxdeg)
        return result

    def power(self, e: int, maxdeg: int | None = None) -> "Polynomial":
        return self.__pow__(e, maxdeg)

    # calculus and evaluation

    def diff(self, j: int) -> "Polynomial":
        """Partial derivative in ``x_{j+1}`` (``j`` zero-based)."""
        n = self.nvars
        if not 0 <= j < n:
            raise IndexError(f"variable index {j} out of range for {n} variables")
        sh = _shift(n, j)
        unit = _unit_key(n, j)
        out = {}
        for k, c in self._terms.items():
            e = (k >> sh) & FIELD_MASK
            if e:
                out[k - unit] = c * e
        return Polynomial(n, out)

    def evaluate(self, point: Sequence) -> Scalar:
        n = self.nvars
        if len(point) != n:
            raise ArityError(f"point has {len(point)} coordinates, polynomial has {n} variables")
        pt = [scalar(v) for v in point]
        total = ZERO
        powers: dict[tuple[int, int], Scalar] = {}
        for k, c in self._terms.items():
            v = c
            for j, e in enumerate(unpack(k, n)):
                if e:
                    p = powers.get((j, e))
                    if p is None:
                        p = powers[(j, e)] = pt[j] ** e
                    v *= p
            total += v
        return total

    def substitute(self, gs: Sequence["Polynomial"], maxdeg: int | None = None) -> "Polynomial":
        """Compose: replace ``x_j`` by ``gs[j]``.

        With ``maxdeg`` every intermediate product is truncated, which gives
        the truncation of the exact composition.
        """
        n = self.nvars
        if len(gs) != n:
            raise ArityError(f"{len(gs)} substitutes given for {n} variables")
        if n == 0:
            m = gs[0].nvars if gs else 0
            return Polynomial.constant(m, self.constant_term())
        m = gs[0].nvars
        for g in gs:
            if g.nvars != m:
                raise ArityError("substituted polynomials must share one arity")
        if not self._terms:
            return Polynomial(m)
        cache: dict[tuple[int, int], Polynomial] = {}

        def gpow(j: int, e: int) -> Polynomial:
            p = cache.get((j, e))
            if p is None:
                if e == 1:
                    p = gs[j] if maxdeg is None else gs[j].truncate(maxdeg)
                else:
                    p = gpow(j, e - 1).mul(gs[j], maxdeg)
                cache[(j, e)] = p
            return p

        # group by leading exponents, Horner-style over the variables
        def rec(items: list[tuple[tuple[int, ...], Scalar]], j: int) -> Polynomial:
            if j == n:
                c = ZERO
                for _, v in items:
                    c += v
                return Polynomial.constant(m, c)
            groups: dict[int, list] = {}
            for exps, c in items:
                groups.setdefault(exps[j], []).append((exps, c))
            acc = Polynomial(m)
            for e, sub in groups.items():
                inner = rec(sub, j + 1)
                if e:
                    inner = inner.mul(gpow(j, e), maxdeg)
                acc = acc + inner
            return acc

        items = [(unpack(k, n), c) for k, c in self._terms.items()]
        return rec(items, 0)

    def __call__(self, *args):
        if len(args) == 1 and isinstance(args[0], (list, tuple)):
            args = tuple(args[0])
        if args and all(isinstance(a, Polynomial) for a in args):
            return self.substitute(args)
        return self.evaluate(args)

    def extend(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Embed into ``nvars`` variables, old ``x_j`` becoming ``x_{j+offset}``."""
        if nvars < self.nvars + offset:
            raise ArityError("cannot embed into fewer variables")
        out = {}
        for k, c in self._terms.items():
            e = unpack(k, self.nvars)
            full = (0,) * offset + e + (0,) * (nvars - self.nvars - offset)
            out[pack(full)] = c
        return Polynomial(nvars, out)

    # rendering

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = default_names(self.nvars) if names is None else list(names)
        if len(names) != self.nvars:
            raise ArityError("wrong number of variable names")
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in self.terms():
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(exps) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_scalar(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_scalar(a)}*{mono}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)


def default_names(n: int) -> list[str]:
    return [f"x{j + 1}" for j in range(n)]


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.variable(n, j) for j in range(n)]


def linear_combination(coeffs: Sequence, polys: Sequence[Polynomial], nvars: int) -> Polynomial:
    """Sum of ``coeffs[j] * polys[j]`` with zero coefficients skipped."""
    acc: dict[int, Scalar] = {}
    get = acc.get
    for a, p in zip(coeffs, polys):
        a = scalar(a)
        if not a:
            continue
        for k, c in p._terms.items():
            acc[k] = get(k, ZERO) + a * c
    return Polynomial(nvars, {k: c for k, c in acc.items() if c})
