"""Sparse multivariate polynomials over Q in the matrix coordinates a[i,j], b[i,j].

A variable is packed into one integer ``block * 10000 + i * 100 + j`` with
block 0 for ``a``, 1 for ``b`` and 2 for the curve parameter ``t``; integer
order then coincides with the lexicographic coordinate order
a11, ..., amm, b11, ..., bmm.  A monomial is a sorted tuple of
``(variable, exponent)`` pairs.  Coefficients are ``int`` when integral and
``Fraction`` otherwise.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import DimensionError, UndefinedInputError

Monomial = tuple  # tuple[tuple[int, int], ...]
Number = Union[int, Fraction]

BLOCKS = "abt"
T_VAR = 20000


def var_code(block: str, i: int, j: int) -> int:
    return BLOCKS.index(block) * 10000 + i * 100 + j


def var_parts(code: int) -> tuple[str, int, int]:
    block, rest = divmod(code, 10000)
    return BLOCKS[block], rest // 100, rest % 100


def var_name(code: int) -> str:
    if code == T_VAR:
        return "t"
    block, i, j = var_parts(code)
    return f"{block}[{i},{j}]"


def full_variables(m: int) -> tuple[int, ...]:
    """The 2m^2 coordinates of V in lexicographic order."""
    return tuple(var_code(bl, i, j) for bl in "ab" for i in range(1, m + 1) for j in range(1, m + 1))


def _norm(c) -> Number:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_deg(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def _lex_key(mono: Monomial):
    return tuple((v, -e) for v, e in mono) + ((1 << 30, 0),)


class Polynomial:
    """Immutable sparse polynomial; equality is equality of term maps."""

    __slots__ = ("terms", "m", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None, m: int | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _norm(c)
                if c:
                    clean[mono] = c
        self.terms = clean
        self.m = m
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, m: int | None = None) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.m = m
        obj._hash = None
        return obj

    # --- constructors -------------------------------------------------
    @classmethod
    def var(cls, block: str, i: int, j: int, m: int | None = None) -> "Polynomial":
        return cls._raw({((var_code(block, i, j), 1),): 1}, m)

    @classmethod
    def from_code(cls, code: int, m: int | None = None) -> "Polynomial":
        return cls._raw({((code, 1),): 1}, m)

    @classmethod
    def const(cls, c, m: int | None = None) -> "Polynomial":
        c = _norm(c)
        return cls._raw({(): c} if c else {}, m)

    @classmethod
    def zero(cls, m: int | None = None) -> "Polynomial":
        return cls._raw({}, m)

    # --- basic queries ------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _m(self, other=None) -> int | None:
        if isinstance(other, Polynomial) and other.m is not None:
            return other.m if self.m is None else max(self.m, other.m)
        return self.m

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(_mono_deg(mn) for mn in self.terms)

    def lowest_degree(self) -> int:
        if not self.terms:
            return -1
        return min(_mono_deg(mn) for mn in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {_mono_deg(mn) for mn in self.terms}
        return len(degs) <= 1

    def variables(self) -> set[int]:
        return {v for mn in self.terms for v, _ in mn}

    def constant_term(self) -> Number:
        return self.terms.get((), 0)

    def coefficient(self, mono: Monomial) -> Number:
        return self.terms.get(mono, 0)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({mn: c for mn, c in self.terms.items() if _mono_deg(mn) == d}, self.m)

    def lowest_degree_part(self) -> "Polynomial":
        """Sum of the terms of minimal total degree."""
        if not self.terms:
            raise UndefinedInputError("lowest degree part of the zero polynomial")
        return self.homogeneous_part(self.lowest_degree())

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for mn, c in small.items():
            s = out.get(mn, 0) + c
            if s:
                out[mn] = _norm(s)
            else:
                out.pop(mn, None)
        return Polynomial._raw(out, self._m(other))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({mn: -c for mn, c in self.terms.items()}, self.m)

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = _norm(other)
            if not c:
                return Polynomial._raw({}, self.m)
            return Polynomial._raw({mn: _norm(c * v) for mn, v in self.terms.items()}, self.m)
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mn = _mono_mul(m1, m2)
                out[mn] = get(mn, 0) + c1 * c2
        return Polynomial({mn: c for mn, c in out.items() if c}, self._m(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # --- calculus and evaluation -------------------------------------
    def diff(self, code: int) -> "Polynomial":
        out = {}
        for mn, c in self.terms.items():
            for idx, (v, e) in enumerate(mn):
                if v == code:
                    rest = mn[:idx] + (((v, e - 1),) if e > 1 else ()) + mn[idx + 1:]
                    out[rest] = out.get(rest, 0) + c * e
                    break
        return Polynomial(out, self.m)

    def evaluate(self, values: Mapping[int, Number]) -> Number:
        """Exact value at a point given as ``{variable code: value}`` (missing = 0)."""
        total = 0
        get = values.get
        for mn, c in self.terms.items():
            t = c
            for v, e in mn:
                x = get(v, 0)
                if not x:
                    t = 0
                    break
                t = t * (x if e == 1 else x ** e)
            if t:
                total += t
        return _norm(total)

    def gradient(self, values: Mapping[int, Number]) -> dict[int, Number]:
        """Partial derivatives at a point, as a sparse map variable -> value."""
        grad: dict[int, Number] = {}
        get = values.get
        for mn, c in self.terms.items():
            xs = [get(v, 0) for v, _ in mn]
            zeros = [k for k, x in enumerate(xs) if not x]
            if len(zeros) > 1:
                continue
            for k, (v, e) in enumerate(mn):
                if zeros and zeros[0] != k:
                    continue
                if e > 1 and not xs[k]:
                    continue
                t = c * e
                for l, (w, f) in enumerate(mn):
                    p = f - 1 if l == k else f
                    if p:
                        t = t * (xs[l] if p == 1 else xs[l] ** p)
                if t:
                    grad[v] = grad.get(v, 0) + t
        return {v: _norm(x) for v, x in grad.items() if x}

    def substitute(self, mapping: Mapping[int, "Polynomial | Number"]) -> "Polynomial":
        """Replace variables by polynomials or numbers; unmapped variables stay."""
        powers: dict = {}
        out = Polynomial.zero(self.m)
        acc: dict = {}
        for mn, c in self.terms.items():
            term = None
            keep = []
            for v, e in mn:
                if v in mapping:
                    key = (v, e)
                    p = powers.get(key)
                    if p is None:
                        val = mapping[v]
                        if not isinstance(val, Polynomial):
                            val = Polynomial.const(val)
                        p = val ** e
                        powers[key] = p
                    term = p if term is None else term * p
                else:
                    keep.append((v, e))
            kept = tuple(keep)
            if term is None:
                acc[kept] = acc.get(kept, 0) + c
                continue
            if not term:
                continue
            for mn2, c2 in term.terms.items():
                mm = _mono_mul(kept, mn2)
                acc[mm] = acc.get(mm, 0) + c * c2
        out = Polynomial(acc, self.m)
        return out

    # --- text form ----------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, Number]]:
        """Terms by descending total degree, then lexicographically descending."""
        return sorted(self.terms.items(), key=lambda t: (-_mono_deg(t[0]), _lex_key(t[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (mn, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in mn)
            if not factors:
                body = str(a)
            elif a == 1:
                body = factors
            else:
                body = f"{a}*{factors}"
            if idx == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    @classmethod
    def from_text(cls, text: str, m: int | None = None) -> "Polynomial":
        return parse_polynomial(text, m)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(r"^(?:([ab])\[(\d+),(\d+)\]|(t))(?:\^(\d+))?$")
_NUM_RE = re.compile(r"^\d+(?:/\d+)?$")


def parse_polynomial(text: str, m: int | None = None) -> Polynomial:
    """Parse the signed-sum text form produced by :meth:`Polynomial.to_text`."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Polynomial.zero(m)
    acc: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        mt = _TERM_RE.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, body = mt.group(1), mt.group(2).strip()
        if sign is None and not first:
            raise ValueError("missing sign between terms")
        first = False
        pos = mt.end()
        coeff: Number = 1
        mono: Monomial = ()
        for k, tok in enumerate(body.split("*")):
            tok = tok.strip()
            if k == 0 and _NUM_RE.match(tok):
                coeff = _norm(Fraction(tok))
                continue
            f = _FACTOR_RE.match(tok)
            if not f:
                raise ValueError(f"bad factor {tok!r}")
            code = T_VAR if f.group(4) else var_code(f.group(1), int(f.group(2)), int(f.group(3)))
            e = int(f.group(5)) if f.group(5) else 1
            mono = _mono_mul(mono, ((code, e),))
        if sign == "-":
            coeff = -coeff
        acc[mono] = acc.get(mono, 0) + coeff
    return Polynomial(acc, m)


def a(i: int, j: int, m: int | None = None) -> Polynomial:
    return Polynomial.var("a", i, j, m)


def b(i: int, j: int, m: int | None = None) -> Polynomial:
    return Polynomial.var("b", i, j, m)


def t_var() -> Polynomial:
    return Polynomial.from_code(T_VAR)


def lowest_degree_part(p: Polynomial) -> Polynomial:
    return p.lowest_degree_part()


# ---------------------------------------------------------------------------
# products of shared factors


class ProductSum:
    """A polynomial kept as ``sum_k c_k * prod_i f_ki ** e_ki``.

    Large determinantal generators share their factors (minors) across many
    generators; keeping them factored makes evaluation and Jacobians cheap
    while :meth:`expand` still yields the plain :class:`Polynomial`.
    """

    __slots__ = ("terms", "_expanded")

    def __init__(self, terms: Iterable[tuple[Number, Sequence[tuple[Polynomial, int]]]]):
        self.terms = tuple((_norm(c), tuple((f, e) for f, e in fs if e)) for c, fs in terms if c)
        self._expanded = None

    @classmethod
    def of(cls, p: Polynomial) -> "ProductSum":
        return cls([(1, [(p, 1)])])

    def expand(self) -> Polynomial:
        if self._expanded is None:
            total = Polynomial.zero()
            for c, fs in self.terms:
                prod = Polynomial.const(c)
                for f, e in fs:
                    prod = prod * (f if e == 1 else f ** e)
                    if not prod:
                        break
                total = total + prod
            self._expanded = total
        return self._expanded

    def degree(self) -> int:
        degs = [sum(f.degree() * e for f, e in fs) for c, fs in self.terms]
        return max(degs) if degs else -1

    def evaluate(self, values: Mapping[int, Number], cache: dict | None = None) -> Number:
        if self._expanded is not None and cache is None and len(self._expanded) < 8:
            return self._expanded.evaluate(values)
        cache = {} if cache is None else cache
        total = 0
        for c, fs in self.terms:
            t = c
            for f, e in fs:
                key = id(f)
                if key not in cache:
                    cache[key] = (f, f.evaluate(values), None)
                x = cache[key][1]
                t = t * x ** e
                if not t:
                    break
            total += t
        return _norm(total)

    def gradient(self, values: Mapping[int, Number], cache: dict | None = None) -> dict[int, Number]:
        cache = {} if cache is None else cache
        grad: dict[int, Number] = {}
        for c, fs in self.terms:
            vals = []
            grads = []
            for f, e in fs:
                key = id(f)
                entry = cache.get(key)
                if entry is None or entry[2] is None:
                    val = entry[1] if entry is not None else f.evaluate(values)
                    entry = (f, val, f.gradient(values))
                    cache[key] = entry
                vals.append(entry[1])
                grads.append(entry[2])
            for k, (f, e) in enumerate(fs):
                if not grads[k]:
                    continue
                coef = c * e * (vals[k] ** (e - 1) if e > 1 else 1)
                if not coef:
                    continue
                for l, (g, el) in enumerate(fs):
                    if l != k:
                        coef = coef * vals[l] ** el
                        if not coef:
                            break
                if not coef:
                    continue
                for v, d in grads[k].items():
                    grad[v] = grad.get(v, 0) + coef * d
        return {v: _norm(x) for v, x in grad.items() if x}

    def substitute(self, mapping: Mapping[int, "Polynomial | Number"]) -> "ProductSum":
        memo: dict = {}
        terms = []
        for c, fs in self.terms:
            new = []
            for f, e in fs:
                g = memo.get(id(f))
                if g is None:
                    g = f.substitute(mapping)
                    memo[id(f)] = g
                new.append((g, e))
            terms.append((c, new))
        return ProductSum(terms)

    def lowest_degree_part(self) -> Polynomial:
        """Lowest homogeneous part, expanding only the lowest parts of factors.

        Falls back to full expansion if the lowest parts cancel.
        """
        parts = []
        for c, fs in self.terms:
            if any(not f for f, _ in fs):
                continue
            low = [(f.lowest_degree_part(), e) for f, e in fs]
            deg = sum(p.degree() * e for p, e in low)
            parts.append((deg, c, low))
        if not parts:
            raise UndefinedInputError("lowest degree part of the zero polynomial")
        dmin = min(d for d, _, _ in parts)
        total = Polynomial.zero()
        for d, c, low in parts:
            if d != dmin:
                continue
            prod = Polynomial.const(c)
            for p, e in low:
                prod = prod * (p ** e if e > 1 else p)
            total = total + prod
        if total:
            return total
        return self.expand().lowest_degree_part()


def as_product_sum(p) -> ProductSum:
    return p if isinstance(p, ProductSum) else ProductSum.of(p)


def point_values(x: Sequence, variables: Sequence[int]) -> dict[int, Number]:
    if len(x) != len(variables):
        raise DimensionError(f"point has {len(x)} coordinates, expected {len(variables)}")
    return {v: _norm(val) for v, val in zip(variables, x) if val}


def jacobian_at(eqs: Sequence, x: Sequence, variables: Sequence[int] | None = None):
    """Exact Jacobian of ``eqs`` at ``x``.

    ``x`` lists coordinates in the order of ``variables``; by default the
    2m^2 lexicographic coordinates of V, with m read off ``len(x)``.
    """
    from .exact import Matrix

    if variables is None:
        m2 = len(x) // 2
        m = int(round(m2 ** 0.5))
        if 2 * m * m != len(x) or m < 1:
            raise DimensionError(f"{len(x)} coordinates is not 2m^2 for any m")
        variables = full_variables(m)
    variables = tuple(variables)
    index = {v: k for k, v in enumerate(variables)}
    values = point_values(x, variables)
    cache: dict = {}
    rows = []
    for eq in eqs:
        ps = as_product_sum(eq)
        grad = ps.gradient(values, cache)
        row = [0] * len(variables)
        for v, d in grad.items():
            if v not in index:
                raise DimensionError(f"variable {var_name(v)} is not a coordinate of the point")
            row[index[v]] = d
        rows.append(row)
    if not rows:
        return Matrix.zeros(0, len(variables))
    return Matrix(rows)
