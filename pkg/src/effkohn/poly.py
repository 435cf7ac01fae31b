"""Exact sparse multivariate polynomials over the Gaussian rationals Q(i).

Coefficients are stored canonically: a purely real coefficient is a
``gmpy2.mpq`` and a coefficient with nonzero imaginary part is a
:class:`GaussianRational`.  Both compare and hash consistently, so a
polynomial's term table is a canonical value.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

INFINITY = math.inf

Exponent = tuple


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, pos: int = 0):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class RingMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficients


def _rat(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussianRational:
    """An exact element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _rat(re)
        self.im = _rat(im)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        p = parse_poly(text, ())
        c = p.constant_term()
        return c if isinstance(c, GaussianRational) else cls(c, 0)

    def conjugate(self):
        return _num(self.re, -self.im)

    def __add__(self, o):
        if isinstance(o, GaussianRational):
            return _num(self.re + o.re, self.im + o.im)
        return _num(self.re + o, self.im)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, GaussianRational):
            return _num(self.re - o.re, self.im - o.im)
        return _num(self.re - o, self.im)

    def __rsub__(self, o):
        return _num(o - self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, GaussianRational):
            return _num(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return _num(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, GaussianRational):
            n = o.re * o.re + o.im * o.im
            return _num((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)
        return _num(self.re / o, self.im / o)

    def __rtruediv__(self, o):
        n = self.re * self.re + self.im * self.im
        return _num(o * self.re / n, -o * self.im / n)

    def __neg__(self):
        return _num(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, GaussianRational):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction)) or type(o) is type(mpq(0)):
            return self.im == 0 and self.re == o
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_coeff(self)!r})"

    def __str__(self):
        return format_coeff(self)


def _num(re, im):
    """Canonical coefficient: mpq when real, GaussianRational otherwise."""
    if im == 0:
        return mpq(re)
    g = GaussianRational.__new__(GaussianRational)
    g.re = mpq(re)
    g.im = mpq(im)
    return g


def coerce_coeff(c):
    if isinstance(c, GaussianRational):
        return _num(c.re, c.im)
    if isinstance(c, complex):
        raise TypeError("floating point coefficients are not supported")
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not supported")
    return _rat(c)


def real_part(c) -> mpq:
    return c.re if isinstance(c, GaussianRational) else mpq(c)


def imag_part(c) -> mpq:
    return c.im if isinstance(c, GaussianRational) else mpq(0)


def _fmt_rat(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_coeff(c) -> str:
    re_, im_ = real_part(c), imag_part(c)
    if im_ == 0:
        return _fmt_rat(re_)
    sign = "-" if im_ < 0 else "+"
    return f"({_fmt_rat(re_)}{sign}{_fmt_rat(abs(im_))}i)"


# ---------------------------------------------------------------------------
# monomials


def grevlex_key(e: Exponent):
    """Sort key: larger key means larger monomial in graded reverse lex order."""
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exponent):
    return tuple(e)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of exactly the given total degree, descending grevlex."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    # stars and bars
    for bars in combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(degree + nvars - 1 - prev - 1)
        out.append(tuple(e))
    out.sort(key=grevlex_key, reverse=True)
    return out


# ---------------------------------------------------------------------------
# rings and polynomials


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Ring:
    """A polynomial ring Q(i)[names]; rings with equal names are equal."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for n in names:
            if not _IDENT.fullmatch(n) or n == "i":
                raise ValueError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self._index = {n: k for k, n in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def __call__(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = coerce_coeff(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, k: int) -> "Polynomial":
        e = [0] * self.nvars
        e[k] = 1
        return Polynomial(self, {tuple(e): mpq(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(k) for k in range(self.nvars)]

    def monomial(self, exp: Sequence[int], coeff=1) -> "Polynomial":
        coeff = coerce_coeff(coeff)
        return Polynomial(self, {tuple(exp): coeff} if coeff else {})

    def extend(self, extra: Iterable[str]) -> "Ring":
        return Ring(self.names + tuple(extra))

    def fresh_names(self, stem: str, count: int) -> list[str]:
        """``count`` variable names built from ``stem`` that do not clash with this ring."""
        out, k = [], 1
        while len(out) < count:
            cand = f"{stem}{k}"
            if cand not in self._index:
                out.append(cand)
            k += 1
        return out


class Polynomial:
    """Immutable sparse polynomial; the term table never stores a zero coefficient."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, object]):
        self.ring = ring
        self._terms = terms
        self._hash = None

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[Sequence[int], object]) -> "Polynomial":
        clean = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != ring.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {ring}")
            c = coerce_coeff(c)
            if c:
                clean[e] = c
        return cls(ring, clean)

    def _new(self, terms) -> "Polynomial":
        return Polynomial(self.ring, terms)

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self, key=grevlex_key) -> list[tuple[Exponent, object]]:
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.ring.nvars, mpq(0))

    def coefficient(self, exp: Sequence[int]):
        return self._terms.get(tuple(exp), mpq(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, k: int) -> int:
        if not self._terms:
            return -1
        return max(e[k] for e in self._terms)

    def variables(self) -> set[int]:
        out = set()
        for e in self._terms:
            out.update(k for k, x in enumerate(e) if x)
        return out

    def leading(self, key=grevlex_key) -> tuple[Exponent, object]:
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return self._new(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                s = get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return self._new({e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = coerce_coeff(c)
        if not c:
            return self.ring.zero()
        return self._new({e: v * c for e, v in self._terms.items()})

    def mul_term(self, exp: Exponent, c) -> "Polynomial":
        """Multiply by the single term c*x^exp."""
        if not c:
            return self.ring.zero()
        return self._new({_add_exp(e, exp): v * c for e, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            return divexact(self, c)
        c = coerce_coeff(c)
        return self.scale(1 / c if isinstance(c, GaussianRational) else mpq(1) / c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            other = coerce_coeff(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * self.ring.nvars: other} if other else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and normalisation --------------------------------------
    def diff(self, k: int) -> "Polynomial":
        if not 0 <= k < self.ring.nvars:
            raise IndexError(f"variable index {k} out of range")
        out = {}
        for e, c in self._terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return self._new(out)

    def monic(self) -> "Polynomial":
        """Scale so the grevlex-leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        _, c = self.leading()
        if c == 1:
            return self
        return self / c

    def compose(self, subs: Sequence["Polynomial"], ring: Ring | None = None) -> "Polynomial":
        """Substitute ``subs[k]`` for variable k; the result lives in ``subs``' ring."""
        if len(subs) != self.ring.nvars:
            raise ValueError("need one substitution per variable")
        target = ring or (subs[0].ring if subs else self.ring)
        powers: list[dict[int, Polynomial]] = [{0: target.one()} for _ in subs]

        def pw(k, n):
            cache = powers[k]
            if n not in cache:
                best = max(d for d in cache if d <= n)
                cur = cache[best]
                for d in range(best + 1, n + 1):
                    cur = cur * subs[k]
                    cache[d] = cur
            return cache[n]

        acc: dict = {}
        for e, c in self._terms.items():
            t = target.const(c)
            for k, x in enumerate(e):
                if x:
                    t = t * pw(k, x)
            for te, tc in t._terms.items():
                s = acc.get(te)
                acc[te] = tc if s is None else s + tc
        return Polynomial(target, {e: c for e, c in acc.items() if c})

    def embed(self, ring: Ring, positions: Sequence[int] | None = None) -> "Polynomial":
        """Re-express in ``ring``; variable k goes to ``positions[k]`` (default: by name)."""
        if positions is None:
            positions = [ring.index(n) for n in self.ring.names]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * ring.nvars
            for k, x in enumerate(e):
                if x:
                    ne[positions[k]] = x
            out[tuple(ne)] = c
        return Polynomial(ring, out)

    def evaluate(self, point: Sequence) -> object:
        total = mpq(0)
        for e, c in self._terms.items():
            t = c
            for x, v in zip(e, point):
                if x:
                    t = t * coerce_coeff(v) ** x
            total = total + t
        return total

    # -- printing -----------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, ring={self.ring.names})"


def format_poly(p: Polynomial) -> str:
    """Canonical text: terms in descending grevlex order, parseable by parse_poly."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (n if x == 1 else f"{n}^{x}") for n, x in zip(p.ring.names, e) if x
        )
        if isinstance(c, GaussianRational):
            body = format_coeff(c) + ("*" + mono if mono else "")
            parts.append(("+", body))
            continue
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
        else:
            body = _fmt_rat(a)
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            acc = acc * self.factor()
        return acc

    def rational(self) -> mpq:
        t = self.take()
        if t[0] != "num":
            raise ParseError(f"expected a number, found {t[1] or 'end of input'!r}", t[2])
        num = int(t[1])
        if self.peek()[1] == "/" and self.peek()[0] == "op":
            self.take()
            d = self.take()
            if d[0] != "num":
                raise ParseError("expected a denominator", d[2])
            den = int(d[1])
            if den == 0:
                raise ParseError("zero denominator", d[2])
            return mpq(num, den)
        return mpq(num)

    def _try_complex(self):
        # '(' [sign] rat ('+'|'-') rat 'i' ')'
        save = self.i
        try:
            self.expect("(")
            sign = 1
            if self.peek()[1] in "+-" and self.peek()[0] == "op":
                sign = -1 if self.take()[1] == "-" else 1
            re_ = sign * self.rational()
            op = self.take()
            if op[1] not in "+-" or op[0] != "op":
                raise ParseError("", op[2])
            im_ = self.rational()
            t = self.take()
            if t != ("id", "i", t[2]):
                raise ParseError("", t[2])
            self.expect(")")
        except ParseError as exc:
            if "zero denominator" in str(exc):
                raise
            self.i = save
            return None
        return _num(re_, im_ if op[1] == "+" else -im_)

    def factor(self) -> Polynomial:
        t = self.peek()
        if t[0] == "num":
            base = self.ring.const(self.rational())
        elif t[0] == "id":
            self.take()
            name = t[1]
            if name not in self.ring._index:
                raise ParseError(f"unknown variable {name!r}", t[2])
            base = self.ring.var(self.ring.index(name))
        elif t[1] == "(":
            c = self._try_complex()
            if c is not None:
                return self.ring.const(c)
            self.take()
            base = self.expr()
            self.expect(")")
        else:
            raise ParseError(f"unexpected token {t[1] or 'end of input'!r}", t[2])
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            n = self.take()
            if n[0] != "num":
                raise ParseError("expected a non-negative integer exponent", n[2])
            base = base ** int(n[1])
        return base


def parse_poly(text: str, ring) -> Polynomial:
    """Parse ``text`` into the canonical expanded polynomial of ``ring``.

    ``ring`` may be a :class:`Ring` or a sequence of variable names.
    """
    if not isinstance(ring, Ring):
        ring = Ring(ring)
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# derived operations


def partial_derivative(p: Polynomial, var: int) -> Polynomial:
    return p.diff(var)


def _det(matrix: list[list[Polynomial]], ring: Ring) -> Polynomial:
    k = len(matrix)
    memo: dict = {}

    # expansion along rows, memoised on the set of still-unused columns
    def minor(row: int, cols: tuple) -> Polynomial:
        if row == k:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if entry:
                sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
                if sub:
                    term = entry * sub
                    acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(k)))


def jacobian_det(fs: Sequence[Polynomial], vars: Sequence[int]) -> Polynomial:
    """Determinant of the matrix (d f_i / d z_{vars[j]})."""
    if not fs:
        raise ValueError("need at least one function")
    if len(fs) != len(vars):
        raise ValueError(f"dimension mismatch: {len(fs)} functions, {len(vars)} variables")
    if len(set(vars)) != len(vars):
        raise ValueError("variable indices must be distinct")
    ring = fs[0].ring
    for f in fs:
        if f.ring != ring:
            raise RingMismatch("functions live in different rings")
    matrix = [[f.diff(v) for v in vars] for f in fs]
    return _det(matrix, ring)


def vanishing_order(p: Polynomial):
    """Order of vanishing at the origin; ``INFINITY`` for the zero polynomial."""
    if p.is_zero():
        return INFINITY
    return min(sum(e) for e in p._terms)


def divmod_poly(a: Polynomial, b: Polynomial, key=grevlex_key) -> tuple[Polynomial, Polynomial]:
    """Multivariate division of ``a`` by the single polynomial ``b``."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lb, cb = b.leading(key)
    inv = 1 / cb if isinstance(cb, GaussianRational) else mpq(1) / cb
    q: dict = {}
    r: dict = {}
    cur = dict(a._terms)
    bt = list(b._terms.items())
    while cur:
        e = max(cur, key=key)
        c = cur[e]
        if _divides(lb, e):
            shift = tuple(x - y for x, y in zip(e, lb))
            f = c * inv
            q[shift] = f
            for be, bc in bt:
                ne = _add_exp(be, shift)
                s = cur.get(ne)
                v = -(bc * f) if s is None else s - bc * f
                if v:
                    cur[ne] = v
                else:
                    cur.pop(ne, None)
        else:
            r[e] = c
            del cur[e]
    return Polynomial(a.ring, q), Polynomial(a.ring, r)


def divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = divmod_poly(a, b)
    if r:
        raise ArithmeticError(f"{b} does not divide {a}")
    return q


def divides(b: Polynomial, a: Polynomial) -> bool:
    if b.is_zero():
        return a.is_zero()
    return divmod_poly(a, b)[1].is_zero()


# -- gcd ---------------------------------------------------------------------


def _univariate(p: Polynomial, k: int) -> dict[int, Polynomial]:
    out: dict[int, dict] = {}
    for e, c in p._terms.items():
        d = e[k]
        ne = e[:k] + (0,) + e[k + 1:]
        out.setdefault(d, {})[ne] = c
    return {d: Polynomial(p.ring, t) for d, t in out.items()}


def _from_univariate(u: dict[int, Polynomial], k: int, ring: Ring) -> Polynomial:
    out = {}
    for d, c in u.items():
        for e, v in c._terms.items():
            out[e[:k] + (d,) + e[k + 1:]] = v
    return Polynomial(ring, out)


def _monomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    exps = list(a._terms) + list(b._terms)
    g = tuple(min(col) for col in zip(*exps))
    return a.ring.monomial(g)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, normalised to grevlex-leading coefficient 1."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return _gcd(a, b).monic()


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    ring = a.ring
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return ring.one()
    if a.is_monomial() or b.is_monomial():
        # gcd with a monomial is the monomial of minimal exponents
        m = a if a.is_monomial() else b
        other = b if m is a else a
        return _monomial_gcd(m, other)
    vs = a.variables() | b.variables()
    k = max(vs)
    ua, ub = _univariate(a, k), _univariate(b, k)
    ca, cb = _content(ua), _content(ub)
    c = _gcd(ca, cb)
    pa = {d: divexact(v, ca) for d, v in ua.items()}
    pb = {d: divexact(v, cb) for d, v in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while max(pb) > 0:
        r = _prem(pa, pb, ring)
        if not r:
            break
        cr = _content(r)
        r = {d: divexact(v, cr) for d, v in r.items()}
        # strip the numeric scale too, or coefficients grow exponentially
        lead = 1 / r[max(r)].leading()[1]
        pa, pb = pb, {d: v.scale(lead) for d, v in r.items()}
    if max(pb) == 0:
        return c
    g = _from_univariate(pb, k, ring)
    return (g * c).monic()


def _content(u: dict[int, Polynomial]) -> Polynomial:
    coeffs = sorted(u.values(), key=len)
    g = coeffs[0].monic()
    for v in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, v)
    if g.is_constant():
        return g.ring.one()
    return g


def _prem(a: dict[int, Polynomial], b: dict[int, Polynomial], ring: Ring) -> dict[int, Polynomial]:
    """Pseudo-remainder of univariate (in one variable) polynomials with polynomial coefficients."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new: dict[int, Polynomial] = {}
        for d, v in r.items():
            t = v * lb
            if t:
                new[d] = t
        for d, v in b.items():
            t = v * lr
            nd = d + shift
            s = new.get(nd)
            s = -t if s is None else s - t
            if s:
                new[nd] = s
            else:
                new.pop(nd, None)
        r = new
    return r


def squarefree_part(p: Polynomial) -> tuple[Polynomial, int]:
    """Return (product of the distinct irreducible factors, maximal multiplicity).

    Each round replaces ``q`` by ``gcd(q, dq/dz_1, ..., dq/dz_v)``, which lowers
    every factor's multiplicity by one; the number of rounds is the maximal
    multiplicity.
    """
    if p.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if p.is_constant():
        return p.ring.one(), 1
    q = p
    rounds = 0
    first = None
    while not q.is_constant():
        g = q
        for k in sorted(q.variables()):
            g = _gcd(g, q.diff(k))
            if g.is_constant():
                break
        rounds += 1
        if first is None:
            first = g
        q = g
    return divexact(p, first).monic(), rounds


def matrix_det(A: Sequence[Sequence]) -> object:
    """Exact determinant of a square matrix of scalars (Gaussian elimination)."""
    n = len(A)
    M = [[coerce_coeff(x) for x in row] for row in A]
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def matrix_inverse(A: Sequence[Sequence]) -> list[list]:
    n = len(A)
    M = [[coerce_coeff(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def linear_coordinate_change(p: Polynomial, A: Sequence[Sequence]) -> Polynomial:
    """Compose ``p`` with the substitution z -> A z (row i gives the image of z_i)."""
    n = p.ring.nvars
    if len(A) != n or any(len(row) != n for row in A):
        raise ValueError(f"expected a {n}x{n} matrix")
    if not matrix_det(A):
        raise ValueError("singular coordinate change")
    ring = p.ring
    subs = []
    for row in A:
        terms = {}
        for j, a in enumerate(row):
            a = coerce_coeff(a)
            if a:
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = a
        subs.append(Polynomial(ring, terms))
    return p.compose(subs, ring)
