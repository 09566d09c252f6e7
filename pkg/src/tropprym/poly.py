"""Exact rational linear forms, sparse polynomials, cones, and piecewise values.

Everything here is immutable after construction and safe to share between
workers.  Variables are global: a name maps to a small integer index through
an append-only registry, so forms built in different modules (or processes
forked after registration) agree on indices.

The square root that shows up in second moments stays formal: a
MomentExpression keeps (numerator, radicand, scale) and only the CLI takes a
real square root.
"""
from __future__ import annotations

import json
import math
import re
import threading
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]

# ---------------------------------------------------------------------------
# variable registry
# ---------------------------------------------------------------------------

_REG_LOCK = threading.Lock()
_VAR_NAMES: list[str] = []
_VAR_INDEX: dict[str, int] = {}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.:']*\Z")


def var_index(name: str) -> int:
    """Index of a variable, registering the name on first use."""
    idx = _VAR_INDEX.get(name)
    if idx is not None:
        return idx
    if not _NAME_RE.match(name):
        raise ValueError(f"invalid variable name: {name!r}")
    with _REG_LOCK:
        idx = _VAR_INDEX.get(name)
        if idx is None:
            idx = len(_VAR_NAMES)
            _VAR_NAMES.append(name)
            _VAR_INDEX[name] = idx
        return idx


def var_name(index: int) -> str:
    return _VAR_NAMES[index]


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# linear forms
# ---------------------------------------------------------------------------


class LinearForm:
    """c0 + sum c_i * x_i with exact rational coefficients.

    Canonical: zero coefficients are never stored. Treat instances as frozen.
    """

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None, const: Rational = 0):
        cleaned: dict[int, Fraction] = {}
        if coeffs:
            for i, c in coeffs.items():
                c = _frac(c)
                if c:
                    cleaned[i] = c
        self.coeffs: dict[int, Fraction] = cleaned
        self.const: Fraction = _frac(const)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(c: Rational) -> "LinearForm":
        return LinearForm(None, c)

    @staticmethod
    def variable(name: str) -> "LinearForm":
        return LinearForm({var_index(name): 1})

    @staticmethod
    def coerce(x: "LinearForm | Rational | str") -> "LinearForm":
        if isinstance(x, LinearForm):
            return x
        if isinstance(x, str):
            return parse_linear_form(x)
        return LinearForm.constant(x)

    # -- ring-ish ops ------------------------------------------------------

    def __add__(self, other: "LinearForm | Rational") -> "LinearForm":
        if isinstance(other, (int, Fraction)):
            return LinearForm(self.coeffs, self.const + other)
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs.get(i, Fraction(0)) + c
        return LinearForm(coeffs, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "LinearForm":
        return LinearForm({i: -c for i, c in self.coeffs.items()}, -self.const)

    def __sub__(self, other: "LinearForm | Rational") -> "LinearForm":
        return self + (-other if isinstance(other, LinearForm) else -_frac(other))

    def __rsub__(self, other: Rational) -> "LinearForm":
        return (-self) + other

    def __mul__(self, scalar: Rational) -> "LinearForm":
        s = _frac(scalar)
        return LinearForm({i: c * s for i, c in self.coeffs.items()}, self.const * s)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rational) -> "LinearForm":
        return self * (Fraction(1) / _frac(scalar))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs and self.const == 0

    def is_constant(self) -> bool:
        return not self.coeffs

    def variables(self) -> frozenset[int]:
        return frozenset(self.coeffs)

    def is_nonneg_combination(self) -> bool:
        """True iff every coefficient and the constant are >= 0."""
        return self.const >= 0 and all(c >= 0 for c in self.coeffs.values())

    def is_valid_length(self) -> bool:
        """Nonnegative everywhere on the closed orthant, positive on the open one."""
        return self.is_nonneg_combination() and (self.const > 0 or bool(self.coeffs))

    def evaluate(self, point: Mapping[int, Rational]) -> Fraction:
        total = self.const
        for i, c in self.coeffs.items():
            total += c * _frac(point[i])
        return total

    def substitute(self, mapping: Mapping[int, "LinearForm | Rational"]) -> "LinearForm":
        """Replace variables by linear forms; unmapped variables are kept."""
        out = LinearForm(None, self.const)
        for i, c in self.coeffs.items():
            repl = mapping.get(i)
            if repl is None:
                out = out + LinearForm({i: c})
            elif isinstance(repl, LinearForm):
                out = out + repl * c
            else:
                out = out + c * _frac(repl)
        return out

    # -- equality / hashing / printing -------------------------------------

    def _key(self):
        return (self.const, tuple(sorted(self.coeffs.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        parts: list[str] = []
        for i in sorted(self.coeffs, key=var_name):
            c = self.coeffs[i]
            name = var_name(i)
            mag = abs(c)
            term = name if mag == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        if self.const or not parts:
            c = self.const
            if not parts:
                parts.append(str(c))
            else:
                parts.append(f"+ {c}" if c >= 0 else f"- {-c}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LinearForm({self})"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<sign>[+-])|(?P<coef>\d+(?:/\d+)?)\s*\*?\s*(?P<name1>[A-Za-z_][A-Za-z0-9_.:']*)?"
    r"|(?P<name2>[A-Za-z_][A-Za-z0-9_.:']*))"
)


def parse_linear_form(text: str) -> LinearForm:
    """Parse '3/2', 'x1', '2*x1 + 1/3*x2 - 1' into a LinearForm."""
    pos = 0
    total = LinearForm()
    sign = 1
    pending_sign = False
    text = text.strip()
    if not text:
        raise ValueError("empty linear form")
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse linear form at {text[pos:]!r}")
        pos = m.end()
        if m.group("sign"):
            if pending_sign:
                raise ValueError(f"dangling sign in {text!r}")
            sign = sign if m.group("sign") == "+" else -sign
            pending_sign = True
            continue
        if m.group("coef") is not None:
            coef = Fraction(m.group("coef")) * sign
            name = m.group("name1")
            term = LinearForm({var_index(name): coef}) if name else LinearForm(None, coef)
        else:
            term = LinearForm({var_index(m.group("name2")): sign})
        total = total + term
        sign = 1
        pending_sign = False
    if pending_sign:
        raise ValueError(f"dangling sign in {text!r}")
    return total


# ---------------------------------------------------------------------------
# sparse polynomials
# ---------------------------------------------------------------------------

# A monomial is a tuple of (variable index, exponent) pairs, sorted by index,
# exponents positive.
Monomial = tuple

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for i, e in b:
        merged[i] = merged.get(i, 0) + e
    return tuple(sorted(merged.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        cleaned: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _frac(c)
                if c:
                    cleaned[m] = c
        self.terms: dict[Monomial, Fraction] = cleaned

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(c: Rational) -> "Polynomial":
        return Polynomial({_ONE: c})

    @staticmethod
    def variable(name: str) -> "Polynomial":
        return Polynomial({((var_index(name), 1),): 1})

    @staticmethod
    def from_linear(form: LinearForm) -> "Polynomial":
        terms: dict[Monomial, Fraction] = {((i, 1),): c for i, c in form.coeffs.items()}
        if form.const:
            terms[_ONE] = form.const
        return Polynomial(terms)

    @staticmethod
    def coerce(x: "Polynomial | LinearForm | Rational") -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, LinearForm):
            return Polynomial.from_linear(x)
        return Polynomial.constant(x)

    @staticmethod
    def product(factors: Iterable["Polynomial | LinearForm | Rational"]) -> "Polynomial":
        out = Polynomial.constant(1)
        for f in factors:
            out = out * Polynomial.coerce(f)
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Polynomial | LinearForm | Rational") -> "Polynomial":
        other = Polynomial.coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Polynomial(terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial | LinearForm | Rational") -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + Polynomial.coerce(other)

    def __mul__(self, other: "Polynomial | LinearForm | Rational") -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            s = _frac(other)
            return Polynomial({m: c * s for m, c in self.terms.items()})
        other = Polynomial.coerce(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Polynomial(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> frozenset[int]:
        out: set[int] = set()
        for m in self.terms:
            out.update(i for i, _ in m)
        return frozenset(out)

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(_mono_degree(m) for m in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None if inhomogeneous.

        The zero polynomial is homogeneous of every degree; reported as 0.
        """
        degs = {_mono_degree(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def evaluate(self, point: Mapping[int, Rational]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for i, e in m:
                v *= _frac(point[i]) ** e
            total += v
        return total

    def substitute(
        self,
        mapping: Mapping[int, "LinearForm | Polynomial | Rational"],
        *,
        partial: bool = False,
    ) -> "Polynomial":
        """Ring-homomorphic substitution of variables by forms/polynomials.

        With partial=False every variable occurring in self must be mapped.
        """
        cache: dict[int, Polynomial] = {}

        def image(i: int) -> Polynomial:
            p = cache.get(i)
            if p is None:
                if i in mapping:
                    p = Polynomial.coerce(mapping[i])
                elif partial:
                    p = Polynomial({((i, 1),): 1})
                else:
                    raise KeyError(f"unmapped variable {var_name(i)!r}")
                cache[i] = p
            return p

        total = Polynomial()
        for m, c in self.terms.items():
            prod = Polynomial.constant(c)
            for i, e in m:
                prod = prod * image(i) ** e
            total = total + prod
        return total

    # -- equality / printing -------------------------------------------------

    def _key(self):
        return tuple(sorted(self.terms.items(), key=lambda kv: _term_order(kv[0])))

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m in sorted(self.terms, key=_term_order):
            c = self.terms[m]
            factors = []
            for i, e in sorted(m, key=lambda ie: var_name(ie[0])):
                factors.append(var_name(i) if e == 1 else f"{var_name(i)}^{e}")
            mag = abs(c)
            if not factors:
                term = str(mag)
            elif mag == 1:
                term = "*".join(factors)
            else:
                term = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> list:
        out = []
        for m in sorted(self.terms, key=_term_order):
            out.append(
                {
                    "coeff": str(self.terms[m]),
                    "monomial": {
                        var_name(i): e
                        for i, e in sorted(m, key=lambda ie: var_name(ie[0]))
                    },
                }
            )
        return out

    @staticmethod
    def from_json(data: Sequence[Mapping]) -> "Polynomial":
        terms: dict[Monomial, Fraction] = {}
        for entry in data:
            m = tuple(sorted((var_index(n), int(e)) for n, e in entry["monomial"].items()))
            terms[m] = terms.get(m, Fraction(0)) + Fraction(entry["coeff"])
        return Polynomial(terms)


def _term_order(m: Monomial):
    # graded order: degree descending, then lexicographic by variable name so
    # output is stable across processes with different registration orders
    return (-_mono_degree(m), tuple(sorted((var_name(i), e) for i, e in m)))


# ---------------------------------------------------------------------------
# cones and piecewise polynomials
# ---------------------------------------------------------------------------


class Cone:
    """Subcone of the closed positive orthant: {x >= 0, f(x) >= 0 for f in inequalities}.

    `param` optionally presents the cone as the image of a positive orthant in
    different coordinates: param maps each ambient variable to a linear form
    with nonnegative coefficients in the orthant variables. Sign queries on a
    parameterized cone substitute and read off coefficient signs — no LP.
    """

    __slots__ = ("inequalities", "param")

    def __init__(
        self,
        inequalities: Iterable[LinearForm] = (),
        param: Mapping[int, LinearForm] | None = None,
    ):
        self.inequalities: tuple[LinearForm, ...] = tuple(
            f for f in inequalities if not f.is_zero()
        )
        self.param = dict(param) if param is not None else None

    def contains(self, point: Mapping[int, Rational]) -> bool:
        if any(_frac(v) < 0 for v in point.values()):
            return False
        return all(f.evaluate(point) >= 0 for f in self.inequalities)

    def substitute(self, mapping: Mapping[int, LinearForm | Rational]) -> "Cone":
        return Cone([f.substitute(mapping) for f in self.inequalities], self.param)

    def intersect(self, other: "Cone") -> "Cone":
        seen, merged = set(), []
        for f in self.inequalities + other.inequalities:
            k = f._key()
            if k not in seen:
                seen.add(k)
                merged.append(f)
        param = self.param
        if other.param is not None:
            param = other.param if param is None else param
        return Cone(merged, param)

    def interior_nonempty(self) -> bool:
        """Exact: some all-positive point satisfies every inequality strictly."""
        return feasible([], self.inequalities)

    def reduced(self) -> "Cone":
        """Drop inequalities implied by the remaining ones plus positivity."""
        kept = sorted(self.inequalities, key=lambda f: f._key())
        for f in list(kept):
            if f.is_nonneg_combination():
                kept.remove(f)
                continue
            rest = [g for g in kept if g is not f]
            if not feasible(rest, [-f]):
                kept.remove(f)
        return Cone(kept, self.param)

    def is_syntactically_empty(self) -> bool:
        """True when some inequality is visibly nonpositive on the open orthant.

        Only a sufficient test (all coefficients <= 0, not identically zero);
        exactly what dropping degenerate limit pieces needs.
        """
        for f in self.inequalities:
            if f.is_zero():
                continue
            if f.const <= 0 and all(c <= 0 for c in f.coeffs.values()):
                return True
        return False

    def _key(self):
        ineqs = tuple(sorted((f._key() for f in self.inequalities)))
        par = None
        if self.param is not None:
            par = tuple(sorted((i, f._key()) for i, f in self.param.items()))
        return (ineqs, par)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        if not self.inequalities:
            return "{orthant}"
        return "{" + ", ".join(f"{f} >= 0" for f in self.inequalities) + "}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# exact feasibility over the open positive orthant (Fourier-Motzkin)
# ---------------------------------------------------------------------------

# rows are (coeff items tuple, const, strict) meaning coeffs.x + const >= 0,
# strict rows meaning > 0; every variable is implicitly > 0
_FALSE, _TRUE, _KEEP = 0, 1, 2


def _row_status(coeffs: dict, const: Fraction, strict: bool) -> int:
    if not coeffs:
        if const < 0 or (strict and const == 0):
            return _FALSE
        return _TRUE
    if const >= 0 and all(c >= 0 for c in coeffs.values()):
        # implied by the positivity rows -- except for a positivity row
        # itself (single variable, zero constant, strict), which must stay
        # in the system to act as a lower bound during elimination
        if strict and const == 0 and len(coeffs) == 1:
            return _KEEP
        return _TRUE
    if const <= 0 and all(c <= 0 for c in coeffs.values()):
        return _FALSE  # strictly negative somewhere, never >= 0 on x > 0
    return _KEEP


def _normalize_row(coeffs: dict, const: Fraction, strict: bool):
    denom = 1
    for c in list(coeffs.values()) + [const]:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    scaled = [int(c * denom) for c in coeffs.values()] + [int(const * denom)]
    g = 0
    for s in scaled:
        g = math.gcd(g, abs(s))
    g = g or 1
    items = tuple(sorted((i, Fraction(c * denom, g)) for i, c in coeffs.items()))
    return (items, Fraction(const * denom, g), strict)


def _feasible_core(rows: tuple) -> bool:
    """rows: normalized (items, const, strict). Implicit x_i > 0 already added."""
    live = {}
    for items, const, strict in rows:
        key = (items, const)
        live[key] = live.get(key, False) or strict
    rows = [(dict(items), const, strict) for (items, const), strict in live.items()]
    while True:
        kept = []
        var_use: dict[int, list[int]] = {}
        for coeffs, const, strict in rows:
            st = _row_status(coeffs, const, strict)
            if st == _FALSE:
                return False
            if st == _TRUE:
                continue
            kept.append((coeffs, const, strict))
        if not kept:
            return True
        pos: dict[int, int] = {}
        neg: dict[int, int] = {}
        for coeffs, _, _ in kept:
            for i, c in coeffs.items():
                (pos if c > 0 else neg)[i] = (pos if c > 0 else neg).get(i, 0) + 1
        # eliminate the variable generating the fewest combined rows
        target = min(
            (i for coeffs, _, _ in kept for i in coeffs),
            key=lambda i: (pos.get(i, 0) * neg.get(i, 0), i),
        )
        up, down, rest = [], [], []
        for row in kept:
            c = row[0].get(target, 0)
            if c > 0:
                up.append(row)
            elif c < 0:
                down.append(row)
            else:
                rest.append(row)
        new = {}
        for items, const, strict in (_normalize_row(*r) for r in rest):
            key = (items, const)
            new[key] = new.get(key, False) or strict
        for pc, pconst, pstrict in up:
            a = pc[target]
            for nc, nconst, nstrict in down:
                b = -nc[target]
                coeffs: dict[int, Fraction] = {}
                for i, c in pc.items():
                    if i != target:
                        coeffs[i] = coeffs.get(i, Fraction(0)) + b * c
                for i, c in nc.items():
                    if i != target:
                        coeffs[i] = coeffs.get(i, Fraction(0)) + a * c
                coeffs = {i: c for i, c in coeffs.items() if c}
                const = b * pconst + a * nconst
                strict = pstrict or nstrict
                st = _row_status(coeffs, const, strict)
                if st == _FALSE:
                    return False
                if st == _TRUE:
                    continue
                items, const, strict2 = _normalize_row(coeffs, const, strict)
                key = (items, const)
                new[key] = new.get(key, False) or strict2
        rows = [(dict(items), const, strict) for (items, const), strict in new.items()]


_FEAS_CACHE: dict[tuple, bool] = {}


def feasible(
    nonstrict: Iterable[LinearForm], strict: Iterable[LinearForm]
) -> bool:
    """Exact test: does some point with every variable > 0 satisfy f >= 0 for
    all nonstrict forms and f > 0 for all strict forms?"""
    rows = []
    variables: set[int] = set()
    for f in nonstrict:
        rows.append(_normalize_row(dict(f.coeffs), f.const, False))
        variables.update(f.coeffs)
    for f in strict:
        rows.append(_normalize_row(dict(f.coeffs), f.const, True))
        variables.update(f.coeffs)
    for i in variables:
        rows.append((((i, Fraction(1)),), Fraction(0), True))
    rows = tuple(sorted(set(rows)))
    # canonical renaming makes the cache hit across structurally equal systems
    rename: dict[int, int] = {}
    for items, _, _ in rows:
        for i, _ in items:
            if i not in rename:
                rename[i] = len(rename)
    key = tuple(
        (tuple((rename[i], c) for i, c in items), const, strict)
        for items, const, strict in rows
    )
    hit = _FEAS_CACHE.get(key)
    if hit is None:
        if len(_FEAS_CACHE) > 200000:
            _FEAS_CACHE.clear()
        hit = _feasible_core(rows)
        _FEAS_CACHE[key] = hit
    return hit


def sign_on_cone(f: LinearForm, cone: Cone) -> str:
    """Sign of a linear form on a cone: 'nonneg', 'nonpos', or 'indefinite'.

    Decided purely syntactically: coefficients of f after substituting the
    cone's orthant parameterization (or of f itself when the cone is the
    plain orthant). The zero form is 'nonneg'.
    """
    if cone.param is not None:
        f = f.substitute(cone.param)
    if f.is_nonneg_combination():
        return "nonneg"
    if (-f).is_nonneg_combination():
        return "nonpos"
    return "indefinite"


class PiecewisePolynomial:
    """A list of (cone, polynomial) pieces covering the orthant of interest."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[tuple[Cone, Polynomial]] | None = None):
        self.pieces: list[tuple[Cone, Polynomial]] = list(pieces or [])

    @staticmethod
    def single(poly: "Polynomial | LinearForm | Rational") -> "PiecewisePolynomial":
        return PiecewisePolynomial([(Cone(), Polynomial.coerce(poly))])

    @staticmethod
    def coerce(x) -> "PiecewisePolynomial":
        if isinstance(x, PiecewisePolynomial):
            return x
        return PiecewisePolynomial.single(x)

    def is_single(self) -> bool:
        return len(self.pieces) == 1 and not self.pieces[0][0].inequalities

    # -- exact piecewise arithmetic -------------------------------------------

    def _merged(self) -> "PiecewisePolynomial":
        out: dict[tuple, tuple[Cone, Polynomial]] = {}
        for cone, poly in self.pieces:
            key = cone._key()
            old = out.get(key)
            if old is None:
                out[key] = (cone, poly)
            elif old[1] != poly:
                raise ValueError("conflicting polynomials on one cone")
        return PiecewisePolynomial(out.values())

    def restricted(self, cone: Cone) -> "PiecewisePolynomial":
        out = []
        for c, p in self.pieces:
            cc = cone.intersect(c)
            if not cc.interior_nonempty():
                continue
            out.append((cc.reduced(), p))
        return PiecewisePolynomial(out)._merged()

    def _binary(self, other, op) -> "PiecewisePolynomial":
        other = PiecewisePolynomial.coerce(other)
        if self.is_single() and other.is_single():
            return PiecewisePolynomial.single(
                op(self.pieces[0][1], other.pieces[0][1])
            )
        out = []
        for ca, pa in self.pieces:
            for cb, pb in other.pieces:
                cone = ca.intersect(cb)
                if not cone.interior_nonempty():
                    continue
                out.append((cone.reduced(), op(pa, pb)))
        return PiecewisePolynomial(out)._merged()

    def __add__(self, other) -> "PiecewisePolynomial":
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other) -> "PiecewisePolynomial":
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other) -> "PiecewisePolynomial":
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other) -> "PiecewisePolynomial":
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial([(c, -p) for c, p in self.pieces])

    def substitute(self, mapping: Mapping[int, LinearForm | Rational], *, partial: bool = False) -> "PiecewisePolynomial":
        out = []
        for cone, poly in self.pieces:
            out.append((cone.substitute(mapping), poly.substitute(mapping, partial=partial)))
        return PiecewisePolynomial(out)

    def evaluate(self, point: Mapping[int, Rational]) -> Fraction:
        value = None
        for cone, poly in self.pieces:
            if cone.contains(point):
                v = poly.evaluate(point)
                if value is None:
                    value = v
                elif v != value:
                    raise ValueError("pieces disagree at a shared point")
        if value is None:
            raise ValueError("point lies in no piece")
        return value

    def limit_at_zero(self, name: str) -> "PiecewisePolynomial":
        """Exact limit as one variable goes to 0.

        Substitutes 0 on every piece, drops pieces whose cone loses interior,
        removes newly redundant inequalities, and merges equal pieces (pieces
        that land on the same cone with different polynomials raise).
        """
        mapping = {var_index(name): Fraction(0)}
        out: list[tuple[Cone, Polynomial]] = []
        for cone, poly in self.pieces:
            cone2 = cone.substitute(mapping)
            if cone2.is_syntactically_empty() or not cone2.interior_nonempty():
                continue
            poly2 = poly.substitute(mapping, partial=True)
            out.append((cone2.reduced(), poly2))
        return PiecewisePolynomial(out)._merged()

    def dedupe(self) -> "PiecewisePolynomial":
        out, seen = [], set()
        for cone, poly in self.pieces:
            key = (cone._key(), poly._key())
            if key not in seen:
                seen.add(key)
                out.append((cone, poly))
        return PiecewisePolynomial(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewisePolynomial):
            return False
        k = lambda p: (p[0]._key(), p[1]._key())
        return sorted(map(k, self.pieces)) == sorted(map(k, other.pieces))

    def __str__(self) -> str:
        if len(self.pieces) == 1:
            return str(self.pieces[0][1])
        return "; ".join(f"{cone}: {poly}" for cone, poly in self.pieces)


def _normalize_wall(f: LinearForm) -> tuple | None:
    """Primitive representative of the hyperplane f=0 with a fixed sign, or None for 0."""
    items = sorted(f.coeffs.items())
    if not items:
        return None
    lead = items[0][1]
    scaled = [(i, c / lead) for i, c in items]
    return (f.const / lead, tuple(scaled))


def _solve_wall(f: LinearForm) -> tuple[int, LinearForm]:
    """Solve f = 0 for its smallest variable: returns (index, replacement form)."""
    i = min(f.coeffs)
    ci = f.coeffs[i]
    rest = LinearForm({j: c for j, c in f.coeffs.items() if j != i}, f.const)
    return i, rest * (Fraction(-1) / ci)


def wall_continuity(pp: PiecewisePolynomial) -> bool:
    """Check that pieces agree on every shared wall.

    Whenever two pieces carry a common hyperplane with opposite orientations
    and the overlap of the two facets is full-dimensional inside that wall,
    the wall equation is solved for one variable and substituted into both
    polynomials, which must then agree identically (agreement on a
    full-dimensional patch of a hyperplane forces it).
    """
    norm_sets = []
    for cone, _ in pp.pieces:
        walls: dict[tuple, LinearForm] = {}
        for f in cone.inequalities:
            key = _normalize_wall(f)
            if key is not None:
                walls[key] = f
        norm_sets.append(walls)
    n = len(pp.pieces)
    for a in range(n):
        for b in range(a + 1, n):
            wa, wb = norm_sets[a], norm_sets[b]
            if set(wa) == set(wb) and all(
                wa[k]._key() == wb[k]._key() for k in wa
            ):
                # identical cones must carry identical polynomials
                if pp.pieces[a][1] != pp.pieces[b][1]:
                    return False
                continue
            for key in set(wa) & set(wb):
                if (-wa[key])._key() != wb[key]._key():
                    continue
                var, repl = _solve_wall(wa[key])
                sub = {var: repl}
                others = [
                    g.substitute(sub)
                    for g in pp.pieces[a][0].inequalities
                    if g is not wa[key]
                ] + [
                    g.substitute(sub)
                    for g in pp.pieces[b][0].inequalities
                    if g is not wb[key]
                ]
                # relative interior of the facet overlap, staying inside the
                # open orthant (the solved-out variable must remain positive)
                if not feasible([], others + [repl]):
                    continue
                pa = pp.pieces[a][1].substitute(sub, partial=True)
                pb = pp.pieces[b][1].substitute(sub, partial=True)
                if pa != pb:
                    return False
    return True


class MomentExpression:
    """moment = scale * numerator / sqrt(radicand), all exact."""

    __slots__ = ("numerator", "radicand", "scale")

    def __init__(self, numerator: PiecewisePolynomial, radicand: Polynomial, scale: Rational):
        self.numerator = numerator
        self.radicand = radicand
        self.scale = _frac(scale)

    def evaluate_exact(self, point: Mapping[int, Rational]) -> tuple[Fraction, Fraction]:
        """(scale * numerator(point), radicand(point)); value = first / sqrt(second)."""
        return (self.scale * self.numerator.evaluate(point), self.radicand.evaluate(point))

    def evaluate_numeric(self, point: Mapping[int, Rational]) -> float:
        num, rad = self.evaluate_exact(point)
        if rad <= 0:
            raise ValueError("radicand not positive at the given lengths")
        import math

        return float(num) / math.sqrt(float(rad))

    def substitute(self, mapping: Mapping[int, LinearForm | Rational], *, partial: bool = False) -> "MomentExpression":
        return MomentExpression(
            self.numerator.substitute(mapping, partial=partial),
            self.radicand.substitute(mapping, partial=partial),
            self.scale,
        )

    def __str__(self) -> str:
        s = "" if self.scale == 1 else f"{self.scale} * "
        return f"{s}[{self.numerator}] / sqrt({self.radicand})"

    def to_json(self) -> dict:
        return {
            "scale": str(self.scale),
            "radicand": self.radicand.to_json(),
            "numerator": [
                {
                    "cone": [str(f) for f in cone.inequalities],
                    "polynomial": poly.to_json(),
                }
                for cone, poly in self.numerator.pieces
            ],
        }
