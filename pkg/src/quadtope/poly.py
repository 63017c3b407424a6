"""Sparse multivariate polynomials with exact rational coefficients.

Variables are plain names. The leading letters pick the block: ``y*`` is the
Y-block (sphere coordinates), ``x*`` the X-block (parameters), ``z*`` the
Z-block (coefficient-space variables); any other prefix (e.g. ``t``) lands in
a trailing block. Variables are kept in one global order -- Y, X, Z, other,
then by numeric suffix -- so exponent vectors compare deterministically.

Polynomials are immutable. The variable list of a polynomial is exactly the
set of variables that occur in it with a positive exponent.
"""

import re
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import PolyError

__all__ = [
    "MultiPoly",
    "rat",
    "rat_str",
    "block_of",
    "var_key",
    "poly_arith",
    "poly_eval",
    "homogenize_Y",
    "perturb_tilde",
    "var",
    "const",
]

_VAR_RE = re.compile(r"^([a-z]+)(\d*)$")
_BLOCK_RANK = {"y": 0, "x": 1, "z": 2}


def rat(value):
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected: every coefficient in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise PolyError("booleans are not rationals", value=value)
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if re.fullmatch(r"[+-]?\d+(/\d+)?", text) is None:
            raise PolyError("rational must be written as 'num' or 'num/den'", value=value)
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise PolyError("zero denominator", value=value) from None
    raise PolyError(f"cannot interpret {type(value).__name__} as an exact rational", value=repr(value))


def rat_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def block_of(name):
    m = _VAR_RE.match(name)
    if m is None:
        raise PolyError("malformed variable name", name=name)
    prefix = m.group(1)
    return prefix if prefix in _BLOCK_RANK else "other"


def var_key(name):
    m = _VAR_RE.match(name)
    if m is None:
        raise PolyError("malformed variable name", name=name)
    prefix, digits = m.groups()
    return (_BLOCK_RANK.get(prefix, 3), prefix, int(digits) if digits else -1)


class MultiPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars=(), terms=None):
        """Build from a variable tuple and ``{exponent tuple: coefficient}``.

        Zero coefficients are dropped and unused variables are pruned.
        """
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise PolyError("duplicate variable names", vars=vars)
        raw = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != len(vars):
                raise PolyError("exponent vector length differs from variable count", exponent=e, vars=vars)
            if any(v < 0 for v in e):
                raise PolyError("negative exponent", exponent=e)
            c = rat(c)
            if c:
                raw[e] = raw.get(e, 0) + c
        raw = {e: c for e, c in raw.items() if c}
        used = [i for i in range(len(vars)) if any(e[i] for e in raw)]
        order = sorted(used, key=lambda i: var_key(vars[i]))
        self.vars = tuple(vars[i] for i in order)
        self.terms = {tuple(e[i] for i in order): c for e, c in raw.items()}
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        # trusted constructor: canonical vars, no zero coefficients
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c):
        c = rat(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def variable(cls, name):
        var_key(name)
        return cls._raw((name,), {(1,): Fraction(1)})

    # -- basic accessors -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.vars

    def constant_value(self):
        if self.vars:
            raise PolyError("polynomial is not constant", poly=str(self))
        return self.terms.get((), Fraction(0))

    def __len__(self):
        return len(self.terms)

    def degree(self, name=None):
        """Total degree, or the degree in a single variable."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def block_degree(self, block):
        """Maximal total degree of a term in the variables of ``block``."""
        if not self.terms:
            return -1
        idx = [i for i, v in enumerate(self.vars) if block_of(v) == block]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def block_vars(self, block):
        return tuple(v for v in self.vars if block_of(v) == block)

    def is_homogeneous(self, block, degree):
        idx = [i for i, v in enumerate(self.vars) if block_of(v) == block]
        return all(sum(e[i] for i in idx) == degree for e in self.terms)

    # -- arithmetic ------------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPoly.constant(other)
        return None

    def _aligned(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        merged = tuple(sorted(set(self.vars) | set(other.vars), key=var_key))
        return merged, self._expand(merged), other._expand(merged)

    def _expand(self, merged):
        pos = [merged.index(v) for v in self.vars]
        n = len(merged)
        out = {}
        for e, c in self.terms.items():
            full = [0] * n
            for p, k in zip(pos, e):
                full[p] = k
            out[tuple(full)] = c
        return out

    def _finish(self, vars, terms):
        terms = {e: c for e, c in terms.items() if c}
        used = [i for i in range(len(vars)) if any(e[i] for e in terms)]
        if len(used) == len(vars):
            return MultiPoly._raw(vars, terms)
        return MultiPoly._raw(tuple(vars[i] for i in used), {tuple(e[i] for i in used): c for e, c in terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        vars, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return self._finish(vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly._raw((), {})
        vars, a, b = self._aligned(other)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return self._finish(vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PolyError("only non-negative integer powers", power=n)
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        c = rat(c)
        if not c:
            return MultiPoly._raw((), {})
        return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation ------------------------------------------------------------
    def eval(self, point):
        """Exact value at ``point`` (a mapping from every variable to a rational)."""
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise PolyError("point does not assign every variable", missing=missing)
        vals = [rat(point[v]) for v in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return total

    def subs(self, assignment):
        """Substitute rationals or polynomials for some variables."""
        hit = [v for v in self.vars if v in assignment]
        if not hit:
            return self
        keep = [i for i, v in enumerate(self.vars) if v not in assignment]
        keep_vars = tuple(self.vars[i] for i in keep)
        poly_subs = {}
        num_subs = {}
        for v in hit:
            val = assignment[v]
            if isinstance(val, MultiPoly):
                if val.is_constant():
                    num_subs[v] = val.constant_value()
                else:
                    poly_subs[v] = val
            else:
                num_subs[v] = rat(val)
        out = {}
        pending = []
        for e, c in self.terms.items():
            coef = c
            rest = []
            for i, v in enumerate(self.vars):
                k = e[i]
                if not k:
                    continue
                if v in num_subs:
                    coef *= num_subs[v] ** k
                elif v in poly_subs:
                    rest.append((v, k))
            if not coef:
                continue
            mono = tuple(e[i] for i in keep)
            if rest:
                pending.append((mono, coef, rest))
            else:
                out[mono] = out.get(mono, 0) + coef
        result = self._finish(keep_vars, out) if keep_vars else MultiPoly.constant(sum(out.values(), Fraction(0)))
        for mono, coef, rest in pending:
            term = MultiPoly(keep_vars, {mono: coef})
            for v, k in rest:
                term = term * poly_subs[v] ** k
            result = result + term
        return result

    def compile(self, order):
        """Return a float evaluator ``f(points)`` for an ``(N, len(order))`` array."""
        missing = [v for v in self.vars if v not in order]
        if missing:
            raise PolyError("variable order misses variables", missing=missing)
        cols = [order.index(v) for v in self.vars]
        if not self.terms:
            return lambda pts: np.zeros(np.asarray(pts).shape[0])
        exps = np.array(list(self.terms.keys()), dtype=np.int64).reshape(len(self.terms), len(self.vars))
        coefs = np.array([float(c) for c in self.terms.values()])

        def evaluate(points):
            pts = np.asarray(points, dtype=float)
            if pts.ndim == 1:
                pts = pts[None, :]
            sub = pts[:, cols]
            out = np.zeros(pts.shape[0])
            for e, c in zip(exps, coefs):
                t = np.full(pts.shape[0], c)
                for j, k in enumerate(e):
                    if k:
                        t = t * sub[:, j] ** k
                out += t
            return out

        return evaluate

    # -- serialisation ---------------------------------------------------------
    def to_json(self):
        terms = [{"c": rat_str(c), "e": list(e)} for e, c in sorted(self.terms.items(), reverse=True)]
        return {"vars": list(self.vars), "terms": terms}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "vars" not in data or "terms" not in data:
            raise PolyError("polynomial JSON needs 'vars' and 'terms'")
        vars = tuple(data["vars"])
        for v in vars:
            var_key(v)
        terms = {}
        for t in data["terms"]:
            e = tuple(t["e"])
            c = rat(t["c"])
            terms[e] = terms.get(e, 0) + c
        return cls(vars, terms)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{rat_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def var(name):
    return MultiPoly.variable(name)


def const(c):
    return MultiPoly.constant(c)


def poly_arith(op, a, b=None):
    """Dispatch ``add``, ``mul``, ``neg`` or ``scale`` on polynomials."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "scale":
        return a.scale(b)
    raise PolyError("unknown polynomial operation", op=op)


def poly_eval(p, point):
    return p.eval(point)


def homogenize_Y(p, y0="y0"):
    """Multiply each term by ``y0**(2 - deg_Y(term))``."""
    if block_of(y0) != "y":
        raise PolyError("homogenizing variable must be in the Y-block", name=y0)
    if y0 in p.vars:
        raise PolyError("homogenizing variable already occurs in the polynomial", name=y0)
    if p.block_degree("y") > 2:
        raise PolyError("deg_Y exceeds 2", degree=p.block_degree("y"))
    vars = tuple(sorted(p.vars + (y0,), key=var_key))
    pos = vars.index(y0)
    yidx = [i for i, v in enumerate(p.vars) if block_of(v) == "y"]
    terms = {}
    for e, c in p.terms.items():
        k = 2 - sum(e[i] for i in yidx)
        full = list(e)
        full.insert(pos, k)
        terms[tuple(full)] = c
    return MultiPoly(vars, terms)


def perturb_tilde(q, eps, l=None):
    """Return ``q + eps * (y0^2 + ... + y_l^2)``.

    ``l`` defaults to the largest Y-index occurring in ``q``.
    """
    eps = rat(eps)
    if eps <= 0:
        raise PolyError("perturbation must be positive", eps=rat_str(eps))
    if q.terms and not q.is_homogeneous("y", 2):
        raise PolyError("form must be homogeneous of degree 2 in the Y-block", poly=str(q))
    if l is None:
        ys = q.block_vars("y")
        if not ys:
            raise PolyError("cannot infer l from a form without Y variables")
        l = max(var_key(v)[2] for v in ys)
    bump = MultiPoly.constant(0)
    for i in range(l + 1):
        bump = bump + var(f"y{i}") ** 2
    return q + bump.scale(eps)
