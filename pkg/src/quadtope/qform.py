"""Quadratic forms, pencils of forms, and exact index computation.

The index (number of negative eigenvalues) is always decided exactly from the
characteristic polynomial ``det(M + T*Id)`` by Descartes' rule of signs; this
is exact because the polynomial of a symmetric matrix is real-rooted. Floating
point eigendecompositions are only used to produce frames, and their sign
pattern is arbitrated by the exact signature.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DegeneracyError, FormError, SizeLimitError
from .poly import MultiPoly, block_of, rat, var, var_key

__all__ = [
    "QuadForm",
    "QuadFamily",
    "CharPoly",
    "Signature",
    "form_from_poly",
    "omega_combine",
    "char_poly",
    "berkowitz",
    "index_descartes",
    "index_from_signs",
    "eigen_decomp",
    "positive_eigenspace",
    "symbolic_H",
    "signature_of",
]

DEFAULT_TOL = 1e-9
DEFAULT_TERM_CAP = 10**6


def _sym_check(matrix, what):
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise FormError(f"{what} matrix must be square", shape=[len(r) for r in matrix])
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise FormError(f"{what} matrix is not symmetric", entry=[i, j])


@dataclass(frozen=True)
class QuadForm:
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(rat(v) for v in row) for row in self.matrix)
        if not m:
            raise FormError("a form needs at least one variable")
        _sym_check(m, "form")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return len(self.matrix)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, values):
        n = len(values)
        return cls(tuple(tuple(rat(values[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    def __call__(self, y):
        y = [rat(v) for v in y]
        return sum((self.matrix[i][j] * y[i] * y[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def scale(self, c):
        c = rat(c)
        return QuadForm(tuple(tuple(c * v for v in row) for row in self.matrix))

    def __neg__(self):
        return self.scale(-1)

    def to_numpy(self):
        return np.array([[float(v) for v in row] for row in self.matrix])

    def to_poly(self):
        p = MultiPoly.constant(0)
        for i in range(self.dim):
            for j in range(self.dim):
                if self.matrix[i][j]:
                    p = p + var(f"y{i}") * var(f"y{j}") * self.matrix[i][j]
        return p


class Signature(NamedTuple):
    neg: int
    zero: int
    pos: int

    @property
    def dim(self):
        return self.neg + self.zero + self.pos

    @property
    def index(self):
        return self.neg


@dataclass(frozen=True)
class CharPoly:
    """Coefficients ``[H_l, ..., H_0]`` of ``T^(l+1) + H_l T^l + ... + H_0``."""

    coeffs: tuple

    @property
    def dim(self):
        return len(self.coeffs)

    def __call__(self, t):
        t = rat(t)
        acc = Fraction(1)
        for c in self.coeffs:
            acc = acc * t + c
        return acc


def _poly_matrix_entry(p):
    if isinstance(p, MultiPoly):
        return p
    return MultiPoly.constant(rat(p))


def _split_y(p):
    """Map a form homogeneous of Y-degree 2 to ``{(i, j): X-coefficient}``."""
    ys = [i for i, v in enumerate(p.vars) if block_of(v) == "y"]
    rest = [i for i in range(len(p.vars)) if i not in ys]
    rest_vars = tuple(p.vars[i] for i in rest)
    parts = {}
    for e, c in p.terms.items():
        pair = []
        for i in ys:
            pair.extend([var_key(p.vars[i])[2]] * e[i])
        if len(pair) != 2:
            raise FormError("polynomial is not homogeneous of degree 2 in the Y-block", poly=str(p))
        key = tuple(sorted(pair))
        mono = MultiPoly(rest_vars, {tuple(e[i] for i in rest): c})
        parts[key] = parts.get(key, MultiPoly.constant(0)) + mono
    return parts


def _matrix_from_parts(parts, n):
    half = Fraction(1, 2)
    zero = MultiPoly.constant(0)
    rows = [[zero] * n for _ in range(n)]
    for (i, j), c in parts.items():
        if i >= n or j >= n:
            raise FormError("form uses a Y variable beyond the declared dimension", index=max(i, j), dim=n)
        if i == j:
            rows[i][i] = rows[i][i] + c
        else:
            h = c.scale(half)
            rows[i][j] = rows[i][j] + h
            rows[j][i] = rows[j][i] + h
    return tuple(tuple(r) for r in rows)


def form_from_poly(p, dim=None):
    """Symmetric matrix of a numeric quadratic form in ``y0, y1, ...``."""
    if any(block_of(v) != "y" for v in p.vars):
        raise FormError("numeric form must only involve Y variables", vars=p.vars)
    parts = _split_y(p)
    if dim is None:
        idx = [var_key(v)[2] for v in p.vars]
        dim = max(idx) + 1 if idx else 1
    m = _matrix_from_parts(parts, dim)
    return QuadForm(tuple(tuple(c.constant_value() for c in row) for row in m))


class QuadFamily:
    """``m`` quadratic forms in ``y0..yl`` whose entries are polynomials in ``x1..xk``."""

    def __init__(self, forms, l=None, k=None, d=None):
        mats = []
        for f in forms:
            mat = tuple(tuple(_poly_matrix_entry(v) for v in row) for row in f)
            _sym_check(mat, "family")
            mats.append(mat)
        if not mats:
            raise FormError("a family needs at least one form")
        n = len(mats[0])
        if any(len(m) != n for m in mats):
            raise FormError("all forms of a family must share a dimension")
        xs = set()
        deg = 0
        for mat in mats:
            for row in mat:
                for p in row:
                    for v in p.vars:
                        if block_of(v) != "x":
                            raise FormError("family entries may only involve X variables", var=v)
                        xs.add(v)
                    if p.terms:
                        deg = max(deg, p.block_degree("x"))
        kk = max((var_key(v)[2] for v in xs), default=0)
        if l is not None and l != n - 1:
            raise FormError("declared l does not match matrix size", l=l, size=n)
        if k is None:
            k = kk
        elif k < kk:
            raise FormError("declared k smaller than parameters used", k=k, used=kk)
        if d is None:
            d = deg
        elif d < deg:
            raise FormError("declared d smaller than X-degree used", d=d, used=deg)
        self.forms = tuple(mats)
        self.m = len(mats)
        self.l = n - 1
        self.k = k
        self.d = d
        self.params = tuple(f"x{i}" for i in range(1, k + 1))
        self._cache = lru_cache(maxsize=4096)(self._at)

    @classmethod
    def from_polys(cls, polys, l=None, k=None, d=None):
        if l is None:
            ys = [var_key(v)[2] for p in polys for v in p.vars if block_of(v) == "y"]
            l = max(ys) if ys else 0
        mats = [_matrix_from_parts(_split_y(p), l + 1) for p in polys]
        return cls(mats, l=l, k=k, d=d)

    def to_polys(self):
        out = []
        for mat in self.forms:
            p = MultiPoly.constant(0)
            n = len(mat)
            for i in range(n):
                for j in range(n):
                    if not mat[i][j].is_zero():
                        p = p + mat[i][j] * var(f"y{i}") * var(f"y{j}")
            out.append(p)
        return out

    def _point(self, x):
        x = tuple(rat(v) for v in x)
        if len(x) != self.k:
            raise FormError("parameter point has the wrong length", expected=self.k, got=len(x))
        return x

    def _at(self, x):
        point = dict(zip(self.params, x))
        return tuple(tuple(tuple(p.eval(point) for p in row) for row in mat) for mat in self.forms)

    def at(self, x):
        """Numeric matrices of all forms at parameter point ``x``."""
        return self._cache(self._point(x))

    def form(self, i, x):
        return QuadForm(self.at(x)[i])

    def to_json(self):
        return {
            "l": self.l,
            "k": self.k,
            "d": self.d,
            "m": self.m,
            "forms": [{"matrix": [[p.to_json() for p in row] for row in mat]} for mat in self.forms],
        }

    @classmethod
    def from_json(cls, data):
        try:
            forms = []
            for f in data["forms"]:
                forms.append([[_entry_from_json(v) for v in row] for row in f["matrix"]])
        except (KeyError, TypeError) as exc:
            raise FormError("malformed family JSON", detail=str(exc)) from None
        fam = cls(forms, l=data.get("l"), k=data.get("k"), d=data.get("d"))
        if "m" in data and data["m"] != fam.m:
            raise FormError("declared m does not match the number of forms", m=data["m"], forms=fam.m)
        return fam

    def __eq__(self, other):
        return isinstance(other, QuadFamily) and (self.forms, self.k, self.d) == (other.forms, other.k, other.d)

    def __hash__(self):
        return hash((self.forms, self.k, self.d))

    def __repr__(self):
        return f"QuadFamily(m={self.m}, l={self.l}, k={self.k}, d={self.d})"


def _entry_from_json(v):
    if isinstance(v, dict):
        return MultiPoly.from_json(v)
    return MultiPoly.constant(rat(v))


def omega_combine(fam, omega, x):
    """Exact matrix of ``sum_i omega[i] * Q_i(., x)``."""
    if len(omega) != fam.m:
        raise FormError("omega has the wrong length", expected=fam.m, got=len(omega))
    omega = [rat(w) for w in omega]
    mats = fam.at(x)
    n = fam.l + 1
    out = [[Fraction(0)] * n for _ in range(n)]
    for w, mat in zip(omega, mats):
        if not w:
            continue
        for i in range(n):
            for j in range(n):
                out[i][j] += w * mat[i][j]
    return QuadForm(tuple(tuple(r) for r in out))


def berkowitz(a, one=Fraction(1), zero=Fraction(0), check=None):
    """Division-free characteristic polynomial ``det(t*Id - a)``.

    Returns ``[1, c_1, ..., c_n]`` with ``det(t Id - a) = t^n + c_1 t^(n-1) + ...``.
    Works over any commutative ring whose elements support ``+``, ``-``, ``*``.
    """
    n = len(a)
    if n == 0:
        return [one]
    coeffs = [one, zero - a[0][0]]
    for r in range(1, n):
        row = [a[r][j] for j in range(r)]
        col = [a[j][r] for j in range(r)]
        toep = [one, zero - a[r][r]]
        vec = col
        for _ in range(r):
            dot = zero
            for u, v in zip(row, vec):
                dot = dot + u * v
            toep.append(zero - dot)
            if check is not None:
                check(dot)
            vec = [sum((a[i][j] * vec[j] for j in range(r)), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + toep[i - j] * coeffs[j]
            if check is not None:
                check(acc)
            new.append(acc)
        coeffs = new
    return coeffs


def char_poly(q):
    """Coefficients of ``det(M + T*Id)`` via the Berkowitz recurrence."""
    neg = [[-v for v in row] for row in q.matrix]
    coeffs = berkowitz(neg)
    return CharPoly(tuple(coeffs[1:]))


def index_from_signs(signs):
    """Signature from the sign sequence ``(sign H_l, ..., sign H_0)``.

    Zero eigenvalues are the trailing zeros; negative eigenvalues are the
    sign variations of ``(1, H_l, ..., H_zero)``, which count positive roots
    exactly because the characteristic polynomial is real-rooted.
    """
    signs = list(signs)
    dim = len(signs)
    zero = 0
    while zero < dim and signs[dim - 1 - zero] == 0:
        zero += 1
    seq = [1] + [s for s in signs[: dim - zero] if s != 0]
    neg = sum(1 for u, v in zip(seq, seq[1:]) if u != v)
    return Signature(neg, zero, dim - neg - zero)


def index_descartes(c):
    return index_from_signs([(v > 0) - (v < 0) for v in c.coeffs])


def signature_of(q):
    return index_descartes(char_poly(q))


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    frame: np.ndarray
    signature: Signature


def eigen_decomp(q, tol=DEFAULT_TOL):
    """Ascending eigenvalues and an orthonormal eigenframe (columns).

    Eigenvalues classified as zero by the exact signature are snapped to 0.0;
    a float eigenvalue whose sign contradicts the exact signature by more than
    ``tol * |M|`` raises :class:`DegeneracyError`.
    """
    if tol <= 0:
        raise FormError("tolerance must be positive", tol=tol)
    sig = signature_of(q)
    mat = q.to_numpy()
    try:
        values, frame = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("eigendecomposition did not converge", detail=str(exc)) from None
    scale = max(1.0, float(np.linalg.norm(mat, 2)))
    residual = float(np.max(np.linalg.norm(mat @ frame - frame * values, axis=0))) if q.dim else 0.0
    if residual > tol * scale * 10 + 1e-12:
        raise ConvergenceError("eigenvector residual above tolerance", residual=residual, tol=tol)
    bound = tol * scale
    values = values.copy()
    for i, lam in enumerate(values):
        if i < sig.neg:
            ok = lam < bound
        elif i < sig.neg + sig.zero:
            ok = abs(lam) <= max(bound, 1e-7 * scale)
            values[i] = 0.0
        else:
            ok = lam > -bound
        if not ok:
            raise DegeneracyError(
                "floating eigenvalues disagree with the exact signature; change tol",
                eigenvalue=float(lam),
                position=i,
                signature=list(sig),
                tol=tol,
            )
    return EigenDecomposition(values, frame, sig)


def positive_eigenspace(q, tol=DEFAULT_TOL):
    """Orthonormal basis (columns) of the sum of non-negative eigenspaces."""
    dec = eigen_decomp(q, tol)
    return dec.frame[:, dec.signature.neg:]


def symbolic_H(fam, I, cap=DEFAULT_TERM_CAP):
    """Exact coefficients ``[H_{I,l}, ..., H_{I,0}]`` of ``det(M_{Z_I.Q} + T Id)``.

    ``I`` holds 1-based form indices; the result is polynomial in ``z_i``
    (``i`` in ``I``) and ``x1..xk``.
    """
    I = sorted(set(I))
    if not I:
        raise FormError("index set I must be nonempty")
    if I[0] < 1 or I[-1] > fam.m:
        raise FormError("index set out of range", I=I, m=fam.m)
    n = fam.l + 1
    zero = MultiPoly.constant(0)
    mat = [[zero] * n for _ in range(n)]
    for i in I:
        z = var(f"z{i}")
        for r in range(n):
            for c in range(n):
                e = fam.forms[i - 1][r][c]
                if not e.is_zero():
                    mat[r][c] = mat[r][c] + z * e
    neg = [[-v for v in row] for row in mat]

    def check(p):
        if len(p) > cap:
            raise SizeLimitError("symbolic characteristic polynomial exceeds the term cap", terms=len(p), cap=cap)

    coeffs = berkowitz(neg, one=MultiPoly.constant(1), zero=zero, check=check)
    return list(coeffs[1:])
