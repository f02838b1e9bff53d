"""Exact arithmetic over F_{p^m}, F_q[t], F_q[t]/(f) and small square matrices.

Field elements are stored as their canonical integer encoding
enc(x) = sum_i coeffs[i] * p**i (power basis over the modulus root).  All
arithmetic goes through lookup tables built once per field, which keeps the
hot loops in the group enumerator cheap.  ``FieldElem`` is a thin wrapper for
interactive use; internal code passes plain ints around.

Matrix keys are the row-major concatenation of entry encodings in base |R|,
entry (0, 0) being the most significant digit.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class AlgebraError(ValueError):
    pass


class NonPrimeCharacteristic(AlgebraError):
    pass


class ReducibleModulus(AlgebraError):
    pass


class DegreeMismatch(AlgebraError):
    pass


class ZeroPolynomial(AlgebraError):
    pass


class ModulusNotIrreducible(AlgebraError):
    pass


class DiagonalIndex(AlgebraError):
    pass


class KeyWidthOverflow(AlgebraError):
    def __init__(self, bits: int):
        super().__init__(f"matrix key needs {bits} bits, more than 64")
        self.bits = bits


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


# --------------------------------------------------------------------------
# polynomial helpers over a prime field, coefficient tuples low -> high
# --------------------------------------------------------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmod_prime(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        if c:
            for i, fc in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fc) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _pmul_prime(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _monic_polys_prime(p: int, d: int):
    """All monic polys of degree d over F_p in lexicographic order of the
    lower coefficients read from the top (t^d + c_{d-1} t^{d-1} + ...)."""
    for tail in itertools.product(range(p), repeat=d):
        # tail[0] is c_{d-1}
        yield tuple(reversed(tail)) + (1,)


def _irreducible_prime(f, p) -> bool:
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for g in _monic_polys_prime(p, k):
            if not _pmod_prime(f, g, p):
                return False
    return True


# --------------------------------------------------------------------------
# finite fields
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_{p^m} in the power basis of ``modulus`` (coefficients low -> high)."""

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def q(self) -> int:
        return self.order

    zero = 0
    one = 1

    def __repr__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.order}[mod {self.modulus}]"

    # element coefficient vectors ------------------------------------------
    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, c) -> int:
        x = 0
        for i, ci in enumerate(c):
            x += (ci % self.p) * self.p ** i
        return x

    @cached_property
    def _tables(self):
        q, p = self.order, self.p
        if self.m == 1:
            r = np.arange(q)
            add = (r[:, None] + r[None, :]) % p
            mul = (r[:, None] * r[None, :]) % p
        else:
            cs = np.array([self.coeffs(x) for x in range(q)], dtype=np.int64)
            w = p ** np.arange(self.m)
            add = ((cs[:, None, :] + cs[None, :, :]) % p) @ w
            mul = np.zeros((q, q), dtype=np.int64)
            # discrete logs via a primitive element keep this O(q^2) vectorised
            exp, log = self._exp_log()
            nz = np.arange(1, q)
            s = (log[nz][:, None] + log[nz][None, :]) % (q - 1)
            mul[1:, 1:] = exp[s]
        neg = (-np.arange(q) % p) if self.m == 1 else np.array(
            [self.from_coeffs([(-c) % p for c in self.coeffs(x)]) for x in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return (add.astype(np.int64), mul.astype(np.int64),
                np.asarray(neg, dtype=np.int64), inv)

    def _exp_log(self):
        q, p = self.order, self.p
        f = self.modulus

        def mulc(a, b):
            return _pmod_prime(_pmul_prime(a, b, p), f, p)

        for g in range(2, q):
            gc = _trim(self.coeffs(g))
            seen = []
            cur = (1,)
            for _ in range(q - 1):
                seen.append(self.from_coeffs(cur))
                cur = mulc(cur, gc)
            if len(set(seen)) == q - 1:
                exp = np.array(seen * 2, dtype=np.int64)
                log = np.zeros(q, dtype=np.int64)
                log[np.array(seen)] = np.arange(q - 1)
                return exp, log
        raise AlgebraError("no primitive element found")  # pragma: no cover

    @cached_property
    def add_table(self) -> np.ndarray:
        return self._tables[0]

    @cached_property
    def mul_table(self) -> np.ndarray:
        return self._tables[1]

    @cached_property
    def _lists(self):
        add, mul, neg, inv = self._tables
        return add.tolist(), mul.tolist(), neg.tolist(), inv.tolist()

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return self._lists[0][a][b]

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._lists[2][a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        return self._lists[1][a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._lists[3][a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def is_zero(self, a: int) -> bool:
        return a == 0

    def enc(self, a: int) -> int:
        return a

    def dec(self, k: int) -> int:
        return k

    def elements(self):
        return range(self.order)

    def elem(self, x) -> "FieldElem":
        if isinstance(x, (tuple, list)):
            x = self.from_coeffs(x)
        return FieldElem(self, x % self.order if self.m == 1 else x)


def make_field(p: int, m: int = 1, modulus=None) -> FieldSpec:
    """Build F_{p^m}.  Without a modulus, the lexicographically smallest monic
    irreducible of degree m is used."""
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if m < 1:
        raise DegreeMismatch("extension degree must be >= 1")
    if m == 1:
        return FieldSpec(p, 1, None)
    if modulus is None:
        for cand in _monic_polys_prime(p, m):
            if _irreducible_prime(cand, p):
                modulus = cand
                break
    else:
        if isinstance(modulus, Poly):
            modulus = tuple(modulus.coeffs)
        modulus = _trim(c % p for c in modulus)
        if len(modulus) - 1 != m:
            raise DegreeMismatch(f"modulus degree {len(modulus) - 1} != {m}")
        if modulus[-1] != 1:
            raise DegreeMismatch("modulus must be monic")
        if not _irreducible_prime(modulus, p):
            raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
    return FieldSpec(p, m, tuple(modulus))


class FieldElem:
    """Convenience wrapper with operator overloading."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        self.spec = spec
        self.value = value

    @property
    def coeffs(self):
        return self.spec.coeffs(self.value)

    def _v(self, other):
        if isinstance(other, FieldElem):
            return other.value
        return self.spec.elem(other).value

    def __add__(self, o):
        return FieldElem(self.spec, self.spec.add(self.value, self._v(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElem(self.spec, self.spec.sub(self.value, self._v(o)))

    def __mul__(self, o):
        return FieldElem(self.spec, self.spec.mul(self.value, self._v(o)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def __truediv__(self, o):
        return FieldElem(self.spec, self.spec.mul(self.value, self.spec.inv(self._v(o))))

    def __pow__(self, e: int):
        return FieldElem(self.spec, self.spec.pow(self.value, e))

    def inverse(self):
        return FieldElem(self.spec, self.spec.inv(self.value))

    def __eq__(self, o):
        if isinstance(o, (FieldElem, int)):
            return self.value == self._v(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElem({self.value} in {self.spec!r})"


# --------------------------------------------------------------------------
# polynomials over a finite field
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Polynomial over ``base`` with coefficient encodings low -> high."""

    base: FieldSpec
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def _wrap(self, c):
        return Poly(self.base, tuple(c))

    def _coerce(self, o):
        if isinstance(o, Poly):
            return o
        return Poly(self.base, (self.base.elem(o).value,))

    def __add__(self, o):
        o = self._coerce(o)
        K = self.base
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return self._wrap(K.add(x, y) for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self.base.neg(x) for x in self.coeffs)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        K = self.base
        if not self.coeffs or not o.coeffs:
            return self._wrap(())
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        out[i + j] = K.add(out[i + j], K.mul(x, y))
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        r = self._wrap((1,))
        a = self
        while e:
            if e & 1:
                r = r * a
            a = a * a
            e >>= 1
        return r

    def divmod(self, d: "Poly"):
        if d.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        K = self.base
        r = list(self.coeffs)
        q = [0] * max(0, len(r) - len(d.coeffs) + 1)
        inv_lead = K.inv(d.coeffs[-1])
        while len(r) >= len(d.coeffs) and r:
            c = K.mul(r[-1], inv_lead)
            s = len(r) - len(d.coeffs)
            q[s] = c
            for i, dc in enumerate(d.coeffs):
                r[s + i] = K.sub(r[s + i], K.mul(c, dc))
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return self._wrap(q), self._wrap(r)

    def __mod__(self, d):
        return self.divmod(d)[1]

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __call__(self, x: int) -> int:
        K = self.base
        acc = 0
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def enc(self, degree_bound: int) -> int:
        if len(self.coeffs) > degree_bound:
            raise DegreeMismatch("polynomial exceeds the degree bound")
        q = self.base.order
        return sum(c * q ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            cs = "" if (c == 1 and i > 0) else str(c)
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{cs}t")
            else:
                terms.append(f"{cs}t^{i}")
        return " + ".join(terms)


def poly(base: FieldSpec, coeffs) -> Poly:
    return Poly(base, tuple(_norm_coeff(base, c) for c in coeffs))


def _norm_coeff(base: FieldSpec, c) -> int:
    if isinstance(c, FieldElem):
        return c.value
    if base.m == 1:
        return c % base.p
    return c


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*t(?:\s*\^\s*(\d+))?)?")


def parse_poly(base: FieldSpec, text: str) -> Poly:
    """Parse strings like 't^2+1', 't^2 - 1', '2t^3+t'.  Integer coefficients
    are reduced mod p (prime-field coefficients only)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial string")
    out: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r}")
        sign, num, tpart, exp = m.groups()
        if not num and not tpart:
            raise ValueError(f"cannot parse polynomial {text!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = 0 if not tpart else (int(exp) if exp else 1)
        out[e] = out.get(e, 0) + c
        pos = m.end()
    deg = max(out)
    return Poly(base, tuple(out.get(i, 0) % base.p for i in range(deg + 1)))


def poly_is_irreducible(f: Poly) -> bool:
    """Exhaustive trial division by monic polynomials of degree <= deg f / 2."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    d = f.degree
    if d <= 0:
        return False
    K = f.base
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(K.order), repeat=k):
            g = Poly(K, tuple(reversed(tail)) + (1,))
            if (f % g).is_zero():
                return False
    return True


# --------------------------------------------------------------------------
# quotient rings F_q[t]/(f) (fields when f is irreducible)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientPoly:
    modulus: Poly
    residue: Poly

    def __add__(self, o):
        return QuotientPoly(self.modulus, (self.residue + o.residue) % self.modulus)

    def __sub__(self, o):
        return QuotientPoly(self.modulus, (self.residue - o.residue) % self.modulus)

    def __mul__(self, o):
        return QuotientPoly(self.modulus, (self.residue * o.residue) % self.modulus)

    def __neg__(self):
        return QuotientPoly(self.modulus, -self.residue)

    def enc(self) -> int:
        return self.residue.enc(max(1, self.modulus.degree))

    def __repr__(self):
        return f"[{self.residue!r}] mod ({self.modulus!r})"


class QuotientRing:
    """K[t]/(f) with elements stored as residue encodings
    sum_i enc_K(c_i) * |K|**i.  Exposes the same interface as FieldSpec."""

    def __init__(self, modulus: Poly, require_field: bool = True):
        if modulus.degree < 1:
            raise DegreeMismatch("modulus must have degree >= 1")
        if require_field and not poly_is_irreducible(modulus):
            raise ModulusNotIrreducible(f"{modulus!r} is reducible")
        lead_inv = modulus.base.inv(modulus.coeffs[-1])
        self.modulus = Poly(modulus.base, tuple(modulus.base.mul(c, lead_inv) for c in modulus.coeffs))
        self.base = modulus.base
        self.ell = modulus.degree
        self.order = self.base.order ** self.ell
        self.is_field = require_field

    q = property(lambda self: self.order)
    zero = 0
    one = 1

    def __eq__(self, o):
        return isinstance(o, QuotientRing) and o.modulus == self.modulus

    def __hash__(self):
        return hash(("Q", self.modulus))

    def __repr__(self):
        return f"{self.base!r}[t]/({self.modulus!r})"

    def to_poly(self, x: int) -> Poly:
        qb = self.base.order
        c = []
        for _ in range(self.ell):
            x, r = divmod(x, qb)
            c.append(r)
        return Poly(self.base, tuple(c))

    def from_poly(self, a: Poly) -> int:
        return (a % self.modulus).enc(self.ell)

    def wrap(self, x: int) -> QuotientPoly:
        return QuotientPoly(self.modulus, self.to_poly(x))

    @cached_property
    def _tables(self):
        q = self.order
        elems = [self.to_poly(x) for x in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                s = self.from_poly(elems[a] + elems[b])
                pr = self.from_poly(elems[a] * elems[b])
                add[a, b] = add[b, a] = s
                mul[a, b] = mul[b, a] = pr
        neg = np.array([self.from_poly(-e) for e in elems], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hit = np.nonzero(mul[a] == 1)[0]
            inv[a] = int(hit[0]) if len(hit) else -1
        return add, mul, neg, inv

    @cached_property
    def add_table(self):
        return self._tables[0]

    @cached_property
    def mul_table(self):
        return self._tables[1]

    @cached_property
    def _lists(self):
        return tuple(t.tolist() for t in self._tables)

    def add(self, a, b):
        return self._lists[0][a][b]

    def neg(self, a):
        return self._lists[2][a]

    def sub(self, a, b):
        return self._lists[0][a][self._lists[2][b]]

    def mul(self, a, b):
        return self._lists[1][a][b]

    def inv(self, a):
        r = self._lists[3][a] if a else -1
        if r < 0:
            raise ZeroDivisionError("element is not invertible")
        return r

    def is_zero(self, a):
        return a == 0

    def enc(self, a):
        return a

    def dec(self, k):
        return k

    def elements(self):
        return range(self.order)


def pi_f(a: Poly, f: Poly) -> QuotientPoly:
    """Projection K[t] -> K[t]/(f)."""
    if not poly_is_irreducible(f):
        raise ModulusNotIrreducible(f"{f!r} is reducible")
    return QuotientPoly(f, a % f)


class PolyRing:
    """K[t] as a ring whose elements are ``Poly`` values (infinite; no encoding
    without an explicit degree bound)."""

    def __init__(self, base: FieldSpec):
        self.base = base
        self.order = None
        self.zero = Poly(base, ())
        self.one = Poly(base, (1,))

    def __eq__(self, o):
        return isinstance(o, PolyRing) and o.base == self.base

    def __hash__(self):
        return hash(("P", self.base))

    def __repr__(self):
        return f"{self.base!r}[t]"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a.degree == 0:
            return Poly(self.base, (self.base.inv(a.coeffs[0]),))
        raise ZeroDivisionError("non-unit in K[t]")

    def is_zero(self, a):
        return a.is_zero()

    def t(self) -> Poly:
        return Poly(self.base, (0, 1))

    def const(self, c: int) -> Poly:
        return Poly(self.base, (_norm_coeff(self.base, c),))


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RingMatrix:
    """Square matrix, entries in the ring's native representation (ints for
    finite fields and quotient rings, ``Poly`` for K[t])."""

    dim: int
    entries: tuple
    ring: object
    sl: bool = False

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.dim + j]

    def __matmul__(self, o: "RingMatrix") -> "RingMatrix":
        R, n = self.ring, self.dim
        a, b = self.entries, o.entries
        out = []
        zero = R.zero
        for i in range(n):
            for j in range(n):
                acc = zero
                for k in range(n):
                    x = a[i * n + k]
                    if R.is_zero(x):
                        continue
                    y = b[k * n + j]
                    if R.is_zero(y):
                        continue
                    acc = R.add(acc, R.mul(x, y))
                out.append(acc)
        return RingMatrix(n, tuple(out), R, self.sl and o.sl)

    def det(self):
        return determinant(self)

    def inverse(self) -> "RingMatrix":
        """Adjugate inverse; needs det to be a unit."""
        R, n = self.ring, self.dim
        d = R.inv(self.det())
        out = [None] * (n * n)
        for i in range(n):
            for j in range(n):
                minor = _minor(self, j, i)
                c = determinant(minor) if n > 1 else R.one
                if (i + j) % 2:
                    c = R.neg(c)
                out[i * n + j] = R.mul(c, d)
        return RingMatrix(n, tuple(out), R, self.sl)

    def is_identity(self) -> bool:
        R, n = self.ring, self.dim
        return all(self.entries[i * n + j] == (R.one if i == j else R.zero)
                   for i in range(n) for j in range(n))

    def rows(self):
        n = self.dim
        return [self.entries[i * n:(i + 1) * n] for i in range(n)]


def _minor(A: RingMatrix, r: int, c: int) -> RingMatrix:
    n = A.dim
    ent = tuple(A.entries[i * n + j] for i in range(n) for j in range(n) if i != r and j != c)
    return RingMatrix(n - 1, ent, A.ring)


def determinant(A: RingMatrix):
    """Leibniz expansion; matrices here are at most 6x6."""
    R, n = A.ring, A.dim
    if n == 0:
        return R.one
    total = R.zero
    for perm in itertools.permutations(range(n)):
        inv_count = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = R.one
        for i in range(n):
            x = A.entries[i * n + perm[i]]
            if R.is_zero(x):
                term = None
                break
            term = R.mul(term, x)
        if term is None:
            continue
        total = R.sub(total, term) if inv_count % 2 else R.add(total, term)
    return total


def identity_matrix(dim: int, ring) -> RingMatrix:
    ent = tuple(ring.one if i == j else ring.zero for i in range(dim) for j in range(dim))
    return RingMatrix(dim, ent, ring, True)


def elementary_matrix(n: int, i: int, j: int, a, ring) -> RingMatrix:
    """e_{i,j}(a) in SL_{n+1}; indices are 1-based as in the literature."""
    if i == j:
        raise DiagonalIndex("e_{i,i} is not elementary")
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise IndexError("index out of range")
    if isinstance(a, FieldElem):
        a = a.value
    elif isinstance(ring, PolyRing) and not isinstance(a, Poly):
        a = ring.const(a)
    elif isinstance(ring, FieldSpec) and isinstance(a, int) and ring.m == 1:
        a = a % ring.p
    dim = n + 1
    ent = list(identity_matrix(dim, ring).entries)
    ent[(i - 1) * dim + (j - 1)] = a
    return RingMatrix(dim, tuple(ent), ring, True)


def mat_pi_f(A: RingMatrix, target: QuotientRing) -> RingMatrix:
    """Entrywise projection K[t] -> K[t]/(f)."""
    if isinstance(target, Poly):
        target = QuotientRing(target)
    ent = tuple(target.from_poly(x) for x in A.entries)
    return RingMatrix(A.dim, ent, target, A.sl)


# --------------------------------------------------------------------------
# canonical keys
# --------------------------------------------------------------------------

def key_bits(dim: int, order: int) -> int:
    """Bits a fixed-width key needs: entries * ceil(log2 |R|)."""
    return dim * dim * max(1, math.ceil(math.log2(order)))


def encode(A: RingMatrix, degree_bound: int | None = None) -> int:
    """Row-major base-|R| key, entry (0, 0) most significant.  For K[t] a
    degree bound must be supplied; the base is then |K|**degree_bound."""
    R = A.ring
    if isinstance(R, PolyRing):
        if degree_bound is None:
            raise DegreeMismatch("polynomial matrices need a degree bound to be encoded")
        base = R.base.order ** degree_bound
        k = 0
        for x in A.entries:
            k = k * base + x.enc(degree_bound)
        return k
    base = R.order
    k = 0
    for x in A.entries:
        k = k * base + x
    return k


def decode(key: int, dim: int, ring, sl: bool = True, degree_bound: int | None = None) -> RingMatrix:
    if isinstance(ring, PolyRing):
        qb = ring.base.order
        base = qb ** degree_bound
    else:
        base = ring.order
    digits = []
    for _ in range(dim * dim):
        key, r = divmod(key, base)
        digits.append(r)
    if key:
        raise ValueError("key out of range for this shape")
    digits.reverse()
    if isinstance(ring, PolyRing):
        ent = []
        for d in digits:
            c = []
            for _ in range(degree_bound):
                d, r = divmod(d, qb)
                c.append(r)
            ent.append(Poly(ring.base, tuple(c)))
        digits = ent
    return RingMatrix(dim, tuple(digits), ring, sl)


def fixed_width_key(A: RingMatrix) -> np.uint64:
    """The key as a 64-bit word, or KeyWidthOverflow with the bit count."""
    bits = key_bits(A.dim, A.ring.order)
    if bits > 64:
        raise KeyWidthOverflow(bits)
    return np.uint64(encode(A))


def wide_key_limbs(key: int) -> list[int]:
    """Little-endian 64-bit limbs of a wide key (export format)."""
    if key == 0:
        return [0]
    out = []
    while key:
        out.append(key & 0xFFFFFFFFFFFFFFFF)
        key >>= 64
    return out


def limbs_to_key(limbs) -> int:
    return sum(int(x) << (64 * i) for i, x in enumerate(limbs))
