"""Exact arithmetic in the tower F_p ⊂ F_q = F_p[y]/(f) ⊂ F_{q^m} = F_q[z]/(g).

Elements of every level are plain Python/numpy integers. An element of
F_{q^m} with coefficients c_0 + c_1 z + ... + c_{m-1} z^{m-1} (each c_j in
F_q) is encoded as ``sum(c_j * q**j)``, and each c_j is itself encoded as the
integer of its F_p-coefficients read little-endian. The encoding of a tower
element is therefore just its base-p digit string, which makes addition
digitwise mod p at every level, and the embedded copy of F_q is exactly the
integers ``0 .. q-1``. The integer value is also the canonical element order.

Multiplication goes through discrete log / antilog tables built once per
level. Towers are capped at ``SIZE_CAP`` elements.
"""

from __future__ import annotations

import functools
import math
from typing import Iterator, Sequence

import numpy as np
import sympy

from .errors import (
    FieldDivisionByZero,
    NonPrimeError,
    NotIrreducibleError,
    ParameterError,
    SizeCapExceeded,
)

SIZE_CAP = 1 << 20
_ADD_TABLE_CAP = 1 << 10


# ---------------------------------------------------------------------------
# polynomial helpers over an arbitrary level (coefficients little-endian)
# ---------------------------------------------------------------------------


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _psub(F, a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return _ptrim(out)


def _pmod(F, a: Sequence[int], mod: Sequence[int]) -> list[int]:
    a = _ptrim(list(a))
    d = len(mod) - 1
    lead_inv = F.inv(mod[-1])
    while len(a) - 1 >= d:
        c = F.mul(a[-1], lead_inv)
        shift = len(a) - 1 - d
        for i, mi in enumerate(mod):
            if mi:
                a[shift + i] = F.sub(a[shift + i], F.mul(c, mi))
        _ptrim(a)
    return a


def _pmul(F, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _ptrim(out)


def _pmulmod(F, a, b, mod) -> list[int]:
    return _pmod(F, _pmul(F, a, b), mod)


def _ppowmod(F, a, n: int, mod) -> list[int]:
    result = [1]
    base = _pmod(F, a, mod)
    while n:
        if n & 1:
            result = _pmulmod(F, result, base, mod)
        n >>= 1
        if n:
            base = _pmulmod(F, base, base, mod)
    return result


def _pgcd(F, a, b) -> list[int]:
    a = _ptrim(list(a))
    b = _ptrim(list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    return a


def _peval(F, poly: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _is_irreducible(F, poly: Sequence[int]) -> bool:
    """Rabin's test: no factor of degree d/r for any prime r | d, and x^(s^d) = x."""
    poly = _ptrim(list(poly))
    d = len(poly) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if poly[0] == 0:
        return False
    s = F.size
    x = [0, 1]
    frob = [x]  # frob[i] = x^(s^i) mod poly
    h = x
    for _ in range(d):
        h = _ppowmod(F, h, s, poly)
        frob.append(h)
    if _psub(F, frob[d], x):
        return False
    for r in sympy.primefactors(d):
        diff = _psub(F, frob[d // r], x)
        if len(_pgcd(F, poly, diff)) > 1:
            return False
    return True


def _int_to_digits(value: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        value, rem = divmod(value, base)
        out.append(rem)
    return out


def _digits_to_int(digits: Sequence[int], base: int) -> int:
    acc = 0
    for d in reversed(digits):
        acc = acc * base + int(d)
    return acc


# ---------------------------------------------------------------------------
# field levels
# ---------------------------------------------------------------------------


class _DigitAdder:
    """Digitwise base-p addition shared by every level."""

    def _init_adder(self, p: int, ndigits: int):
        self.p = p
        self._pw = [p**i for i in range(ndigits)]
        self._ndigits = ndigits
        self._add_table = None
        self._neg_table = None
        size = p**ndigits
        if p != 2:
            elems = np.arange(size, dtype=np.int64)
            neg = np.zeros(size, dtype=np.int64)
            for w in self._pw:
                neg += ((p - (elems // w) % p) % p) * w
            self._neg_table = neg
            if size <= _ADD_TABLE_CAP:
                self._add_table = self._digit_vadd(elems[:, None], elems[None, :])

    def _digit_vadd(self, a, b):
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += (((a // w) + (b // w)) % p) * w
        return out

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return int(self._add_table[a, b])
        p = self.p
        out = 0
        for w in self._pw:
            out += ((a // w + b // w) % p) * w
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digit_vadd(a, b)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self._neg_table[a]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))


class _PrimeLevel(_DigitAdder):
    def __init__(self, p: int):
        self.size = p
        self._init_adder(p, 1)

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.size

    def inv(self, a: int) -> int:
        if a % self.size == 0:
            raise FieldDivisionByZero("inverse of zero")
        return pow(a, self.size - 2, self.size)

    def vmul(self, a, b):
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.size


class _ExtLevel(_DigitAdder):
    """base[x]/(modulus) with log/antilog tables."""

    def __init__(self, base, modulus: Sequence[int]):
        self.base = base
        self.modulus = tuple(int(c) for c in modulus)
        self.degree = len(self.modulus) - 1
        s = base.size
        self.size = s**self.degree
        self._init_adder(base.p, base._ndigits * self.degree)
        self.generator = self._find_generator()
        self._build_tables()

    # scalar polynomial multiplication, used only to bootstrap the tables
    def _poly_of(self, x: int) -> list[int]:
        return _ptrim(_int_to_digits(x, self.base.size, self.degree))

    def _int_of(self, poly: Sequence[int]) -> int:
        return _digits_to_int(list(poly) + [0] * (self.degree - len(poly)), self.base.size)

    def slow_mul(self, a: int, b: int) -> int:
        """Multiply by explicit polynomial reduction; independent of the tables."""
        prod = _pmulmod(self.base, self._poly_of(a), self._poly_of(b), self.modulus)
        return self._int_of(prod)

    def _find_generator(self) -> int:
        order = self.size - 1
        if order == 1:
            return 1
        cofactors = [order // r for r in sympy.primefactors(order)]
        for cand in range(1, self.size):
            poly = self._poly_of(cand)
            if all(
                _ppowmod(self.base, poly, c, self.modulus) != [1] for c in cofactors
            ):
                return cand
        raise NotIrreducibleError("no generator found; modulus is not irreducible")

    def _build_tables(self):
        s, d, S = self.base.size, self.degree, self.size
        elems = np.arange(S, dtype=np.int64)
        digits = [(elems // s**j) % s for j in range(d)]
        gdig = _int_to_digits(self.generator, s, d)
        B = self.base
        prod = [np.zeros(S, dtype=np.int64) for _ in range(2 * d - 1)]
        for i in range(d):
            for j in range(d):
                if gdig[j]:
                    prod[i + j] = B.vadd(prod[i + j], B.vmul(digits[i], gdig[j]))
        for deg in range(2 * d - 2, d - 1, -1):
            c = prod[deg]
            for t in range(d):
                if self.modulus[t]:
                    prod[deg - d + t] = B.vsub(prod[deg - d + t], B.vmul(c, self.modulus[t]))
        times_gen = np.zeros(S, dtype=np.int64)
        for j in range(d):
            times_gen += prod[j] * s**j
        step = times_gen.tolist()
        exp = [0] * (S - 1)
        x = 1
        for i in range(S - 1):
            exp[i] = x
            x = step[x]
        if x != 1 or len(set(exp)) != S - 1:
            raise NotIrreducibleError("modulus does not define a field")
        log = [0] * S
        for i, v in enumerate(exp):
            log[v] = i
        self._exp_l = exp + exp
        self._log_l = log
        self._exp = np.array(self._exp_l, dtype=np.int64)
        self._log = np.array(log, dtype=np.int64)
        self._exp.flags.writeable = False
        self._log.flags.writeable = False

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_l[self._log_l[a] + self._log_l[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionByZero("inverse of zero")
        return self._exp_l[(self.size - 1 - self._log_l[a]) % (self.size - 1)]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise FieldDivisionByZero("negative power of zero")
            return 0 if n > 0 else 1
        return self._exp_l[(self._log_l[a] * n) % (self.size - 1)]

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        r = self._exp[(self._log[a] * (n % (self.size - 1))) % (self.size - 1)]
        if n == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, r)


# ---------------------------------------------------------------------------
# the public tower
# ---------------------------------------------------------------------------


def canonical_irreducible(base, d: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``d`` over ``base``.

    Candidates are ordered by the integer value of their non-leading
    coefficient tuple read little-endian, i.e. the canonical element order
    applied to ``(c_0, ..., c_{d-1})`` with ``c_0`` least significant.
    ``base`` is any level (or a ``FieldTower``, meaning its top field).
    Returns the little-endian coefficient tuple including the leading 1.
    """
    F = base._top if isinstance(base, FieldTower) else base
    if d < 1:
        raise ParameterError("degree must be >= 1")
    if F.size**d > SIZE_CAP:
        raise SizeCapExceeded(f"search space {F.size}^{d} exceeds cap {SIZE_CAP}")
    for val in range(F.size**d):
        poly = _int_to_digits(val, F.size, d) + [1]
        if _is_irreducible(F, poly):
            return tuple(poly)
    raise AssertionError("irreducible polynomials exist in every degree")


def count_irreducibles(base_size: int, d: int = 3) -> int:
    """Number of monic irreducibles of degree ``d`` over a field of ``base_size`` elements."""
    total = sum(sympy.mobius(e) * base_size ** (d // e) for e in sympy.divisors(d))
    return int(total) // d


def count_irreducible_cubics_by_roots(tower: "FieldTower") -> int:
    """Count monic cubics over the top field of ``tower`` that have no root.

    A cubic is irreducible iff it has no root, so this is an independent
    exhaustive check of ``count_irreducibles(Q, 3)``.
    """
    Q = tower.order
    x = np.arange(Q, dtype=np.int64)
    x3 = tower.vmul(tower.vmul(x, x), x)
    x2 = tower.vmul(x, x)
    count = 0
    for a in range(Q):
        ax2 = tower.vmul(a, x2)
        for b in range(Q):
            partial = tower.vadd(tower.vadd(x3, ax2), tower.vmul(b, x))
            # a root exists for constant c iff -c is a value of partial
            hit = np.zeros(Q, dtype=bool)
            hit[tower.vneg(partial)] = True
            count += int(Q - hit.sum())
    return count


class FieldTower:
    """The tower F_p ⊂ F_q ⊂ F_{q^m} with explicit moduli ``f`` and ``g``.

    Build with :func:`make_tower` for canonical moduli. Explicit moduli
    (e.g. from JSON) are checked for irreducibility.
    """

    def __init__(self, p: int, e: int, m: int, f: Sequence[int] | None = None,
                 g: Sequence[int] | None = None):
        p, e, m = int(p), int(e), int(m)
        if p < 2 or not sympy.isprime(p):
            raise NonPrimeError(f"{p} is not prime")
        if e < 1 or m < 1:
            raise ParameterError("extension degrees must be >= 1")
        if p ** (e * m) > SIZE_CAP:
            raise SizeCapExceeded(f"|F_q^m| = {p}^{e * m} exceeds cap {SIZE_CAP}")
        self.p, self.e, self.m = p, e, m
        self.q = p**e
        self.order = self.q**m
        prime = _PrimeLevel(p)
        if f is None:
            f = canonical_irreducible(prime, e)
        else:
            f = self._check_modulus(prime, f, e, "f")
        self.f = tuple(int(c) for c in f)
        self._fq = _ExtLevel(prime, self.f)
        if g is None:
            g = canonical_irreducible(self._fq, m)
        else:
            g = self._check_modulus(self._fq, g, m, "g")
        self.g = tuple(int(c) for c in g)
        self._top = _ExtLevel(self._fq, self.g)

    @staticmethod
    def _check_modulus(F, poly, d, name):
        poly = [int(c) for c in poly]
        if len(poly) != d + 1 or poly[-1] != 1:
            raise NotIrreducibleError(f"{name} must be monic of degree {d}")
        if any(not 0 <= c < F.size for c in poly):
            raise NotIrreducibleError(f"{name} has coefficients outside the base field")
        if not _is_irreducible(F, poly):
            raise NotIrreducibleError(f"{name} = {poly} is reducible")
        return poly

    # identity ---------------------------------------------------------------
    def _key(self):
        return (self.p, self.e, self.m, self.f, self.g)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, m={self.m}, f={list(self.f)}, g={list(self.g)})"

    # element access ---------------------------------------------------------
    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def nonzero(self) -> Iterator[int]:
        return iter(range(1, self.order))

    def base_elements(self) -> Iterator[int]:
        """The embedded F_q, in canonical order."""
        return iter(range(self.q))

    def in_base(self, x: int) -> bool:
        return 0 <= x < self.q

    def to_coeffs(self, x: int) -> list[int]:
        """F_q-coordinates of ``x`` in the basis 1, z, ..., z^{m-1}."""
        return _int_to_digits(int(x), self.q, self.m)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.m or any(not 0 <= int(c) < self.q for c in coeffs):
            raise ParameterError(f"expected {self.m} coefficients in [0, {self.q})")
        return _digits_to_int(coeffs, self.q)

    def fq_digits(self, c: int) -> list[int]:
        """F_p-coordinates of an F_q element in the basis 1, y, ..., y^{e-1}."""
        return _int_to_digits(int(c), self.p, self.e)

    def fq_from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) != self.e or any(not 0 <= int(d) < self.p for d in digits):
            raise ParameterError(f"expected {self.e} digits in [0, {self.p})")
        return _digits_to_int(digits, self.p)

    def check(self, x) -> int:
        x = int(x)
        if not 0 <= x < self.order:
            raise ParameterError(f"{x} is not an element of F_{self.order}")
        return x

    # scalar arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return self._top.add(a, b)

    def sub(self, a: int, b: int) -> int:
        return self._top.sub(a, b)

    def neg(self, a: int) -> int:
        return self._top.neg(a)

    def mul(self, a: int, b: int) -> int:
        return self._top.mul(a, b)

    def inv(self, a: int) -> int:
        return self._top.inv(a)

    def div(self, a: int, b: int) -> int:
        return self._top.mul(a, self._top.inv(b))

    def pow(self, a: int, n: int) -> int:
        return self._top.power(a, n)

    def slow_mul(self, a: int, b: int) -> int:
        """Multiplication by polynomial reduction modulo g (no tables)."""
        return self._top.slow_mul(a, b)

    def frobenius(self, a: int, i: int = 1) -> int:
        """a^(q^i)."""
        if i < 0:
            raise ParameterError("frobenius power must be >= 0")
        if a == 0:
            return 0
        return self._top.power(a, pow(self.q, i, self.order - 1) if self.order > 2 else 1)

    def norm(self, a: int) -> int:
        """N(a) = a * a^q * ... * a^{q^{m-1}}, an element of F_q."""
        acc = 1
        for i in range(self.m):
            acc = self.mul(acc, self.frobenius(a, i))
        if not self.in_base(acc):
            raise AssertionError("norm left the base field")
        return acc

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ParameterError("zero has no multiplicative order")
        n = self.order - 1
        return n // math.gcd(self._top._log_l[a], n)

    def primitive_element(self) -> int:
        """First element in canonical order of multiplicative order q^m - 1.

        For the two-element field this is 1 (the group has order 1).
        """
        n = self.order - 1
        for x in range(1, self.order):
            if math.gcd(self._top._log_l[x], n) == 1:
                return x
        raise AssertionError("a finite field always has a generator")

    # vectorised arithmetic (numpy int64 arrays) ------------------------------
    def vadd(self, a, b):
        return self._top.vadd(a, b)

    def vsub(self, a, b):
        return self._top.vsub(a, b)

    def vneg(self, a):
        return self._top.vneg(a)

    def vmul(self, a, b):
        return self._top.vmul(a, b)

    def vpow(self, a, n: int):
        return self._top.vpow(a, n)

    def vfrobenius(self, a, i: int = 1):
        if self.order == 2:
            return np.asarray(a, dtype=np.int64)
        return self._top.vpow(a, pow(self.q, i, self.order - 1) or (self.order - 1))

    def vcoeffs(self, a):
        """F_q-coordinates of every entry: shape ``a.shape + (m,)``."""
        a = np.asarray(a, dtype=np.int64)
        w = self.q ** np.arange(self.m, dtype=np.int64)
        return (a[..., None] // w) % self.q

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        if self.e == 1:
            g = list(self.g)
        else:
            g = [self.fq_digits(c) for c in self.g]
        return {"p": self.p, "e": self.e, "m": self.m, "f": list(self.f), "g": g}

    @classmethod
    def from_json(cls, data: dict) -> "FieldTower":
        p, e, m = int(data["p"]), int(data["e"]), int(data["m"])
        f = data.get("f")
        g = data.get("g")
        if g is not None and e > 1:
            q = p**e
            g = [_digits_to_int(c, p) if isinstance(c, list) else int(c) for c in g]
            if any(not 0 <= c < q for c in g):
                raise ParameterError("g coefficient outside F_q")
        if f is None and g is None:
            return make_tower(p, e, m)
        return cls(p, e, m, f=f, g=g)

    def element_to_json(self, x: int):
        coeffs = self.to_coeffs(x)
        if self.e == 1:
            return coeffs
        return [self.fq_digits(c) for c in coeffs]

    def element_from_json(self, data) -> int:
        if isinstance(data, int):
            return self.check(data)
        coeffs = [
            self.fq_from_digits(c) if isinstance(c, list) else int(c) for c in data
        ]
        return self.from_coeffs(coeffs)


@functools.lru_cache(maxsize=64)
def make_tower(p: int, e: int = 1, m: int = 1) -> FieldTower:
    """Tower with canonical (lexicographically smallest) moduli; cached."""
    return FieldTower(p, e, m)


def tower_for_q(q: int, m: int) -> FieldTower:
    """``make_tower`` addressed by the base-field size q instead of (p, e)."""
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise NonPrimeError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return make_tower(p, e, m)


def arith(tower: FieldTower, a: int, b: int | None, op: str, n: int | None = None) -> int:
    """Dispatch one of add/sub/mul/div/neg/inv/pow by name."""
    if op == "add":
        return tower.add(a, b)
    if op == "sub":
        return tower.sub(a, b)
    if op == "mul":
        return tower.mul(a, b)
    if op == "div":
        return tower.div(a, b)
    if op == "neg":
        return tower.neg(a)
    if op == "inv":
        return tower.inv(a)
    if op == "pow":
        return tower.pow(a, n if n is not None else b)
    raise ParameterError(f"unknown operation {op!r}")


def norm(tower: FieldTower, a: int) -> int:
    return tower.norm(a)


def frobenius(tower: FieldTower, a: int, i: int = 1) -> int:
    return tower.frobenius(a, i)


def primitive_element(tower: FieldTower) -> int:
    return tower.primitive_element()
