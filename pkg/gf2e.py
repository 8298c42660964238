"""gf2e.py
Arithmetic in GF(2^h), 1 <= h <= 16.

Field elements are plain Python ints holding the coefficient vector in the
polynomial basis (bit i is the coefficient of z^i).  A `FieldCtx` owns the
modulus plus log/antilog tables; every hot path in the package calls its
methods directly on ints.  `GFElement` is a small operator-overloading wrapper
for interactive use and for the public `mul`/`inv`/`trace_*` helpers, which
refuse to mix elements of different contexts.

Three degrees use fixed moduli so that worked examples can be reproduced
literally:

    h = 4   z^4 = z + 1
    h = 6   z^6 = z^4 + z^3 + z + 1
    h = 7   z^7 = z + 1

Every other degree uses the least irreducible polynomial.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from errors import FieldContextError

logger = logging.getLogger(__name__)

MAX_DEGREE = 16

DEFAULT_MODULI = {
    4: 0b10011,
    6: 0b1011011,
    7: 0b10000011,
}


# ---------------------------------------------------------------------------
# Polynomial helpers over F2
# ---------------------------------------------------------------------------

def _deg(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    """Remainder of a modulo m, both polynomials over F2 as bit-masks."""
    dm = _deg(m)
    while a and _deg(a) >= dm:
        a ^= m << (_deg(a) - dm)
    return a


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-masks."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def is_irreducible(poly: int) -> bool:
    """True iff `poly` (degree >= 1) has no factor of degree 1..deg/2."""
    d = _deg(poly)
    if d < 1:
        return False
    for p in range(2, 1 << (d // 2 + 1)):
        if poly_mod(poly, p) == 0:
            return False
    return True


def least_irreducible(h: int) -> int:
    for poly in range((1 << h) | 1, 1 << (h + 1), 2):
        if is_irreducible(poly):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {h}")  # pragma: no cover


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

class FieldCtx:
    """GF(2^h) with a fixed irreducible modulus.

    Immutable after construction; safe to share across threads.
    """

    __slots__ = ("h", "q", "modulus", "generator", "_exp", "_log",
                 "_exp_np", "_log_np", "_tmask")

    def __init__(self, h: int, modulus: Optional[int] = None):
        if not 1 <= h <= MAX_DEGREE:
            raise ValueError(f"field degree h={h} outside 1..{MAX_DEGREE}")
        if modulus is None:
            modulus = DEFAULT_MODULI.get(h) or least_irreducible(h)
        if _deg(modulus) != h:
            raise ValueError(f"modulus {modulus:#x} does not have degree {h}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible over F2")

        self.h = h
        self.q = 1 << h
        self.modulus = modulus
        self.generator = self._least_primitive()
        self._build_tables()
        self._tmask = self._trace_mask()
        logger.debug("built GF(2^%d) modulus=%#x generator=%#x", h, modulus, self.generator)

    # -- construction -------------------------------------------------------

    def slow_mul(self, a: int, b: int) -> int:
        """Shift-and-reduce product; used before the tables exist."""
        return poly_mod(clmul(a, b), self.modulus)

    def _slow_pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self.slow_mul(r, a)
            a = self.slow_mul(a, a)
            n >>= 1
        return r

    def _least_primitive(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // p) != 1 for p in factors):
                return g
        raise ValueError("field has no primitive element")  # pragma: no cover

    def _build_tables(self) -> None:
        n = self.q - 1
        exp = [0] * (2 * n)
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.slow_mul(x, self.generator)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    def _trace_mask(self) -> int:
        mask = 0
        for j in range(self.h):
            y, t = 1 << j, 0
            for _ in range(self.h):
                t ^= y
                y = self.mul(y, y)
            if t not in (0, 1):
                raise ValueError("trace left the prime field")  # pragma: no cover
            mask |= t << j
        return mask

    # -- identity -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and (self.h, self.modulus) == (other.h, other.modulus)

    def __hash__(self) -> int:
        return hash((self.h, self.modulus))

    def __repr__(self) -> str:
        return f"FieldCtx(h={self.h}, modulus={self.modulus:#x})"

    @classmethod
    def for_degree(cls, h: int) -> "FieldCtx":
        """Shared default context for degree h."""
        return _default_ctx(h)

    def to_dict(self) -> dict:
        return {"h": self.h, "modulus": format(self.modulus, "x")}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldCtx":
        h = int(data["h"])
        modulus = int(str(data["modulus"]), 16)
        if modulus == DEFAULT_MODULI.get(h, least_irreducible(h)):
            return _default_ctx(h)
        return cls(h, modulus)

    # -- scalar arithmetic on ints -------------------------------------------

    def check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise ValueError(f"{x:#x} is not an element of GF(2^{self.h})")
        return x

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^h)")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^h)")
        if a == 0:
            return 0
        n = self.q - 1
        return self._exp[(self._log[a] - self._log[b]) % n]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, i: int) -> int:
        """generator**i"""
        return self._exp[i % (self.q - 1)]

    def frobenius(self, x: int, k: int) -> int:
        """x^(2^k); k is taken modulo h."""
        k %= self.h
        if k == 0 or x == 0:
            return x
        return self._exp[(self._log[x] << k) % (self.q - 1)]

    def sqrt(self, x: int) -> int:
        return self.frobenius(x, self.h - 1)

    def trace(self, x: int) -> int:
        return bin(x & self._tmask).count("1") & 1

    @property
    def trace_mask(self) -> int:
        """Bit j is Tr(z^j); Tr(x) is the parity of x & trace_mask."""
        return self._tmask

    def trace_rel(self, x: int, h_prime: int) -> int:
        """Relative trace onto the subfield of order 2^h_prime."""
        if h_prime < 1 or self.h % h_prime:
            raise ValueError(f"{h_prime} does not divide {self.h}")
        acc, y = 0, x
        for _ in range(self.h // h_prime):
            acc ^= y
            y = self.frobenius(y, h_prime)
        return acc

    def subfield(self, h_prime: int) -> List[int]:
        """Sorted elements of the fixed field of x -> x^(2^h_prime)."""
        if h_prime < 1 or self.h % h_prime:
            raise ValueError(f"{h_prime} does not divide {self.h}")
        return [x for x in range(self.q) if self.frobenius(x, h_prime) == x]

    def embedding(self, small: "FieldCtx") -> List[int]:
        """Monomorphism GF(2^m) -> self as a lookup list indexed by small elements.

        z (bit 1) of the small field goes to the least root of the small modulus.
        """
        if self.h % small.h:
            raise ValueError(f"GF(2^{small.h}) does not embed in GF(2^{self.h})")
        root = None
        for r in range(self.q):
            if self.eval_poly(small.modulus, r) == 0:
                root = r
                break
        if root is None:  # pragma: no cover
            raise ValueError("small modulus has no root in the big field")
        powers = [self.power(root, i) for i in range(small.h)]
        table = [0] * small.q
        for x in range(1, small.q):
            low = x & -x
            table[x] = table[x ^ low] ^ powers[low.bit_length() - 1]
        return table

    def eval_poly(self, poly: int, x: int) -> int:
        """Evaluate an F2[X] polynomial (bit-mask) at x by Horner's rule."""
        acc = 0
        for i in range(_deg(poly), -1, -1):
            acc = self.mul(acc, x) ^ ((poly >> i) & 1)
        return acc

    # -- numpy ----------------------------------------------------------------

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(2^h)")
        return self._exp_np[(self.q - 1 - self._log_np[a]) % (self.q - 1)]

    def pow_array(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = self._exp_np[(self._log_np[a] * n) % (self.q - 1)]
        return np.where(a == 0, 1 if n == 0 else 0, out)

    def trace_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) & self._tmask
        bits = np.zeros(a.shape, dtype=np.int64)
        for j in range(self.h):
            bits ^= (a >> j) & 1
        return bits

    # -- elements -------------------------------------------------------------

    def element(self, bits: int) -> "GFElement":
        return GFElement(self, self.check(int(bits)))

    def zero(self) -> "GFElement":
        return GFElement(self, 0)

    def one(self) -> "GFElement":
        return GFElement(self, 1)

    def elements(self) -> range:
        return range(self.q)

    def parse(self, text: str) -> int:
        """Lowercase-or-uppercase hex (optional 0x) to an element."""
        return self.check(int(text.strip(), 16))


def element_hex(x: int) -> str:
    return format(x, "x")


@functools.lru_cache(maxsize=None)
def _default_ctx(h: int) -> FieldCtx:
    return FieldCtx(h)


# ---------------------------------------------------------------------------
# Element wrapper
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GFElement:
    ctx: FieldCtx
    bits: int

    def _other(self, other: object) -> int:
        if isinstance(other, GFElement):
            if other.ctx != self.ctx:
                raise FieldContextError(f"{other.ctx!r} mixed with {self.ctx!r}")
            return other.bits
        if isinstance(other, int):
            return self.ctx.check(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "GFElement":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElement(self.ctx, self.bits ^ o)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other: object) -> "GFElement":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElement(self.ctx, self.ctx.mul(self.bits, o))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "GFElement":
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElement(self.ctx, self.ctx.div(self.bits, o))

    def __pow__(self, n: int) -> "GFElement":
        return GFElement(self.ctx, self.ctx.power(self.bits, n))

    def __neg__(self) -> "GFElement":
        return self

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def __index__(self) -> int:
        return self.bits

    def __repr__(self) -> str:
        return f"GF(2^{self.ctx.h})[{self.bits:#x}]"

    def inverse(self) -> "GFElement":
        return GFElement(self.ctx, self.ctx.inv(self.bits))

    def trace(self) -> int:
        return self.ctx.trace(self.bits)

    def frobenius(self, k: int) -> "GFElement":
        return GFElement(self.ctx, self.ctx.frobenius(self.bits, k))

    def hex(self) -> str:
        return element_hex(self.bits)


# ---------------------------------------------------------------------------
# Functional API
# ---------------------------------------------------------------------------

def _same_ctx(*elems: GFElement) -> FieldCtx:
    ctx = elems[0].ctx
    for e in elems[1:]:
        if e.ctx != ctx:
            raise FieldContextError(f"{e.ctx!r} mixed with {ctx!r}")
    return ctx


def mul(a: GFElement, b: GFElement) -> GFElement:
    ctx = _same_ctx(a, b)
    return GFElement(ctx, ctx.mul(a.bits, b.bits))


def inv(a: GFElement) -> GFElement:
    return a.inverse()


def trace_abs(x: GFElement) -> int:
    return x.ctx.trace(x.bits)


def trace_rel(x: GFElement, h_prime: int) -> GFElement:
    return GFElement(x.ctx, x.ctx.trace_rel(x.bits, h_prime))


def frobenius(x: GFElement, k: int) -> GFElement:
    if not 0 <= k < x.ctx.h:
        raise ValueError(f"Frobenius exponent {k} outside 0..{x.ctx.h - 1}")
    return x.frobenius(k)


def sqrt(x: GFElement) -> GFElement:
    return GFElement(x.ctx, x.ctx.sqrt(x.bits))


def parse_element(ctx: FieldCtx, text: str) -> int:
    return ctx.parse(text)


def parse_elements(ctx: FieldCtx, text: str) -> List[int]:
    """Comma separated hex list, e.g. '2,4,10'."""
    return [ctx.parse(t) for t in text.split(",") if t.strip()]


def elements_hex(xs: Iterable[int]) -> List[str]:
    return [element_hex(x) for x in xs]


def linear_combination(coeffs: Sequence[int], basis: Sequence[int]) -> int:
    """Sum of the basis elements selected by the 0/1 coefficients."""
    acc = 0
    for c, b in zip(coeffs, basis):
        if c:
            acc ^= b
    return acc
