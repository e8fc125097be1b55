"""Finite field arithmetic on integer-encoded elements.

An element of GF(p^r) is an int in range(q): the polynomial
c_0 + c_1 x + ... + c_{r-1} x^{r-1} is encoded as c_0 + c_1 p + ... +
c_{r-1} p^{r-1}.  Multiplication runs over log/antilog tables for a fixed
generator xi of the multiplicative group; addition is XOR for p = 2 and
digitwise mod p otherwise.  Elements are ordered zero-first and then by
discrete log: 0 < 1 = xi^0 < xi < xi^2 < ...  (``rank`` exposes the order).
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityExceeded, ShapeError

MAX_Q = 1 << 16

_FIELD_CACHE = {}


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class GF:
    """The field GF(p^r) with q = p^r <= 2^16, elements encoded as ints."""

    def __new__(cls, p, r=1, modulus=None):
        key = (p, r, tuple(int(c) for c in modulus) if modulus is not None else None)
        inst = _FIELD_CACHE.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(p, r, modulus)
            # one object per resolved modulus, however the field was asked for
            resolved = (p, r, inst.modulus)
            inst = _FIELD_CACHE.setdefault(resolved, inst)
            _FIELD_CACHE[key] = inst
        return inst

    def _init(self, p, r, modulus):
        if not _is_prime(p):
            raise ShapeError("field characteristic %r is not prime" % (p,))
        if r < 1:
            raise ShapeError("field extension degree must be >= 1")
        q = p**r
        if q > MAX_Q:
            raise CapacityExceeded("field size %d exceeds %d" % (q, MAX_Q), q)
        self.p = p
        self.r = r
        self.q = q
        if modulus is not None:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != r + 1 or modulus[r] != 1:
                raise ShapeError("modulus must be monic of degree r")
            if r == 1 and modulus != (0, 1):
                # degree-1 modulus x + c identifies x with -c; normalize away
                raise ShapeError("for r = 1 the only supported modulus is x")
            self.modulus = modulus
            if r == 1:
                self._build_prime_tables()
            elif not self._try_build_tables_from_x():
                self._check_irreducible()
                self._build_tables_generic()
        else:
            self.modulus = self._pick_modulus()
        self._exp_list = self._exp.tolist()
        self._log_list = self._log.tolist()
        self.xi = self._exp_list[1] if q > 2 else 1
        self._init_addition()
        self._frob_tables = {}
        self._mul_table = None

    # -- construction helpers -------------------------------------------

    def _mul_by_x(self, a):
        """Multiply the encoded polynomial a by x and reduce mod modulus."""
        p, r = self.p, self.r
        shifted = a * p
        top, rem = divmod(shifted, p**r)
        if top == 0:
            return rem
        out = rem
        # subtract top * (modulus - x^r), digit by digit
        for i in range(r):
            c = self.modulus[i]
            if c == 0:
                continue
            pi = p**i
            di = (out // pi) % p
            out += (((di - top * c) % p) - di) * pi
        return out

    def _try_build_tables_from_x(self):
        """Build exp/log with xi = x; succeeds iff x has order q - 1."""
        q = self.q
        if self.r == 1:
            return False
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        a = 1
        for j in range(q - 1):
            if log[a] >= 0:
                return False
            exp[j] = a
            log[a] = j
            a = self._mul_by_x(a)
        if a != 1:
            return False
        self._exp = exp
        self._log = log
        return True

    def _pick_modulus(self):
        p, r = self.p, self.r
        if r == 1:
            # modulus is x itself; xi = least primitive root mod p
            self._build_prime_tables()
            return (0, 1)
        for low in range(p**r):
            digits = []
            v = low
            for _ in range(r):
                digits.append(v % p)
                v //= p
            self.modulus = tuple(digits) + (1,)
            if self._try_build_tables_from_x():
                return self.modulus
        raise ShapeError("no primitive modulus found (unreachable)")

    def _build_prime_tables(self):
        p = self.p
        if p == 2:
            self._exp = np.array([1], dtype=np.int64)
            self._log = np.array([-1, 0], dtype=np.int64)
            return
        facs = _prime_factors(p - 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // f, p) != 1 for f in facs):
                break
        else:
            raise ShapeError("no primitive root (unreachable)")
        exp = np.zeros(p - 1, dtype=np.int64)
        log = np.full(p, -1, dtype=np.int64)
        a = 1
        for j in range(p - 1):
            exp[j] = a
            log[a] = j
            a = a * g % p
        self._exp = exp
        self._log = log

    def _poly_mul_mod(self, a, b):
        """Product of two encoded polynomials reduced mod modulus."""
        p = self.p
        da = []
        while a:
            da.append(a % p)
            a //= p
        acc = 0
        for d in reversed(da):
            acc = self._mul_by_x(acc)
            if d:
                acc = self._poly_add(acc, self._poly_scale(b, d))
        return acc

    def _poly_add(self, a, b):
        p = self.p
        out = 0
        pi = 1
        for _ in range(self.r):
            out += ((a % p + b % p) % p) * pi
            a //= p
            b //= p
            pi *= p
        return out

    def _poly_scale(self, a, c):
        p = self.p
        out = 0
        pi = 1
        for _ in range(self.r):
            out += (a % p * c % p) * pi
            a //= p
            pi *= p
        return out

    def _check_irreducible(self):
        """Rabin test on coefficient lists: x^(p^r) = x mod m, and
        gcd(x^(p^(r/ell)) - x, m) = 1 for every prime ell dividing r."""
        p, r = self.p, self.r
        m = list(self.modulus)

        def trim(a):
            while a and a[-1] == 0:
                a.pop()
            return a

        def pmod(a, b):
            a = a[:]
            binv = pow(b[-1], p - 2, p) if p > 2 else 1
            while len(a) >= len(b):
                if a[-1] == 0:
                    a.pop()
                    continue
                c = a[-1] * binv % p
                off = len(a) - len(b)
                for i in range(len(b)):
                    a[off + i] = (a[off + i] - c * b[i]) % p
                trim(a)
            return a

        def pmul(a, b):
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] = (out[i + j] + ai * bj) % p
            return trim(out)

        def pgcd(a, b):
            a, b = trim(a[:]), trim(b[:])
            while b:
                a, b = b, pmod(a, b)
            return a

        def pow_p(a):
            out, base, e = [1], a, p
            while e:
                if e & 1:
                    out = pmod(pmul(out, base), m)
                base = pmod(pmul(base, base), m)
                e >>= 1
            return out

        def psub(a, b):
            n = max(len(a), len(b))
            a = a + [0] * (n - len(a))
            b = b + [0] * (n - len(b))
            return trim([(ai - bi) % p for ai, bi in zip(a, b)])

        x = [0, 1]
        t = x[:]
        for _ in range(r):
            t = pow_p(t)
        if psub(t, x):
            raise ShapeError("modulus is not irreducible")
        for ell in _prime_factors(r):
            t = x[:]
            for _ in range(r // ell):
                t = pow_p(t)
            g = pgcd(psub(t, x), m)
            if len(g) != 1:
                raise ShapeError("modulus is not irreducible")

    def _build_tables_generic(self):
        """Tables for an irreducible modulus whose x is not primitive."""
        q = self.q
        facs = _prime_factors(q - 1)

        def order_ok(a):
            for f in facs:
                t = 1
                e = (q - 1) // f
                base = a
                while e:
                    if e & 1:
                        t = self._poly_mul_mod(t, base)
                    base = self._poly_mul_mod(base, base)
                    e >>= 1
                if t == 1:
                    return False
            return True

        for cand in range(2, q):
            if order_ok(cand):
                break
        else:
            raise ShapeError("no generator found (unreachable)")
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        a = 1
        for j in range(q - 1):
            exp[j] = a
            log[a] = j
            a = self._poly_mul_mod(a, cand)
        self._exp = exp
        self._log = log

    def _init_addition(self):
        p, r, q = self.p, self.r, self.q
        if p == 2:
            self._digits = None
            self._neg_list = list(range(q))
            return
        digs = np.zeros((q, r), dtype=np.int64)
        v = np.arange(q)
        for i in range(r):
            digs[:, i] = v % p
            v = v // p
        self._digits = digs
        self._pow_weights = np.array([p**i for i in range(r)], dtype=np.int64)
        self._neg_list = (((-digs) % p) @ self._pow_weights).tolist()
        self._add_table = None

    def _get_add_table(self):
        if self._add_table is None:
            if self.q > 4096:
                return None
            d = self._digits
            s = (d[:, None, :] + d[None, :, :]) % self.p
            self._add_table = (s @ self._pow_weights).astype(np.int64)
        return self._add_table

    # -- scalar operations ----------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        t = self._get_add_table()
        if t is not None:
            return int(t[a, b])
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._pow_weights)

    def neg(self, a):
        return self._neg_list[a]

    def sub(self, a, b):
        return self.add(a, self._neg_list[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp_list[(self._log_list[a] + self._log_list[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp_list[(-self._log_list[a]) % (self.q - 1)]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp_list[(self._log_list[a] - self._log_list[b]) % (self.q - 1)]

    def pow(self, a, e):
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("negative power of zero")
        return self._exp_list[self._log_list[a] * e % (self.q - 1)]

    def frob(self, a, m=1):
        """Apply the Frobenius automorphism m times: a -> a^(p^m)."""
        return self.pow(a, self.p ** (m % self.r))

    def rank(self, a):
        """Position of a in the element order: 0 for 0, else 1 + dlog."""
        return 0 if a == 0 else 1 + self._log_list[a]

    def cmp(self, a, b):
        ra, rb = self.rank(a), self.rank(b)
        return (ra > rb) - (ra < rb)

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    # -- vectorized operations on integer ndarrays -----------------------

    def aadd(self, A, B):
        if self.p == 2:
            return np.bitwise_xor(A, B)
        t = self._get_add_table()
        if t is not None:
            return t[A, B]
        s = (self._digits[A] + self._digits[B]) % self.p
        return s @ self._pow_weights

    def aneg(self, A):
        if self.p == 2:
            return A.copy() if isinstance(A, np.ndarray) else A
        return ((-self._digits[A]) % self.p) @ self._pow_weights

    def asub(self, A, B):
        if self.p == 2:
            return np.bitwise_xor(A, B)
        return self.aadd(A, self.aneg(B))

    def amul(self, A, B):
        """Elementwise product of two arrays (broadcasting allowed)."""
        A = np.asarray(A)
        B = np.asarray(B)
        out = np.zeros(np.broadcast(A, B).shape, dtype=np.int64)
        nz = (A != 0) & (B != 0)
        if nz.any():
            la = self._log[np.broadcast_to(A, nz.shape)[nz]]
            lb = self._log[np.broadcast_to(B, nz.shape)[nz]]
            out[nz] = self._exp[(la + lb) % (self.q - 1)]
        return out

    def ascale(self, A, c):
        """Multiply every entry of an array by the scalar c."""
        if c == 0:
            return np.zeros_like(np.asarray(A))
        if c == 1:
            return np.asarray(A).copy()
        A = np.asarray(A)
        out = np.zeros_like(A)
        nz = A != 0
        lc = self._log_list[c]
        out[nz] = self._exp[(self._log[A[nz]] + lc) % (self.q - 1)]
        return out

    def afrob(self, A, m=1):
        m %= self.r
        if m == 0:
            return np.asarray(A).copy()
        tbl = self._frob_tables.get(m)
        if tbl is None:
            tbl = np.array([self.frob(a, m) for a in range(self.q)], dtype=np.int64)
            self._frob_tables[m] = tbl
        return tbl[A]

    def arank(self, A):
        A = np.asarray(A)
        out = np.zeros(A.shape, dtype=np.int64)
        nz = A != 0
        out[nz] = 1 + self._log[A[nz]]
        return out

    def ainv(self, A):
        A = np.asarray(A)
        if (A == 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[A]) % (self.q - 1)]

    # ---------------------------------------------------------------------

    def __repr__(self):
        if self.r == 1:
            return "GF(%d)" % self.p
        return "GF(%d^%d)" % (self.p, self.r)

    def __eq__(self, other):
        if not isinstance(other, GF):
            return NotImplemented
        return (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __reduce__(self):
        return (GF, (self.p, self.r, self.modulus))
