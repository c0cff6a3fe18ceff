"""Free graded-commutative *-algebra of symbolic fields.

Monomials are labelled by super-quadri-indices: finitely supported maps
(generator index, derivative multi-index) -> multiplicity.  A generator is a
basic field together with a 4-dimensional derivative multi-index alpha; the
generator set is materialized lazily, with |alpha| capped at
``MAX_DERIV_ORDER``.

Coefficients are exact Gaussian rationals (``QQi``); floats never enter here.
The canonical generator order is lexicographic on (basic index, graded-lex
alpha).  Fermionic generators square to zero and anticommute; all signs are
produced by counting transpositions of fermionic legs in that fixed order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

MAX_DERIV_ORDER = 8


class DerivOrderError(ValueError):
    """Raised when a derivative multi-index exceeds MAX_DERIV_ORDER."""


class ModelMismatchError(ValueError):
    """Raised when polynomials over different field models are combined."""


class InhomogeneousError(ValueError):
    """Raised when an operation requires homogeneous polynomials."""


# ---------------------------------------------------------------------------
# exact Gaussian-rational coefficients


class QQi:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, value) -> "QQi":
        if isinstance(value, QQi):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    @classmethod
    def _coerce(cls, value):
        try:
            return cls.of(value)
        except (TypeError, ValueError):
            return None

    I: "QQi"  # set below

    def __add__(self, other):
        other = QQi._coerce(other)
        if other is None:
            return NotImplemented
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = QQi._coerce(other)
        if other is None:
            return NotImplemented
        return QQi(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return QQi.of(other) - self

    def __mul__(self, other):
        other = QQi._coerce(other)
        if other is None:
            return NotImplemented
        return QQi(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QQi.of(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QQi(other)
        if not isinstance(other, QQi):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*i)"


QQi.I = QQi(0, 1)

ONE = QQi(1)
ZERO = QQi(0)


# ---------------------------------------------------------------------------
# field models and generators


@dataclass(frozen=True)
class BasicField:
    """A basic generator of the algebra (a field, before derivatives)."""

    index: int
    name: str
    mass: float
    fermion: int            # 0 or 1
    dim: Fraction           # canonical dimension, half-integer >= 1
    charges: Tuple[Tuple[str, int], ...]
    conjugate: int          # index of the conjugate basic field

    def charge(self, name: str) -> int:
        return dict(self.charges).get(name, 0)


class FieldModel:
    """An ordered collection of basic fields with consistency checks."""

    def __init__(self, basics: Sequence[BasicField], name: str = "model"):
        self.name = name
        self.basics = tuple(basics)
        self._by_index = {b.index: b for b in self.basics}
        self._by_name = {b.name: b for b in self.basics}
        if len(self._by_index) != len(self.basics):
            raise ValueError("duplicate basic-field indices")
        for b in self.basics:
            c = self._by_index.get(b.conjugate)
            if c is None:
                raise ValueError(f"{b.name}: conjugate index {b.conjugate} missing")
            if c.conjugate != b.index:
                raise ValueError(f"conjugation is not an involution at {b.name}")
            if (c.mass, c.dim, c.fermion) != (b.mass, b.dim, b.fermion):
                raise ValueError(f"conjugate pair {b.name}/{c.name}: quantum numbers differ")
            if sorted((k, -v) for k, v in b.charges) != sorted(c.charges):
                raise ValueError(f"conjugate pair {b.name}/{c.name}: charges not negated")
            if b.fermion not in (0, 1):
                raise ValueError(f"{b.name}: fermion parity must be 0 or 1")
            if b.dim < 1:
                raise ValueError(f"{b.name}: dimension must be >= 1")

    def basic(self, index: int) -> BasicField:
        return self._by_index[index]

    def __getitem__(self, name: str) -> BasicField:
        return self._by_name[name]

    def __iter__(self) -> Iterator[BasicField]:
        return iter(self.basics)

    def __repr__(self):
        return f"FieldModel({self.name}, fields={[b.name for b in self.basics]})"


MultiIndex = Tuple[int, int, int, int]
Generator = Tuple[int, MultiIndex]     # (basic index, derivative multi-index)


def check_multi_index(alpha: MultiIndex) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != 4 or any(a < 0 for a in alpha):
        raise ValueError(f"bad multi-index {alpha}")
    if sum(alpha) > MAX_DERIV_ORDER:
        raise DerivOrderError(f"|alpha| = {sum(alpha)} exceeds cap {MAX_DERIV_ORDER}")
    return alpha


def gen(basic: int, alpha: Iterable[int] = (0, 0, 0, 0)) -> Generator:
    return (basic, check_multi_index(tuple(alpha)))


def gen_order_key(g: Generator):
    """Canonical order: (basic index, |alpha|, alpha) — graded lex on alpha."""
    basic, alpha = g
    return (basic, sum(alpha), alpha)


def gen_dim(model: FieldModel, g: Generator) -> Fraction:
    basic, alpha = g
    return model.basic(basic).dim + sum(alpha)


def gen_is_fermionic(model: FieldModel, g: Generator) -> bool:
    return bool(model.basic(g[0]).fermion)


# ---------------------------------------------------------------------------
# super-quadri-indices


class SQIndex:
    """Finitely supported map generator -> multiplicity, hashable and ordered."""

    __slots__ = ("entries",)

    def __init__(self, entries: Union[Mapping[Generator, int], Iterable[Tuple[Generator, int]]] = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        cleaned = {}
        for g, n in items:
            g = (g[0], check_multi_index(g[1]))
            n = int(n)
            if n < 0:
                raise ValueError("negative multiplicity")
            if n:
                cleaned[g] = cleaned.get(g, 0) + n
        self.entries = tuple(sorted(cleaned.items(), key=lambda kv: gen_order_key(kv[0])))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def get(self, g: Generator) -> int:
        for h, n in self.entries:
            if h == g:
                return n
        return 0

    @property
    def degree(self) -> int:
        """|r|: total number of field legs."""
        return sum(n for _, n in self.entries)

    def factorial(self) -> int:
        """r! = product of factorials of the multiplicities."""
        out = 1
        for _, n in self.entries:
            out *= math.factorial(n)
        return out

    def __ge__(self, other: "SQIndex") -> bool:
        return all(self.get(g) >= n for g, n in other.entries)

    def __add__(self, other: "SQIndex") -> "SQIndex":
        merged = dict(self.entries)
        for g, n in other.entries:
            merged[g] = merged.get(g, 0) + n
        return SQIndex(merged)

    def __sub__(self, other: "SQIndex") -> "SQIndex":
        if not self >= other:
            raise ValueError("difference of super-quadri-indices needs r >= s")
        merged = dict(self.entries)
        for g, n in other.entries:
            merged[g] -= n
        return SQIndex(merged)

    def legs(self) -> Tuple[Generator, ...]:
        """Ordered list of generator legs (each generator repeated)."""
        out = []
        for g, n in self.entries:
            out.extend([g] * n)
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, SQIndex) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        if not self.entries:
            return "SQIndex{1}"
        bits = []
        for (b, alpha), n in self.entries:
            d = "" if not sum(alpha) else f"d{list(alpha)}"
            bits.append(f"{d}#{b}^{n}")
        return "SQIndex{" + " ".join(bits) + "}"


EMPTY_INDEX = SQIndex()


def total_index(ss: Iterable[SQIndex]) -> SQIndex:
    out = EMPTY_INDEX
    for s in ss:
        out = out + s
    return out


# ---------------------------------------------------------------------------
# polynomials


def _merge_sign(model: FieldModel, legs_a: Sequence[Generator], legs_b: Sequence[Generator]) -> int:
    """Koszul sign for merging two canonically ordered leg lists; 0 if a
    fermionic generator would repeat."""
    ferm_a = [g for g in legs_a if gen_is_fermionic(model, g)]
    ferm_b = [g for g in legs_b if gen_is_fermionic(model, g)]
    if set(ferm_a) & set(ferm_b):
        return 0
    inversions = 0
    for g in ferm_b:
        kb = gen_order_key(g)
        inversions += sum(1 for h in ferm_a if gen_order_key(h) > kb)
    return -1 if inversions % 2 else 1


class Polynomial:
    """Finite linear combination of monomials A^r with QQi coefficients."""

    __slots__ = ("model", "terms")

    def __init__(self, model: FieldModel, terms: Optional[Mapping[SQIndex, QQi]] = None):
        self.model = model
        cleaned = {}
        for r, c in (terms or {}).items():
            c = QQi.of(c)
            if not c:
                continue
            for (b, _), n in r.entries:
                if model.basic(b).fermion and n > 1:
                    raise ValueError("fermionic multiplicity above 1")
            cleaned[r] = c
        self.terms = cleaned

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, model: FieldModel) -> "Polynomial":
        return cls(model, {})

    @classmethod
    def one(cls, model: FieldModel) -> "Polynomial":
        return cls(model, {EMPTY_INDEX: ONE})

    @classmethod
    def generator(cls, model: FieldModel, name: str, alpha=(0, 0, 0, 0)) -> "Polynomial":
        g = gen(model[name].index, alpha)
        return cls(model, {SQIndex({g: 1}): ONE})

    @classmethod
    def monomial(cls, model: FieldModel, r: SQIndex, coeff=ONE) -> "Polynomial":
        return cls(model, {r: QQi.of(coeff)})

    # -- ring structure -----------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.model is not other.model:
            raise ModelMismatchError("polynomials over different field models")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, ZERO) + c
        return Polynomial(self.model, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "Polynomial":
        c = QQi.of(scalar)
        return Polynomial(self.model, {r: c * v for r, v in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict = {}
        for r, cr in self.terms.items():
            legs_r = r.legs()
            for s, cs in other.terms.items():
                sign = _merge_sign(self.model, legs_r, s.legs())
                if not sign:
                    continue
                t = r + s
                out[t] = out.get(t, ZERO) + sign * cr * cs
        return Polynomial(self.model, out)

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.model), tuple(sorted(self.terms.items(), key=lambda kv: repr(kv[0])))))

    def __bool__(self):
        return bool(self.terms)

    # -- algebra operations -------------------------------------------------

    def adjoint(self) -> "Polynomial":
        """Antilinear involution reversing products; generators map via their
        conjugate basic field."""
        out: dict = {}
        for r, c in self.terms.items():
            legs = r.legs()
            # (L1...Lk)* = Lk*...L1*; only re-sorting into canonical order
            # contributes a sign
            conj_legs = [(self.model.basic(b).conjugate, alpha) for b, alpha in reversed(legs)]
            sign = _ordering_sign(self.model, conj_legs)
            if not sign:
                continue
            t = SQIndex([(g, 1) for g in conj_legs])
            out[t] = out.get(t, ZERO) + sign * c.conjugate()
        return Polynomial(self.model, out)

    def derive_leg(self, g: Generator) -> "Polynomial":
        """Graded derivative with respect to a single generator leg."""
        fermionic = gen_is_fermionic(self.model, g)
        out: dict = {}
        for r, c in self.terms.items():
            legs = r.legs()
            seen_ferm = 0
            hits = 0
            sign_for_first = 1
            for j, h in enumerate(legs):
                if h == g:
                    if fermionic:
                        sign_for_first = -1 if seen_ferm % 2 else 1
                    hits += 1
                    if fermionic:
                        break  # multiplicity is at most 1
                if gen_is_fermionic(self.model, h):
                    seen_ferm += 1
            if not hits:
                continue
            t = r - SQIndex({g: 1})
            out[t] = out.get(t, ZERO) + (hits * sign_for_first) * c
        return Polynomial(self.model, out)

    def derive(self, s: SQIndex) -> "Polynomial":
        """B^(s): iterated graded derivative, legs of s applied in canonical
        order (first leg first)."""
        out = self
        for g in s.legs():
            out = out.derive_leg(g)
            if not out:
                break
        return out

    def sub_polynomials(self):
        """All (s, B^(s)) with B^(s) != 0, including s = 0."""
        support = {}
        for r in self.terms:
            for g, n in r.entries:
                support[g] = max(support.get(g, 0), n)
        gens = sorted(support, key=gen_order_key)
        out = []
        for counts in itertools.product(*(range(support[g] + 1) for g in gens)):
            s = SQIndex({g: n for g, n in zip(gens, counts) if n})
            b = self.derive(s)
            if b:
                out.append((s, b))
        out.sort(key=lambda sb: (sb[0].degree, repr(sb[0])))
        return out

    # -- quantum numbers ----------------------------------------------------

    def is_homogeneous(self) -> bool:
        return self.quantum_numbers(strict=False) is not None

    def quantum_numbers(self, strict: bool = True):
        """(fermion parity, dimension, charges) if homogeneous.

        Returns None (or raises InhomogeneousError if strict) when terms
        disagree.  The empty polynomial counts as homogeneous of dimension 0.
        """
        result = None
        for r in self.terms:
            f = 0
            d = Fraction(0)
            q: dict = {}
            for (b, alpha), n in r.entries:
                basic = self.model.basic(b)
                f += basic.fermion * n
                d += (basic.dim + sum(alpha)) * n
                for cname, val in basic.charges:
                    q[cname] = q.get(cname, 0) + val * n
            qn = (f % 2, d, tuple(sorted((k, v) for k, v in q.items() if v)))
            if result is None:
                result = qn
            elif result != qn:
                if strict:
                    raise InhomogeneousError("polynomial is not homogeneous")
                return None
        if result is None:
            result = (0, Fraction(0), ())
        return result

    def dimension(self) -> Fraction:
        return self.quantum_numbers()[1]

    def __repr__(self):
        if not self.terms:
            return "Polynomial<0>"
        bits = [f"{c!r}*{r!r}" for r, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0]))]
        return "Polynomial<" + " + ".join(bits) + ">"


def _ordering_sign(model: FieldModel, legs: Sequence[Generator]) -> int:
    """Sign of sorting a leg list into canonical order (insertion sort,
    counting transpositions of fermionic pairs); 0 on repeated fermions."""
    ferm = [g for g in legs if gen_is_fermionic(model, g)]
    if len(ferm) != len(set(ferm)):
        return 0
    keys = [gen_order_key(g) for g in ferm]
    inversions = 0
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if keys[i] > keys[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


# ---------------------------------------------------------------------------
# ext/der bookkeeping and the normalization degree


@dataclass(frozen=True)
class ExtDerProfile:
    """Per-basic-field counts of external legs and of derivatives on them."""

    ext: Tuple[Tuple[int, int], ...]
    der: Tuple[Tuple[int, int], ...]

    def ext_of(self, basic: int) -> int:
        return dict(self.ext).get(basic, 0)

    def der_of(self, basic: int) -> int:
        return dict(self.der).get(basic, 0)

    def __add__(self, other: "ExtDerProfile") -> "ExtDerProfile":
        e = dict(self.ext)
        for b, n in other.ext:
            e[b] = e.get(b, 0) + n
        d = dict(self.der)
        for b, n in other.der:
            d[b] = d.get(b, 0) + n
        return ExtDerProfile(
            tuple(sorted((b, n) for b, n in e.items() if n)),
            tuple(sorted((b, n) for b, n in d.items() if n)),
        )


def ext_der_profile(ss: Iterable[SQIndex]) -> ExtDerProfile:
    """ext(i) = sum_alpha s(i,alpha), der(i) = sum_alpha s(i,alpha)|alpha|,
    computed from the total index of the list."""
    s = total_index(ss)
    ext: dict = {}
    der: dict = {}
    for (b, alpha), n in s.entries:
        ext[b] = ext.get(b, 0) + n
        der[b] = der.get(b, 0) + n * sum(alpha)
    return ExtDerProfile(
        tuple(sorted((b, n) for b, n in ext.items() if n)),
        tuple(sorted((b, n) for b, n in der.items() if n)),
    )


def omega(polys: Sequence[Polynomial], c_bound: int) -> Union[int, float]:
    """Degree of the delta-polynomial normalization freedom:
    omega = 4 - sum_j (4 - c - dim(B_j)).  Returns -inf for empty input
    conventions where every term is absent."""
    if c_bound not in (0, 1):
        raise ValueError("c_bound must be 0 or 1")
    total = Fraction(4)
    for b in polys:
        qn = b.quantum_numbers()   # raises if inhomogeneous
        total -= (4 - c_bound - qn[1])
    if total.denominator != 1:
        return math.floor(total)
    return int(total)


def omega_prime(model: FieldModel, us: Sequence[SQIndex]) -> int:
    """Variant for lists of super-quadri-indices: 4 - sum_j dim(A^{u_j})."""
    total = Fraction(4)
    for u in us:
        for g, n in u.entries:
            total -= gen_dim(model, g) * n
    return int(math.floor(total))
