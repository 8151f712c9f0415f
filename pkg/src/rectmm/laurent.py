"""Exact Laurent-polynomial scalars in the approximation parameter.

Approximate bilinear algorithms (Bini et al. style) carry coefficients that
are finite sums of rational multiples of integer powers of a parameter
``l`` (lambda), including negative powers such as ``l^-1``.  All arithmetic
here is exact: coefficients are `fractions.Fraction` and no floating point
is ever involved, so the cancellations between ``l`` and ``l^-1`` terms that
make these algorithms correct are verified exactly.
"""

from __future__ import annotations

from fractions import Fraction


class LaurentScalar:
    """A finite sum ``sum_k c_k * l^k`` with rational ``c_k`` and integer ``k``.

    Immutable.  The zero polynomial is the empty sum; stored coefficients
    are never zero.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        clean = {}
        for k, c in dict(terms).items():
            c = Fraction(c)
            if c != 0:
                clean[int(k)] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, value, degree: int = 0) -> "LaurentScalar":
        """A single term ``value * l^degree``."""
        return cls({degree: Fraction(value)})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self):
        """Degree -> coefficient mapping (a copy; all coefficients nonzero)."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, degree: int) -> Fraction:
        return self._terms.get(degree, Fraction(0))

    def degree0(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def min_degree(self):
        return min(self._terms) if self._terms else None

    def max_degree(self):
        return max(self._terms) if self._terms else None

    def has_negative_degree(self) -> bool:
        return any(k < 0 for k in self._terms)

    def is_constant(self) -> bool:
        """True if the only (possibly absent) term has degree 0."""
        return all(k == 0 for k in self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, _ZERO_FRAC) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return _raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return _raw({k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                s = out.get(k, _ZERO_FRAC) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        return _raw(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation --------------------------------------------------------

    def substitute(self, lam):
        """Evaluate at a concrete ``l = lam``.

        ``lam`` may be a Fraction/int (exact result) or a float.  Raises
        ValueError when ``lam == 0`` and a negative-degree term is present,
        or when ``lam`` is required (non-constant polynomial) but None.
        """
        if lam is None:
            if not self.is_constant():
                raise ValueError("lambda value required for non-constant coefficient")
            return self.degree0()
        if lam == 0 and self.has_negative_degree():
            raise ValueError("lambda=0 is invalid: coefficient has a l^-k term")
        if isinstance(lam, float):
            return sum((float(c) * lam**k for k, c in self._terms.items()), 0.0)
        lam = Fraction(lam)
        return sum((c * lam**k for k, c in self._terms.items()), Fraction(0))

    # -- text form (the .alg coefficient grammar) ---------------------------

    def to_text(self) -> str:
        """Canonical text form, e.g. ``1``, ``-1/2``, ``1*l^-1``, ``1+2*l^1``."""
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            c = self._terms[k]
            if k == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*l^{k}")
        return "+".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "LaurentScalar":
        terms = {}
        for part in text.strip().split("+"):
            part = part.strip()
            if not part:
                raise ValueError(f"bad coefficient syntax: {text!r}")
            if "*l^" in part:
                coeff_s, _, deg_s = part.partition("*l^")
                k = int(deg_s)
            else:
                coeff_s, k = part, 0
            c = Fraction(coeff_s)
            terms[k] = terms.get(k, _ZERO_FRAC) + c
        return cls(terms)

    def __repr__(self):
        return f"LaurentScalar({self.to_text()!r})"


def _raw(terms: dict) -> LaurentScalar:
    out = LaurentScalar.__new__(LaurentScalar)
    out._terms = terms
    return out


def _coerce(value):
    if isinstance(value, LaurentScalar):
        return value
    if isinstance(value, (int, Fraction)):
        if value == 0:
            return ZERO
        return _raw({0: Fraction(value)})
    return NotImplemented


_ZERO_FRAC = Fraction(0)

ZERO = LaurentScalar()
ONE = LaurentScalar.rational(1)
LAMBDA = LaurentScalar.rational(1, 1)
LAMBDA_INV = LaurentScalar.rational(1, -1)
