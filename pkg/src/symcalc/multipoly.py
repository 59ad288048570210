"""Sparse multivariate polynomials over the complex numbers.

A :class:`Poly` stores its coefficients in a dict keyed by exponent tuples.
Besides ring arithmetic it carries the coefficient transforms used by the
symmetrized calculus: ``gamma`` (``c_a -> c_a * a!/|a|!``), its inverse
``lambda_``, and ``lambda_mu`` for product-of-circles measures.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_TRANSFORM_DEGREE = 20
_ZERO_CUTOFF = 1e-300

MultiIndex = tuple[int, ...]


def multi_index(entries: Iterable[int]) -> MultiIndex:
    alpha = tuple(int(a) for a in entries)
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative exponent in multi-index {alpha}")
    return alpha


def degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def factorial_ratio(alpha: Sequence[int]) -> float:
    """Return ``alpha! / |alpha|!`` from exact integer factorials.

    Raises ``ValueError`` above the transform degree cap.
    """
    k = sum(alpha)
    if k > MAX_TRANSFORM_DEGREE:
        raise ValueError(f"|alpha| = {k} exceeds the degree cap {MAX_TRANSFORM_DEGREE}")
    num = 1
    for a in alpha:
        num *= math.factorial(a)
    return num / math.factorial(k)


def multinomial(alpha: Sequence[int]) -> int:
    """``|alpha|! / alpha!``, the number of distinct words with letter counts ``alpha``."""
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


class Poly:
    """Immutable sparse polynomial in ``nvars`` complex variables.

    Zero coefficients are never stored, so equality of two polynomials is
    equality of their term maps.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], complex] | None = None):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.nvars = int(nvars)
        clean: dict[MultiIndex, complex] = {}
        for key, c in (terms or {}).items():
            alpha = multi_index(key)
            if len(alpha) != self.nvars:
                raise ValueError(f"multi-index {alpha} has length {len(alpha)}, expected {nvars}")
            c = complex(c)
            if alpha in clean:
                c += clean[alpha]
            clean[alpha] = c
        self._terms = {a: c for a, c in clean.items() if abs(c) >= _ZERO_CUTOFF}

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, c: complex = 1.0) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, j: int) -> Poly:
        alpha = [0] * nvars
        alpha[j] = 1
        return cls(nvars, {tuple(alpha): 1.0})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: complex = 1.0) -> Poly:
        return cls(len(alpha), {tuple(alpha): c})

    # -- container protocol -------------------------------------------------

    @property
    def terms(self) -> dict[MultiIndex, complex]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Poly({self.nvars}, 0)"
        parts = [f"{c:.6g}*z^{list(a)}" for a, c in self.items()]
        return f"Poly({self.nvars}, " + " + ".join(parts) + ")"

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self._terms), default=0)

    def max_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(max(a[j] for a in self._terms) for j in range(self.nvars))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent matrix (m, n) and coefficient vector (m,) in canonical order."""
        items = self.items()
        if not items:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0, dtype=complex)
        exps = np.array([a for a, _ in items], dtype=np.int64)
        coefs = np.array([c for _, c in items], dtype=complex)
        return exps, coefs

    # -- algebra -------------------------------------------------------------

    def _check(self, other: Poly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: Poly | complex) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, 0j) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: Poly | complex) -> Poly:
        return self + (-other)

    def __rsub__(self, other: complex) -> Poly:
        return (-self) + other

    def __mul__(self, other: Poly | complex) -> Poly:
        if not isinstance(other, Poly):
            return Poly(self.nvars, {a: c * other for a, c in self._terms.items()})
        self._check(other)
        out: dict[MultiIndex, complex] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0j) + c * d
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> Poly:
        return power(self, m)

    def __call__(self, z: Sequence[complex]) -> complex:
        return eval_poly(self, z)


def eval_poly(p: Poly, z: Sequence[complex]) -> complex:
    z = list(z)
    if len(z) != p.nvars:
        raise ValueError(f"point has {len(z)} coordinates, polynomial has {p.nvars} variables")
    total = 0j
    for alpha, c in p.items():
        term = c
        for zj, a in zip(z, alpha):
            if a:
                term *= zj**a
        total += term
    return complex(total)


def power(p: Poly, m: int) -> Poly:
    if m < 0:
        raise ValueError("negative power")
    out = Poly.constant(p.nvars)
    base = p
    while m:
        if m & 1:
            out = out * base
        m >>= 1
        if m:
            base = base * base
    return out


def _rescale(p: Poly, factor) -> Poly:
    return Poly(p.nvars, {a: c * factor(a) for a, c in p._terms.items()})


def gamma(p: Poly) -> Poly:
    return _rescale(p, factorial_ratio)


def lambda_(p: Poly) -> Poly:
    return _rescale(p, lambda a: 1.0 / factorial_ratio(a))


def _moment_factor(alpha: Sequence[int], radii: Sequence[float]) -> float:
    m = 1.0
    for a, r in zip(alpha, radii):
        m *= r ** (2 * a)
    return m


def _check_radii(p: Poly, radii: Sequence[float]) -> tuple[float, ...]:
    radii = tuple(float(r) for r in radii)
    if len(radii) != p.nvars:
        raise ValueError(f"{len(radii)} radii for {p.nvars} variables")
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    return radii


def lambda_mu(p: Poly, radii: Sequence[float]) -> Poly:
    """Apply the Poisson-type operator of the product measure of circles ``|z_j| = radii[j]``.

    ``z^a`` is sent to ``(|a|!/a!) * prod_j radii[j]**(2 a_j) * z^a``.
    """
    radii = _check_radii(p, radii)
    return _rescale(p, lambda a: _moment_factor(a, radii) / factorial_ratio(a))


def lambda_mu_inverse(p: Poly, radii: Sequence[float]) -> Poly:
    radii = _check_radii(p, radii)
    return _rescale(p, lambda a: factorial_ratio(a) / _moment_factor(a, radii))


def abs_majorant(p: Poly) -> Poly:
    return Poly(p.nvars, {a: abs(c) for a, c in p._terms.items()})


def slice_(p: Poly, zeroed: Iterable[int]) -> Poly:
    """Set the variables with (0-based) indices in ``zeroed`` to zero."""
    zeroed = set(zeroed)
    bad = [j for j in zeroed if not 0 <= j < p.nvars]
    if bad:
        raise ValueError(f"variable indices out of range: {bad}")
    return Poly(p.nvars, {a: c for a, c in p._terms.items() if all(a[j] == 0 for j in zeroed)})


def scale_vars(p: Poly, r: float | Sequence[float]) -> Poly:
    """Return ``z -> p(r z)``; ``r`` may be one positive scalar or one per variable."""
    if np.ndim(r) == 0:
        r = float(r)
        if r <= 0:
            raise ValueError("scale factor must be positive")
        return _rescale(p, lambda a: r ** sum(a))
    radii = _check_radii(p, r)
    return _rescale(p, lambda a: math.prod(s**e for s, e in zip(radii, a)))


# -- JSON interchange ---------------------------------------------------------


def poly_to_dict(p: Poly) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [{"alpha": list(a), "re": c.real, "im": c.imag} for a, c in p.items()],
    }


def poly_from_dict(d: Mapping) -> Poly:
    try:
        nvars = int(d["nvars"])
        terms = {}
        for t in d["terms"]:
            alpha = tuple(t["alpha"])
            terms[alpha] = terms.get(alpha, 0j) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial JSON: {exc}") from exc
    return Poly(nvars, terms)


def poly_to_json(p: Poly) -> str:
    return json.dumps(poly_to_dict(p))


def poly_from_json(text: str) -> Poly:
    return poly_from_dict(json.loads(text))


def example7_poly() -> Poly:
    """``(z - w)^2 + 2(z + w) + 1``."""
    z, w = Poly.variable(2, 0), Poly.variable(2, 1)
    return (z - w) ** 2 + 2 * (z + w) + 1
