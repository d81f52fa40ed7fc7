"""Universal (quantum) dimension formulas as ratios of products of linear forms.

A FactorProduct holds k numerator forms and k denominator forms.  Classically
its value at a point is sign * scalar * prod(num) / prod(den); the quantum
value replaces every linear factor L by sinh(x * L(point)) and is therefore
sensitive to the affine representative of the point.  Coefficients divided by
four are stored inside the forms, so a single representation covers both the
adjoint formula and the Cartan-power family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from . import _poly
from ._util import rat_from_json, rat_to_json
from .plane import (
    Basis,
    BasisMismatchError,
    LinearForm,
    ProjPoint,
    Perm3,
    act,
    convert,
)


class SingularPointError(ValueError):
    """Quantum evaluation at a zero of some factor."""


@dataclass(frozen=True)
class EvalResult:
    """Classical evaluation outcome: finite value, zero, pole, or the
    indeterminate 0/0 case where numerator and denominator both vanish."""

    kind: str  # "finite" | "zero" | "pole" | "indeterminate"
    value: Fraction | None = None

    def __post_init__(self):
        if (self.kind == "finite") != (self.value is not None):
            raise ValueError("finite results carry a value, singular ones do not")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


@dataclass(frozen=True)
class FactorProduct:
    num: tuple[LinearForm, ...]
    den: tuple[LinearForm, ...]
    quantum: bool = False
    sign: int = 1
    scalar: Fraction = Fraction(1)
    basis: Basis = Basis.UNPRIMED

    def __post_init__(self):
        if len(self.num) != len(self.den):
            raise ValueError("numerator and denominator need the same number of factors")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.scalar <= 0:
            raise ValueError("scalar must be a positive rational (signs live in `sign`)")
        if self.quantum and self.scalar != 1:
            raise ValueError("quantum formulas admit no scalar beyond the sign")
        for form in self.num + self.den:
            if form.basis is not self.basis:
                raise BasisMismatchError("all factors must share the product's basis")

    @property
    def k(self) -> int:
        return len(self.num)

    def __str__(self) -> str:
        head = "sinh-product" if self.quantum else "product"
        lead = ("-" if self.sign < 0 else "") + (
            "" if self.scalar == 1 else f"{self.scalar}*"
        )
        num = " * ".join(f"({f})" for f in self.num) or "1"
        den = " * ".join(f"({f})" for f in self.den) or "1"
        return f"{lead}{head}[{num} / {den}]"

    def to_json(self) -> dict:
        return {
            "quantum": self.quantum,
            "sign": self.sign,
            "scalar": rat_to_json(self.scalar),
            "basis": self.basis.value,
            "num": [f.to_json() for f in self.num],
            "den": [f.to_json() for f in self.den],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FactorProduct":
        return cls(
            num=tuple(LinearForm.from_json(f) for f in obj["num"]),
            den=tuple(LinearForm.from_json(f) for f in obj["den"]),
            quantum=bool(obj["quantum"]),
            sign=int(obj["sign"]),
            scalar=rat_from_json(obj["scalar"]),
            basis=Basis(obj["basis"]),
        )


def empty_product(quantum: bool = False, basis: Basis = Basis.UNPRIMED) -> FactorProduct:
    return FactorProduct((), (), quantum=quantum, basis=basis)


def convert_product(F: FactorProduct, basis: Basis) -> FactorProduct:
    if F.basis is basis:
        return F
    return replace(
        F,
        num=tuple(convert(f, basis) for f in F.num),
        den=tuple(convert(f, basis) for f in F.den),
        basis=basis,
    )


def act_product(perm: Perm3, F: FactorProduct) -> FactorProduct:
    """Coordinate permutation applied to every factor."""
    return replace(
        F,
        num=tuple(act(perm, f) for f in F.num),
        den=tuple(act(perm, f) for f in F.den),
    )


def eval_classical(F: FactorProduct, point: ProjPoint) -> EvalResult:
    """Exact value at a point; singular patterns are values, not errors.

    Scale invariant in the point because numerator and denominator carry the
    same number of factors.
    """
    point = convert(point, F.basis)
    num_vals = [f(point) for f in F.num]
    den_vals = [f(point) for f in F.den]
    num_zero = any(v == 0 for v in num_vals)
    den_zero = any(v == 0 for v in den_vals)
    if num_zero and den_zero:
        return EvalResult("indeterminate")
    if num_zero:
        return EvalResult("zero")
    if den_zero:
        return EvalResult("pole")
    value = Fraction(F.sign) * F.scalar
    for v in num_vals:
        value *= v
    for v in den_vals:
        value /= v
    return EvalResult("finite", value)


def eval_quantum(F: FactorProduct, point: ProjPoint, x: float) -> float:
    """sign * prod sinh(x * num_i(p)) / prod sinh(x * den_i(p)).

    Not projectively scale invariant: the caller's affine representative of
    the point is used as is.  Factors are consumed as num/den pairs so the
    intermediate magnitudes stay tame.
    """
    if not F.quantum:
        raise ValueError("eval_quantum needs a quantum formula")
    if x == 0:
        raise ValueError("x must be nonzero (the x -> 0 limit is eval_classical)")
    point = convert(point, F.basis)
    num_vals = [f(point) for f in F.num]
    den_vals = [f(point) for f in F.den]
    for side, vals in (("numerator", num_vals), ("denominator", den_vals)):
        for i, v in enumerate(vals):
            if v == 0:
                forms = F.num if side == "numerator" else F.den
                raise SingularPointError(
                    f"{side} factor {i} ({forms[i]}) vanishes at {point}"
                )
    result = float(F.sign)
    for nv, dv in zip(num_vals, den_vals):
        result *= _sinh_ratio(x * float(nv), x * float(dv))
    return result


def _sinh_ratio(u: float, v: float) -> float:
    """sinh(u)/sinh(v), stable for large |u|, |v|."""
    if abs(u) < 700 and abs(v) < 700:
        return math.sinh(u) / math.sinh(v)
    sign = 1.0
    if u < 0:
        sign, u = -sign, -u
    if v < 0:
        sign, v = -sign, -v
    log_num = u + math.log1p(-math.exp(-2 * u)) if u > 0 else -math.inf
    log_den = v + math.log1p(-math.exp(-2 * v)) if v > 0 else -math.inf
    return sign * math.exp(log_num - log_den)


def multiply(F: FactorProduct, G: FactorProduct) -> FactorProduct:
    if F.quantum != G.quantum:
        raise ValueError("cannot multiply classical and quantum products")
    if F.basis is not G.basis:
        raise BasisMismatchError("products are in different bases")
    return FactorProduct(
        F.num + G.num,
        F.den + G.den,
        quantum=F.quantum,
        sign=F.sign * G.sign,
        scalar=F.scalar * G.scalar,
        basis=F.basis,
    )


def ratio(F: FactorProduct, G: FactorProduct) -> FactorProduct:
    """F / G as a factor product (the shape every non-uniqueness factor has)."""
    if F.quantum != G.quantum:
        raise ValueError("cannot divide classical by quantum products")
    if F.basis is not G.basis:
        raise BasisMismatchError("products are in different bases")
    return FactorProduct(
        F.num + G.den,
        F.den + G.num,
        quantum=F.quantum,
        sign=F.sign * G.sign,
        scalar=F.scalar / G.scalar,
        basis=F.basis,
    )


def classical_limit(F: FactorProduct) -> FactorProduct:
    """The x -> 0 limit of a quantum product, as a classical factor product.

    Since numerator and denominator have the same number of factors, the limit
    keeps the factor lists and sign; proportional pairs then cancel to their
    coefficient ratio under the classical cancel().
    """
    return replace(F, quantum=False)


def cancel(F: FactorProduct) -> FactorProduct:
    """Remove cancelling numerator/denominator pairs.

    Classical products cancel proportional forms, folding the ratio into the
    scalar and sign.  Quantum products may only drop pairs equal up to an
    overall sign, flipping the sign for each negated pair (sinh is odd, and
    sinh(q*u) is not q*sinh(u) for any other scalar).
    """
    num = list(F.num)
    den = list(F.den)
    sign = F.sign
    scalar = F.scalar
    i = 0
    while i < len(num):
        matched = False
        for j, d in enumerate(den):
            if F.quantum:
                if num[i] == d:
                    matched = True
                elif num[i] == -d:
                    matched = True
                    sign = -sign
                if matched:
                    del num[i], den[j]
                    break
            else:
                q = num[i].proportionality(d)
                if q is not None:
                    if q < 0:
                        sign, q = -sign, -q
                    scalar *= q
                    del num[i], den[j]
                    matched = True
                    break
        if not matched:
            i += 1
    return FactorProduct(
        tuple(num), tuple(den), quantum=F.quantum, sign=sign, scalar=scalar, basis=F.basis
    )


def is_identically_one(F: FactorProduct) -> bool:
    """Whether the product reduces to the constant 1 on the whole plane."""
    reduced = cancel(F)
    return (
        reduced.k == 0 and reduced.sign == 1 and (reduced.quantum or reduced.scalar == 1)
    )


def _quarter(n, x, y) -> LinearForm:
    return LinearForm((Fraction(n, 4), Fraction(x, 4), Fraction(y, 4)), Basis.UNPRIMED)


def adjoint_formula() -> FactorProduct:
    """Quantum dimension of the adjoint representation.

    Three sinh factors over three: -(2a+2b+c)(2a+b+2c)(a+2b+2c) / (a*b*c),
    every linear form carrying the conventional quarter.
    """
    num = (_quarter(2, 2, 1), _quarter(2, 1, 2), _quarter(1, 2, 2))
    den = (_quarter(1, 0, 0), _quarter(0, 1, 0), _quarter(0, 0, 1))
    return FactorProduct(num, den, quantum=True, sign=-1)


def x2k_adn_formula(k: int, n: int) -> FactorProduct:
    """Quantum dimension of the Cartan product of the k-th power of the
    two-form representation X2 (from wedge^2 ad = ad + X2) with the n-th
    power of the adjoint.  Assembled factor by factor; no cancellation is
    performed, so evaluation at family points generally needs cancel() first.
    """
    if k < 0 or n < 0:
        raise ValueError("k and n must be non-negative")
    num: list[LinearForm] = []
    den: list[LinearForm] = []

    def nf(a, b, c):
        num.append(_quarter(a, b, c))

    def df(a, b, c):
        den.append(_quarter(a, b, c))

    for i in range(k):
        for _ in range(2):
            nf(i - 2, -2, 0)
            nf(i - 2, 0, -2)
            nf(-(i - 2), 1, 1)
            df(i + 1, 0, 0)
            df(-(i - 1), 1, 0)
            df(-(i - 1), 0, 1)
    for i in range(n + 1):
        j = i + k
        nf(j - 2, -2, 0)
        nf(j - 2, 0, -2)
        nf(-(j - 2), 1, 1)
        df(j + 1, 0, 0)
        df(-(j - 1), 1, 0)
        df(-(j - 1), 0, 1)
    for i in range(1, 2 * k + n + 1):
        nf(i - 3, -1, -2)
        nf(i - 3, -2, -1)
        nf(i - 5, -2, -2)
        df(i - 2, -2, 0)
        df(i - 2, 0, -2)
        df(-(i - 2), 1, 1)
    nf(1, 1, 0)
    nf(1, 0, 1)
    nf(n + 1, 0, 0)
    df(2, 2, 0)
    df(2, 0, 2)
    df(2, 1, 1)
    nf(3 * k + n - 4, -2, -2)
    nf(3 * k + 2 * n - 3, -2, -2)
    df(3, 2, 2)
    df(4, 2, 2)
    return FactorProduct(tuple(num), tuple(den), quantum=True, sign=1)


def classical_on_family(
    F: FactorProduct, coords: tuple[_poly.Poly, _poly.Poly, _poly.Poly]
) -> tuple[_poly.Poly, _poly.Poly]:
    """Exact value of the product along a one-parameter family of points.

    `coords` gives the three coordinates as univariate polynomials in the
    family parameter (in the product's basis).  Returns the reduced
    numerator/denominator pair, with the overall sign and scalar folded in;
    a family lying inside a factor's zero line raises ZeroDivisionError.
    """
    num_poly = _poly.const(F.sign * F.scalar)
    den_poly = _poly.ONE
    for form in F.num:
        lin = _form_poly(form, coords)
        num_poly = _poly.mul(num_poly, lin)
    for form in F.den:
        lin = _form_poly(form, coords)
        den_poly = _poly.mul(den_poly, lin)
    return _poly.reduce_ratio(num_poly, den_poly)


def _form_poly(form: LinearForm, coords) -> _poly.Poly:
    acc = _poly.ZERO
    for c, coord in zip(form.coeffs, coords):
        acc = _poly.add(acc, _poly.scale(coord, c))
    return acc


def family_coords(family: str) -> tuple[_poly.Poly, _poly.Poly, _poly.Poly]:
    """Unprimed coordinates of a family as polynomials in its parameter."""
    f0 = Fraction(0)
    if family == "sl":
        return (_poly.const(-2), _poly.const(2), (f0, Fraction(1)))
    if family == "so":
        return (_poly.const(-2), _poly.const(4), (Fraction(-4), Fraction(1)))
    if family == "sp":
        return (_poly.const(-2), _poly.const(1), (Fraction(2), Fraction(1)))
    if family == "exc":
        return (_poly.const(-2), (Fraction(4), Fraction(1)), (Fraction(4), Fraction(2)))
    raise ValueError(f"unknown family {family!r}")
