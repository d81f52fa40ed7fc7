"""Decide whether a factor product is identically constant on a line.

Restricting every factor to a parametrized line s*p0 + t*p1 turns it into a
binary linear form in (s, t).  The classical check expands both degree-k
binary products and compares coefficients, which is complete because scalars
may regroup across factors.  The quantum check uses multiset matching of the
restricted forms up to per-factor signs with total sign +1, which is the
exact criterion for a product of hyperbolic sines to collapse to 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import _poly
from ._util import make_rng, rand_rational, rat_to_json
from .formula import (
    FactorProduct,
    act_product,
    cancel,
    convert,
    eval_classical,
    eval_quantum,
    ratio,
)
from .plane import (
    SWAP_AB,
    SWAP_BG,
    DegenerateInputError,
    LinearForm,
    ProjPoint,
    incident,
    span_points,
)

BinaryForm = tuple[Fraction, Fraction]  # u*s + v*t


class InternalConsistencyError(RuntimeError):
    """Symbolic verdict and numeric sampling disagree."""


class VanishingFactorError(ValueError):
    def __init__(self, indices: list[tuple[str, int]]):
        self.indices = indices
        names = ", ".join(f"{side}[{i}]" for side, i in indices)
        super().__init__(f"factors identically zero on the line: {names}")


@dataclass(frozen=True)
class LineParam:
    """A line with two distinct spanning points; the map (s, t) -> s*p0 + t*p1."""

    line: LinearForm
    p0: ProjPoint
    p1: ProjPoint

    def __post_init__(self):
        if not (incident(self.p0, self.line) and incident(self.p1, self.line)):
            raise DegenerateInputError("spanning points must lie on the line")
        if self.p0 == self.p1:
            raise DegenerateInputError("spanning points must be distinct")

    @classmethod
    def from_line(cls, line: LinearForm) -> "LineParam":
        p0, p1 = span_points(line)
        return cls(line, p0, p1)

    def point_at(self, s: Fraction, t: Fraction) -> ProjPoint:
        coords = tuple(
            s * a + t * b for a, b in zip(self.p0.coords, self.p1.coords)
        )
        return ProjPoint(coords, self.line.basis)


@dataclass(frozen=True)
class IdentityReport:
    """Per-line verdict with witness data.

    verdict: "identically_one" | "identically_constant" | "not_constant"
             | "vanishing_factor"
    constant: value for identically_constant
    witness: exact on-line point with value != 1 for not_constant
    matching: denominator-to-numerator factor pairing for identically_one
    vanishing: (side, index) list for vanishing_factor
    """

    line: LinearForm
    verdict: str
    constant: Fraction | None = None
    witness: ProjPoint | None = None
    matching: tuple[int, ...] | None = None
    vanishing: tuple[tuple[str, int], ...] = ()

    @property
    def identically_one(self) -> bool:
        return self.verdict == "identically_one"

    def to_json(self) -> dict:
        out: dict = {"line": self.line.to_json(), "verdict": self.verdict}
        if self.constant is not None:
            out["constant"] = rat_to_json(self.constant)
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.matching is not None:
            out["matching"] = list(self.matching)
        if self.vanishing:
            out["vanishing"] = [list(v) for v in self.vanishing]
        return out


def _align(lp: LineParam, basis) -> LineParam:
    """The same parametrized line expressed in another basis; the spanning
    points transform exactly, so the (s, t) chart is preserved."""
    if lp.line.basis is basis:
        return lp
    return LineParam(convert(lp.line, basis), convert(lp.p0, basis), convert(lp.p1, basis))


def restrict(F: FactorProduct, lp: LineParam) -> tuple[list[BinaryForm], list[BinaryForm]]:
    """Binary forms (value at p0) * s + (value at p1) * t for every factor."""
    param = _align(lp, F.basis)
    p0, p1 = param.p0, param.p1
    dead: list[tuple[str, int]] = []
    num = []
    den = []
    for side, forms, out in (("num", F.num, num), ("den", F.den, den)):
        for i, f in enumerate(forms):
            bf = (f(p0), f(p1))
            if bf[0] == 0 and bf[1] == 0:
                dead.append((side, i))
            out.append(bf)
    if dead:
        raise VanishingFactorError(dead)
    return num, den


def _expand(forms: list[BinaryForm]) -> _poly.Poly:
    acc = _poly.ONE
    for u, v in forms:
        acc = _poly.mul(acc, _poly.trim((u, v)))
    return acc


def _witness_on_line(
    F: FactorProduct, lp: LineParam, quantum: bool, rng: random.Random | None = None
) -> ProjPoint:
    """An exact rational point on the line where the value differs from 1."""
    rng = rng or make_rng()
    param = _align(lp, F.basis)
    candidates: list[tuple[Fraction, Fraction]] = [
        (Fraction(1), Fraction(n)) for n in range(-6, 7)
    ] + [(Fraction(0), Fraction(1))]
    while True:
        for s, t in candidates:
            try:
                pt = param.point_at(s, t)
            except DegenerateInputError:
                continue
            if quantum:
                try:
                    vals = [eval_quantum(F, pt, x) for x in (0.37, 0.83, 1.29)]
                except Exception:
                    continue
                if any(abs(v - 1) > 1e-6 for v in vals):
                    return pt
            else:
                res = eval_classical(F, pt)
                if res.is_finite and res.value != 1:
                    return pt
        candidates = [
            (rand_rational(rng, 40), rand_rational(rng, 40, nonzero=True))
            for _ in range(32)
        ]


def _match_multiset(
    num: list[BinaryForm], den: list[BinaryForm], up_to_sign: bool
) -> tuple[tuple[int, ...], Fraction] | None:
    """Pair each denominator form with a proportional (or sign-equal) numerator
    form; returns (pairing, total multiplier) or None."""
    used = [False] * len(num)
    pairing = []
    total = Fraction(1)
    for d in den:
        found = None
        for i, nf in enumerate(num):
            if used[i]:
                continue
            if up_to_sign:
                if nf == d:
                    found, mult = i, Fraction(1)
                    break
                if nf == (-d[0], -d[1]):
                    found, mult = i, Fraction(-1)
                    break
            else:
                q = _binary_ratio(nf, d)
                if q is not None:
                    found, mult = i, q
                    break
        if found is None:
            return None
        used[found] = True
        pairing.append(found)
        total *= mult
    return tuple(pairing), total


def _binary_ratio(a: BinaryForm, b: BinaryForm) -> Fraction | None:
    """q with a = q * b, or None."""
    if b[0] == 0 and b[1] == 0:
        return None
    if a[0] * b[1] != a[1] * b[0]:
        return None
    return a[0] / b[0] if b[0] != 0 else a[1] / b[1]


def is_one_on_line_classical(F: FactorProduct, line: LinearForm) -> IdentityReport:
    """Exact decision for a classical product: expand the restricted numerator
    and denominator as degree-k binary forms and compare coefficient vectors."""
    if F.quantum:
        raise ValueError("use is_one_on_line_quantum for quantum products")
    lp = LineParam.from_line(convert(line, F.basis))
    try:
        num, den = restrict(F, lp)
    except VanishingFactorError as err:
        return IdentityReport(line, "vanishing_factor", vanishing=tuple(err.indices))
    scale = Fraction(F.sign) * F.scalar
    num_poly = _poly.scale(_expand(num), scale)
    den_poly = _expand(den)
    if num_poly == den_poly:
        match = _match_multiset(num, den, up_to_sign=False)
        pairing = match[0] if match else None
        return IdentityReport(line, "identically_one", matching=pairing)
    const = _poly_ratio_constant(num_poly, den_poly)
    if const is not None:
        return IdentityReport(line, "identically_constant", constant=const)
    witness = _witness_on_line(F, lp, quantum=False)
    return IdentityReport(line, "not_constant", witness=witness)


def is_one_on_line_quantum(F: FactorProduct, line: LinearForm) -> IdentityReport:
    """Multiset criterion for quantum products: restricted numerator and
    denominator forms must coincide up to per-factor signs whose product,
    together with the overall sign, is +1."""
    if not F.quantum:
        raise ValueError("use is_one_on_line_classical for classical products")
    lp = LineParam.from_line(convert(line, F.basis))
    try:
        num, den = restrict(F, lp)
    except VanishingFactorError as err:
        return IdentityReport(line, "vanishing_factor", vanishing=tuple(err.indices))
    match = _match_multiset(num, den, up_to_sign=True)
    if match is not None:
        pairing, eps = match
        total = F.sign * eps
        if total == 1:
            return IdentityReport(line, "identically_one", matching=pairing)
        return IdentityReport(line, "identically_constant", constant=Fraction(total))
    witness = _witness_on_line(F, lp, quantum=True)
    return IdentityReport(line, "not_constant", witness=witness)


def _poly_ratio_constant(num: _poly.Poly, den: _poly.Poly) -> Fraction | None:
    if not den:
        return None
    if not num:
        return None  # identically zero counts as non-constant-one, handled upstream
    q, r = _poly.divmod_exact(num, den)
    if r == _poly.ZERO and _poly.deg(q) == 0:
        return q[0]
    return None


def is_one_on_line(F: FactorProduct, line: LinearForm) -> IdentityReport:
    if F.quantum:
        return is_one_on_line_quantum(F, line)
    return is_one_on_line_classical(F, line)


def check_on_lines(F: FactorProduct, lines) -> list[IdentityReport]:
    return [is_one_on_line(F, line) for line in lines]


def numeric_crosscheck(
    F: FactorProduct,
    line: LinearForm,
    samples: int = 8,
    rng: random.Random | None = None,
    rel_tol: float = 1e-9,
) -> bool:
    """Confirm the symbolic verdict by sampling random rational points on the
    line (plus several x values for quantum products).  A disagreement raises
    InternalConsistencyError; agreement returns True."""
    rng = rng or make_rng()
    report = is_one_on_line(F, line)
    lp = LineParam.from_line(convert(line, F.basis))
    if report.verdict == "vanishing_factor":
        return True  # nothing numeric to confirm: some factor is zero on the line
    xs = (1e-2, 0.11, 0.57, 1.3, 2.7)
    checked = 0
    attempts = 0
    saw_deviation = False
    while checked < samples and attempts < 200 * samples:
        attempts += 1
        s = rand_rational(rng, 1000)
        t = rand_rational(rng, 1000)
        if s == 0 and t == 0:
            continue
        try:
            pt = lp.point_at(s, t)
        except DegenerateInputError:
            continue
        if F.quantum:
            try:
                values = [eval_quantum(F, pt, x) for x in xs]
            except Exception:
                continue  # hit a factor zero; resample
        else:
            res = eval_classical(F, pt)
            if not res.is_finite:
                continue
            values = [float(res.value)]
            exact = res.value
        checked += 1
        if report.verdict == "identically_one":
            if F.quantum:
                if any(abs(v - 1) > rel_tol for v in values):
                    raise InternalConsistencyError(
                        f"symbolic identically_one but sampled {values} on {line}"
                    )
            elif exact != 1:
                raise InternalConsistencyError(
                    f"symbolic identically_one but exact value {exact} at {pt}"
                )
        elif report.verdict == "identically_constant":
            target = float(report.constant)
            if any(abs(v - target) > rel_tol * max(1.0, abs(target)) for v in values):
                raise InternalConsistencyError(
                    f"symbolic constant {report.constant} but sampled {values}"
                )
        else:  # not_constant: some sample must deviate from 1
            if F.quantum:
                if any(abs(v - 1) > rel_tol for v in values):
                    saw_deviation = True
            elif exact != 1:
                saw_deviation = True
    if checked < samples:
        raise InternalConsistencyError(f"could not draw {samples} usable points on {line}")
    if report.verdict == "not_constant" and not saw_deviation:
        raise InternalConsistencyError(
            f"symbolic not_constant on {line} but every sample equals 1"
        )
    return True


def check_symmetric(F: FactorProduct) -> bool:
    """Whether the product is invariant under the full coordinate-permutation
    group, tested on its two generating transpositions.  Invariance means the
    permuted product equals the original as a function: their ratio cancels
    to the empty product with total sign (and classical scalar) one."""
    for gen in (SWAP_AB, SWAP_BG):
        quotient = cancel(ratio(act_product(gen, F), F))
        if quotient.k != 0 or quotient.sign != 1:
            return False
        if not quotient.quantum and quotient.scalar != 1:
            return False
    return True
