"""Constraint systems for non-uniqueness factors and searches over them.

A non-uniqueness factor equal to 1 on the three primed coordinate lines is
a product of factors (n_i*a + x_i*b + y_i*c) / (m_i*a + x_i*b + y_i*c) whose
parameters satisfy permutation-indexed linear relations

    x_i = c_i x_{p(i)},   y_i = k_i y_{s(i)},   k_i n_{s(i)} = c_i n_{p(i)}

with multiplier products equal to one; requiring 1 on the fourth line
3a - b = 0 adds a third permutation v with multipliers r:

    y_i = r_i y_{v(i)},   c_i n_{p(i)} + 3 x_i = r_i (n_{v(i)} + 3 x_{v(i)}).

In the quantum case every multiplier is +-1, which turns the search into a
finite enumeration over permutation tuples and sign vectors.  The classical
multipliers form a continuum; they are verified rather than searched, except
for the dedicated k = 3 survey which decides nontriviality stratum by
stratum with generic rational sampling.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ._linalg import int_nullspace, nullspace
from ._util import make_rng, rand_rational
from .formula import FactorProduct, cancel, ratio
from .plane import Basis, LinearForm

PRIMED_LINES = {
    "three": (
        LinearForm((1, 0, 0), Basis.PRIMED),
        LinearForm((0, 1, 0), Basis.PRIMED),
        LinearForm((0, 0, 1), Basis.PRIMED),
    ),
    "four": (
        LinearForm((1, 0, 0), Basis.PRIMED),
        LinearForm((0, 1, 0), Basis.PRIMED),
        LinearForm((0, 0, 1), Basis.PRIMED),
        LinearForm((3, -1, 0), Basis.PRIMED),
    ),
}


class InvalidMultiplierError(ValueError):
    """Multiplier vector violates a product-one constraint."""


class DegenerateFamilyError(RuntimeError):
    """No nondegenerate instantiation found within the retry budget."""


Perm = tuple[int, ...]


def _check_perm(perm: Perm, k: int, name: str) -> None:
    if sorted(perm) != list(range(k)):
        raise ValueError(f"{name} is not a permutation of 0..{k - 1}: {perm}")


def perm_inverse(perm: Perm) -> Perm:
    inv = [0] * len(perm)
    for i, img in enumerate(perm):
        inv[img] = i
    return tuple(inv)


@dataclass(frozen=True)
class PermTriple:
    """Cancellation patterns: s pairs factors on b = 0, p on c = 0 and,
    for four-line systems, v on 3a - b = 0.  The pairing on a = 0 is
    normalized to the identity by renumbering denominator factors."""

    s: Perm
    p: Perm
    v: Perm | None = None

    def __post_init__(self):
        k = len(self.s)
        _check_perm(self.s, k, "s")
        _check_perm(self.p, k, "p")
        if self.v is not None:
            _check_perm(self.v, k, "v")


@dataclass(frozen=True)
class MultiplierAssignment:
    """Per-factor multipliers; classical entries are nonzero rationals,
    quantum entries are +-1.  Each vector multiplies to one."""

    c: tuple[Fraction, ...]
    kmul: tuple[Fraction, ...]
    r: tuple[Fraction, ...] | None = None
    quantum: bool = False

    def __post_init__(self):
        for attr in ("c", "kmul", "r"):
            vec = getattr(self, attr)
            if vec is not None:
                object.__setattr__(self, attr, tuple(Fraction(q) for q in vec))
        for name, vec in (("c", self.c), ("k", self.kmul), ("r", self.r)):
            if vec is None:
                continue
            prod = Fraction(1)
            for entry in vec:
                if entry == 0:
                    raise InvalidMultiplierError(f"{name} contains a zero multiplier")
                if self.quantum and entry not in (1, -1):
                    raise InvalidMultiplierError(f"quantum {name} entries must be +-1")
                prod *= entry
            if prod != 1:
                raise InvalidMultiplierError(f"product of {name} multipliers is {prod}, not 1")


@dataclass(frozen=True)
class ConstraintSystem:
    """A fully instantiated equation set over the unknowns n_i, x_i, y_i.

    Unknown layout: n_i at index i, x_i at k + i, y_i at 2k + i.
    """

    k: int
    lines: str  # "three" | "four"
    perms: PermTriple
    mult: MultiplierAssignment

    def line_forms(self) -> tuple[LinearForm, ...]:
        return PRIMED_LINES[self.lines]

    def equations(self) -> list[tuple[str, dict[int, Fraction]]]:
        k = self.k
        s, p, v = self.perms.s, self.perms.p, self.perms.v
        c, km, r = self.mult.c, self.mult.kmul, self.mult.r
        eqs: list[tuple[str, dict[int, Fraction]]] = []

        def add(label: str, terms: list[tuple[int, Fraction]]) -> None:
            row: dict[int, Fraction] = {}
            for idx, coef in terms:
                row[idx] = row.get(idx, Fraction(0)) + coef
            eqs.append((label, {i: q for i, q in row.items() if q != 0}))

        for i in range(k):
            add(f"x[{i}] = c[{i}]*x[p({i})]", [(k + i, Fraction(1)), (k + p[i], -c[i])])
            add(f"y[{i}] = k[{i}]*y[s({i})]", [(2 * k + i, Fraction(1)), (2 * k + s[i], -km[i])])
            add(f"k[{i}]*n[s({i})] = c[{i}]*n[p({i})]", [(s[i], km[i]), (p[i], -c[i])])
        if self.lines == "four":
            assert v is not None and r is not None
            for i in range(k):
                add(f"y[{i}] = r[{i}]*y[v({i})]", [(2 * k + i, Fraction(1)), (2 * k + v[i], -r[i])])
                add(
                    f"c[{i}]*n[p({i})] + 3x[{i}] = r[{i}]*(n[v({i})] + 3x[v({i})])",
                    [
                        (p[i], c[i]),
                        (k + i, Fraction(3)),
                        (v[i], -r[i]),
                        (k + v[i], -3 * r[i]),
                    ],
                )
        return eqs


def build_system(
    k: int, lines: str, perms: PermTriple, mult: MultiplierAssignment
) -> ConstraintSystem:
    """Validate and assemble the equation set for the given pairings."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if lines not in ("three", "four"):
        raise ValueError("lines must be 'three' or 'four'")
    if len(perms.s) != k or len(perms.p) != k:
        raise ValueError("permutation length differs from k")
    if (lines == "four") != (perms.v is not None):
        raise ValueError("four-line systems need v, three-line systems must not have it")
    if (lines == "four") != (mult.r is not None):
        raise ValueError("four-line systems need r multipliers, three-line systems must not")
    if len(mult.c) != k or len(mult.kmul) != k or (mult.r is not None and len(mult.r) != k):
        raise ValueError("multiplier length differs from k")
    return ConstraintSystem(k, lines, perms, mult)


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failures: tuple[str, ...] = ()


def verify_solution(
    system: ConstraintSystem,
    n: tuple[Fraction, ...],
    x: tuple[Fraction, ...],
    y: tuple[Fraction, ...],
) -> VerifyReport:
    """Substitute a concrete assignment into every equation; exact per-equation
    pass/fail with the failing equations named."""
    k = system.k
    vec = tuple(Fraction(q) for q in (*n, *x, *y))
    if len(vec) != 3 * k:
        raise ValueError("assignment length differs from 3k")
    failures = []
    for label, row in system.equations():
        total = sum(coef * vec[idx] for idx, coef in row.items())
        if total != 0:
            failures.append(label)
    return VerifyReport(not failures, tuple(failures))


@dataclass(frozen=True)
class SolutionFamily:
    """Nullspace parametrization of a system: every unknown is a linear
    expression in the free parameters (rref convention, so parameter j is the
    value of the j-th free unknown)."""

    system: ConstraintSystem
    vectors: tuple[tuple[Fraction, ...], ...]  # one 3k-vector per free parameter

    @property
    def free_parameters(self) -> int:
        return len(self.vectors)

    def instantiate(
        self, params: tuple[Fraction, ...]
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[Fraction, ...]]:
        if len(params) != len(self.vectors):
            raise ValueError(f"expected {len(self.vectors)} parameters")
        k = self.system.k
        full = [Fraction(0)] * (3 * k)
        for t, vec in zip(params, self.vectors):
            if t == 0:
                continue
            for idx, component in enumerate(vec):
                full[idx] += t * component
        return tuple(full[:k]), tuple(full[k : 2 * k]), tuple(full[2 * k :])

    def factor_product(self, params: tuple[Fraction, ...], quantum: bool | None = None) -> FactorProduct:
        n, x, y = self.instantiate(params)
        if quantum is None:
            quantum = self.system.mult.quantum
        return product_from_assignment(self.system, n, x, y, quantum)


def product_from_assignment(
    system: ConstraintSystem,
    n: tuple[Fraction, ...],
    x: tuple[Fraction, ...],
    y: tuple[Fraction, ...],
    quantum: bool = False,
) -> FactorProduct:
    """The factor product encoded by an assignment, in the primed basis.
    Denominator alpha-coefficients are m_i = k_i * n_{s(i)}."""
    k = system.k
    s, km = system.perms.s, system.mult.kmul
    num = tuple(LinearForm((n[i], x[i], y[i]), Basis.PRIMED) for i in range(k))
    den = tuple(LinearForm((km[i] * n[s[i]], x[i], y[i]), Basis.PRIMED) for i in range(k))
    return FactorProduct(num, den, quantum=quantum, basis=Basis.PRIMED)


@dataclass(frozen=True)
class SolveOutcome:
    status: str  # "nontrivial" | "trivial" | "infeasible"
    family: SolutionFamily | None = None
    reason: str = ""


def _restriction_rows(system: ConstraintSystem, side: str, i: int) -> list[list[tuple[int, Fraction]]]:
    """Row combinations whose simultaneous vanishing makes factor i of the
    given side restrict to zero on each system line, in line order."""
    k = system.k
    s, km = system.perms.s, system.mult.kmul
    n_row = [(i, Fraction(1))] if side == "num" else [(s[i], km[i])]
    x_row = [(k + i, Fraction(1))]
    y_row = [(2 * k + i, Fraction(1))]
    rows = [
        [x_row, y_row],  # a' = 0
        [n_row, y_row],  # b' = 0
        [n_row, x_row],  # c' = 0
    ]
    if system.lines == "four":
        combo = n_row + [(idx, 3 * coef) for idx, coef in x_row]
        rows.append([combo, y_row])  # 3a' - b' = 0
    return rows


def _combo_is_zero(vectors, combo: list[tuple[int, Fraction]]) -> bool:
    for vec in vectors:
        if sum(coef * vec[idx] for idx, coef in combo) != 0:
            return False
    return True


def family_degeneracy(family: SolutionFamily) -> str | None:
    """Why every instantiation of the family fails to be a valid factor
    product equal to one on its lines: a factor forced to zero, or a factor
    whose restriction to a system line vanishes identically."""
    system = family.system
    k = system.k
    vectors = family.vectors
    for side in ("num", "den"):
        for i in range(k):
            rows = _restriction_rows(system, side, i)
            n_row = rows[1][0]
            x_row = rows[0][0]
            y_row = rows[0][1]
            if all(_combo_is_zero(vectors, row) for row in (n_row, x_row, y_row)):
                return f"{side}[{i}] is identically zero"
            for line_idx, pair in enumerate(rows):
                if all(_combo_is_zero(vectors, combo) for combo in pair):
                    return f"{side}[{i}] vanishes identically on system line {line_idx}"
    return None


def is_nontrivial(
    family: SolutionFamily, rng: random.Random | None = None, attempts: int = 100
) -> bool:
    """Semantic nontriviality: two independent generic instantiations both
    keep a nonempty product after cancellation."""
    if family.free_parameters < 1:
        raise ValueError("family has no free parameters")
    rng = rng or make_rng()
    quantum = family.system.mult.quantum
    survivors = 0
    draws = 0
    tried = 0
    while draws < 2:
        if tried >= attempts:
            raise DegenerateFamilyError(
                f"no nondegenerate instantiation in {attempts} draws"
            )
        tried += 1
        params = tuple(rand_rational(rng, 30, nonzero=True) for _ in range(family.free_parameters))
        try:
            product = family.factor_product(params, quantum=quantum)
        except ValueError:
            continue
        if _instantiation_restriction_vanishes(family.system, product):
            continue
        draws += 1
        if cancel(product).k > 0:
            survivors += 1
    return survivors == 2


def _instantiation_restriction_vanishes(system: ConstraintSystem, product: FactorProduct) -> bool:
    k = system.k
    for forms in (product.num, product.den):
        for f in forms:
            n_c, x_c, y_c = f.coeffs
            checks = [(x_c, y_c), (n_c, y_c), (n_c, x_c)]
            if system.lines == "four":
                checks.append((n_c + 3 * x_c, y_c))
            if any(a == 0 and b == 0 for a, b in checks):
                return True
    return False


def solve_quantum(system: ConstraintSystem, rng: random.Random | None = None) -> SolveOutcome:
    """Solve the system exactly for +-1 multipliers.

    The equations are linear over the rationals; the returned family is the
    nullspace in rref parametrization.  Families whose every instantiation
    has a zero factor or a factor vanishing identically on a system line are
    reported infeasible; the rest are split by the semantic triviality test.
    """
    if not system.mult.quantum:
        raise ValueError("solve_quantum needs +-1 multipliers (quantum assignment)")
    rows = [
        [row.get(idx, Fraction(0)) for idx in range(3 * system.k)]
        for _, row in system.equations()
    ]
    basis = nullspace(rows, 3 * system.k)
    if not basis:
        return SolveOutcome("infeasible", reason="only the zero solution")
    family = SolutionFamily(system, tuple(tuple(v) for v in basis))
    reason = family_degeneracy(family)
    if reason is not None:
        return SolveOutcome("infeasible", family=family, reason=reason)
    if is_nontrivial(family, rng=rng):
        return SolveOutcome("nontrivial", family=family)
    return SolveOutcome("trivial", family=family)


def sign_vectors(k: int) -> list[tuple[int, ...]]:
    """All +-1 vectors of length k with product +1, in a fixed order."""
    out = []
    for bits in itertools.product((1, -1), repeat=k - 1):
        tail = 1
        for b in bits:
            tail *= b
        out.append(bits + (tail,))
    return out


# --- exhaustive quantum enumeration -----------------------------------------


@dataclass(frozen=True)
class FoundFamily:
    case_index: int
    system: ConstraintSystem
    family: SolutionFamily


@dataclass(frozen=True)
class EnumerationResult:
    families: tuple[FoundFamily, ...]
    complete: bool
    cases_examined: int


def _conj_perm(tau: Perm, sigma: Perm) -> Perm:
    inv = perm_inverse(tau)
    return tuple(tau[sigma[inv[j]]] for j in range(len(tau)))


def _conj_vec(tau: Perm, vec: tuple) -> tuple:
    inv = perm_inverse(tau)
    return tuple(vec[inv[j]] for j in range(len(tau)))


def _stage1_canonical(s: Perm, p: Perm, c, km, taus) -> tuple[bool, list[Perm]]:
    """Whether (s, p, c, k) is the minimum of its simultaneous-relabeling
    orbit, plus the stabilizer used to dedup the second stage."""
    me = (s, p, c, km)
    stab = []
    for tau in taus:
        other = (_conj_perm(tau, s), _conj_perm(tau, p), _conj_vec(tau, c), _conj_vec(tau, km))
        if other < me:
            return False, []
        if other == me:
            stab.append(tau)
    return True, stab


def enumerate_families(
    k: int,
    lines: str,
    quantum: bool = True,
    budget: int | None = None,
    threads: int = 1,
    seed: int | None = None,
    dedup: bool = True,
) -> EnumerationResult:
    """Exhaustive quantum search over permutation tuples and sign vectors.

    With dedup on, permutation tuples are reduced to class representatives
    under simultaneous factor relabeling, and within a surviving three-line
    class the fourth-line choices are deduplicated by the class stabilizer;
    dedup off iterates every raw tuple.  Iteration order, and therefore the
    output, is deterministic.  `budget` caps the number of examined cases and
    flags the result incomplete when exceeded (budgeted runs are serial).
    """
    if not quantum:
        raise ValueError(
            "exhaustive search needs quantum (+-1) multipliers; classical "
            "assignments are only verified via verify_solution"
        )
    if lines not in ("three", "four"):
        raise ValueError("lines must be 'three' or 'four'")
    taus = list(itertools.permutations(range(k)))
    perms = list(itertools.permutations(range(k)))
    signs = sign_vectors(k)
    per_class = 1 if lines == "three" else len(perms) * len(signs)
    stage1 = []
    flat = 0
    for s in perms:
        for p in perms:
            for c in signs:
                for km in signs:
                    if dedup:
                        canonical, stab = _stage1_canonical(s, p, c, km, taus)
                    else:
                        canonical, stab = True, ()
                    if canonical:
                        stage1.append((flat * per_class, s, p, c, km, tuple(stab)))
                    flat += 1
    if threads > 1 and budget is None:
        chunks = [stage1[i::threads] for i in range(threads)]
        args = [(k, lines, chunk, seed, None) for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=len(args)) as pool:
            parts = list(pool.map(_enumerate_chunk, args))
        found = [item for part in parts for item in part[0]]
        cases = sum(part[1] for part in parts)
        complete = all(part[2] for part in parts)
    else:
        found, cases, complete = _enumerate_chunk((k, lines, stage1, seed, budget))
    found.sort(key=lambda item: item[0])
    families = tuple(FoundFamily(idx, system, family) for idx, system, family in found)
    return EnumerationResult(families, complete, cases)


def _enumerate_chunk(args):
    """Worker: process three-line classes; returns (found, cases, complete)
    where found holds (global_case_index, system, family) triples."""
    k, lines, entries, seed, budget = args
    rng = make_rng(seed)
    found = []
    cases = 0
    for offset, s, p, c, km, stab in entries:
        if lines == "three":
            if budget is not None and cases >= budget:
                return found, cases, False
            cases += 1
            mult = MultiplierAssignment(c, km, quantum=True)
            system = build_system(k, "three", PermTriple(s, p), mult)
            outcome = solve_quantum(system, rng=rng)
            if outcome.status == "nontrivial":
                found.append((offset, system, outcome.family))
            continue
        base = build_system(k, "three", PermTriple(s, p), MultiplierAssignment(c, km, quantum=True))
        base_basis = nullspace(_system_rows(base), 3 * k)
        for local_index, (v, r) in enumerate(_stage2_cases(k, stab)):
            if budget is not None and cases >= budget:
                return found, cases, False
            cases += 1
            if not base_basis:
                continue
            family = _extend_family(k, s, p, c, km, v, r, base_basis, rng)
            if family is not None:
                found.append((offset + local_index, family.system, family))
    return found, cases, True


def _system_rows(system: ConstraintSystem) -> list[list[Fraction]]:
    return [
        [row.get(idx, Fraction(0)) for idx in range(3 * system.k)]
        for _, row in system.equations()
    ]


def _stage2_cases(k: int, stab) -> list[tuple[Perm, tuple]]:
    """Fourth-line choices (v, r) in lex order, minus stabilizer duplicates."""
    cases = []
    for v in itertools.permutations(range(k)):
        for r in sign_vectors(k):
            if len(stab) > 1:
                me = (v, r)
                if any((_conj_perm(tau, v), _conj_vec(tau, r)) < me for tau in stab):
                    continue
            cases.append((v, r))
    return cases


def _fourth_line_sparse_rows(k: int, s, p, c, km, v, r) -> list[list[tuple[int, int]]]:
    """The equations the fourth line adds, as sparse (index, coefficient)
    rows over the 3k unknowns; all coefficients are integers for +-1 signs."""
    rows = []
    for i in range(k):
        acc: dict[int, int] = {}
        for idx, coef in ((2 * k + i, 1), (2 * k + v[i], -r[i])):
            acc[idx] = acc.get(idx, 0) + coef
        rows.append([(idx, q) for idx, q in acc.items() if q])
        acc = {}
        for idx, coef in (
            (p[i], c[i]),
            (k + i, 3),
            (v[i], -r[i]),
            (k + v[i], -3 * r[i]),
        ):
            acc[idx] = acc.get(idx, 0) + coef
        rows.append([(idx, q) for idx, q in acc.items() if q])
    return rows


def _extend_family(k, s, p, c, km, v, r, base_basis, rng) -> SolutionFamily | None:
    """Compose the fourth-line equations with the three-line nullspace; keep
    the combined space only if it is a valid nontrivial family."""
    reduced = [
        [sum(coef * vec[idx] for idx, coef in row) for vec in base_basis]
        for row in _fourth_line_sparse_rows(k, s, p, c, km, v, r)
    ]
    sub_basis = nullspace(reduced, len(base_basis))
    if not sub_basis:
        return None
    lifted = []
    for sub in sub_basis:
        vec = [Fraction(0)] * (3 * k)
        for t, base_vec in zip(sub, base_basis):
            if t == 0:
                continue
            for idx, component in enumerate(base_vec):
                vec[idx] += t * component
        lifted.append(tuple(vec))
    mult = MultiplierAssignment(c, km, r, quantum=True)
    system = build_system(k, "four", PermTriple(s, p, v), mult)
    family = SolutionFamily(system, tuple(lifted))
    if family_degeneracy(family) is not None:
        return None
    try:
        if is_nontrivial(family, rng=rng):
            return family
    except DegenerateFamilyError:
        return None
    return None


# --- built-in closed-form factors --------------------------------------------


def builtin_q33(c1, c2, x, y, quantum: bool = False) -> FactorProduct:
    """Three-factor non-uniqueness product equal to 1 on the lines a' = 0,
    b' = 0, c' = 0 (primed basis), with free parameters c1, c2, x, y.
    Collapses to the trivial product when c1 or c2 is 1."""
    c1, c2, x, y = (Fraction(q) for q in (c1, c2, x, y))
    if c1 == 0 or c2 == 0:
        raise ValueError("c1 and c2 must be nonzero")
    num = (
        LinearForm((1, x, y), Basis.PRIMED),
        LinearForm((c1 * c2, c2 * x, y), Basis.PRIMED),
        LinearForm((c1, c1 * c2 * x, y), Basis.PRIMED),
    )
    den = (
        LinearForm((c1, x, y), Basis.PRIMED),
        LinearForm((1, c2 * x, y), Basis.PRIMED),
        LinearForm((c1 * c2, c1 * c2 * x, y), Basis.PRIMED),
    )
    return FactorProduct(num, den, quantum=quantum, basis=Basis.PRIMED)


def builtin_q_prop4(n, x, xp, y, quantum: bool = False) -> FactorProduct:
    """Four-factor non-uniqueness product equal to 1 on a' = 0, b' = 0,
    c' = 0 and 3a' - b' = 0, with free parameters n, x, x' and y.  The
    denominator repeats the numerator with n swapped against
    n' = -(n + 3x + 3x')."""
    n, x, xp, y = (Fraction(q) for q in (n, x, xp, y))
    n2 = -(n + 3 * x + 3 * xp)
    num = (
        LinearForm((n, x, -y), Basis.PRIMED),
        LinearForm((n2, xp, -y), Basis.PRIMED),
        LinearForm((n, xp, y), Basis.PRIMED),
        LinearForm((n2, x, y), Basis.PRIMED),
    )
    den = (
        LinearForm((n2, x, -y), Basis.PRIMED),
        LinearForm((n, xp, -y), Basis.PRIMED),
        LinearForm((n2, xp, y), Basis.PRIMED),
        LinearForm((n, x, y), Basis.PRIMED),
    )
    return FactorProduct(num, den, quantum=quantum, basis=Basis.PRIMED)


FOUR_LINE_PERMS = PermTriple(s=(1, 0, 3, 2), p=(3, 2, 1, 0), v=(2, 3, 0, 1))


def reference_four_line_assignment(
    k1, k3, c2, n1, x1, x2, y3, minus_branch: bool = True
) -> tuple[ConstraintSystem, tuple, tuple, tuple]:
    """The hand-solved parameter assignment of the four-line system with the
    pairings of FOUR_LINE_PERMS, expressed in the free variables
    k1, k3, c2, n1, x1, x2, y3.  The minus branch (r1 = -c2*k1) carries the
    nontrivial solution; the plus branch forces a trivial product."""
    k1, k3, c2, n1, x1, x2, y3 = (Fraction(q) for q in (k1, k3, c2, n1, x1, x2, y3))
    if 0 in (k1, k3, c2):
        raise InvalidMultiplierError("multiplier draws must be nonzero")
    r1 = -c2 * k1 if minus_branch else c2 * k1
    if minus_branch:
        n2 = -(n1 + 3 * x1 + 3 * k1 * x2) / k1
    else:
        n2 = n1 / k1
        x2 = x1 / k1
    c = (c2 * k1 * k3, c2, 1 / c2, 1 / (c2 * k1 * k3))
    km = (k1, 1 / k1, k3, 1 / k3)
    r = (r1, r1 * k3 / k1, 1 / r1, k1 / (r1 * k3))
    mult = MultiplierAssignment(c, km, r, quantum=False)
    system = build_system(4, "four", FOUR_LINE_PERMS, mult)
    n3 = n1 / (k1 * c2)
    n4 = n2 / (c2 * k3)
    x3 = x2 / c2
    x4 = x1 / (c2 * k1 * k3)
    y1 = r1 * y3
    y2 = y1 / k1
    y4 = y3 / k3
    return system, (n1, n2, n3, n4), (x1, x2, x3, x4), (y1, y2, y3, y4)


def matches_builtin_four_line(family: SolutionFamily, rng: random.Random | None = None) -> bool:
    """Whether some instantiation of the family equals builtin_q_prop4 for
    some parameters, under quantum (+-) factor matching."""
    rng = rng or make_rng()
    for _ in range(20):
        params = tuple(rand_rational(rng, 20, nonzero=True) for _ in range(family.free_parameters))
        try:
            F = family.factor_product(params, quantum=True)
        except ValueError:
            continue
        if _instantiation_restriction_vanishes(family.system, F):
            continue
        beta_coeffs = {f.coeffs[1] for f in F.num} | {f.coeffs[1] for f in F.den}
        for anchor in F.num:
            n0, x0, yneg = anchor.coeffs
            y0 = -yneg
            if y0 == 0:
                continue
            for xp in beta_coeffs:
                if xp == x0:
                    continue
                try:
                    candidate = builtin_q_prop4(n0, x0, xp, y0, quantum=True)
                except ValueError:
                    continue
                quotient = cancel(ratio(F, candidate))
                if quotient.k == 0 and quotient.sign == 1:
                    return True
        return False
    return False


# --- classical k = 3 survey ---------------------------------------------------


def _cycles(perm: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class SurveyEntry:
    s: Perm
    p: Perm
    nontrivial: bool
    witness: FactorProduct | None = None
    witness_data: dict = field(default_factory=dict)


def survey_k3_classical(samples: int = 4, seed: int | None = None) -> list[SurveyEntry]:
    """Existence survey of nontrivial classical three-line factors at k = 3.

    For each pairing (s, p) the solution set splits into finitely many strata
    by the zero patterns of n, x and y (unions of cycles of the relevant
    permutations, with numerator factors normalized to alpha-coefficient one
    off the zero set).  On each stratum the admissible multipliers form a
    subtorus times a sign lattice; generic rational samples decide whether
    the stratum contains a non-cancelling product.  A sampled witness is an
    exact certificate of nontriviality; absence across all strata and samples
    certifies triviality up to the genericity of the draws.
    """
    rng = make_rng(seed)
    perms = list(itertools.permutations(range(3)))
    entries = []
    for s in perms:
        for p in perms:
            witness, data = _survey_pair(s, p, samples, rng)
            entries.append(
                SurveyEntry(s, p, witness is not None, witness, data)
            )
    return entries


def _survey_pair(s: Perm, p: Perm, samples: int, rng: random.Random):
    k = 3
    p_inv = perm_inverse(p)
    u = tuple(s[p_inv[j]] for j in range(k))
    u_cycles, p_cycles, s_cycles = _cycles(u), _cycles(p), _cycles(s)
    strata = []
    for zn_pick in _subsets(u_cycles):
        for zx_pick in _subsets(p_cycles):
            for zy_pick in _subsets(s_cycles):
                zn = frozenset(i for cyc in zn_pick for i in cyc)
                zx = frozenset(i for cyc in zx_pick for i in cyc)
                zy = frozenset(i for cyc in zy_pick for i in cyc)
                strata.append((len(zn) + len(zx) + len(zy), zn, zx, zy))
    strata.sort(key=lambda item: (item[0], sorted(item[1]), sorted(item[2]), sorted(item[3])))
    for _, zn, zx, zy in strata:
        if not _stratum_admissible(s, zn, zx, zy):
            continue
        witness = _sample_stratum(s, p, zn, zx, zy, p_cycles, s_cycles, samples, rng)
        if witness is not None:
            return witness[0], witness[1]
    return None, {}


def _subsets(cycles):
    out = []
    for mask in range(1 << len(cycles)):
        out.append([cyc for b, cyc in enumerate(cycles) if mask >> b & 1])
    return out


def _stratum_admissible(s: Perm, zn, zx, zy) -> bool:
    for i in range(len(s)):
        n_zero = i in zn
        m_zero = s[i] in zn
        x_zero = i in zx
        y_zero = i in zy
        if x_zero and y_zero:
            return False  # restriction to a' = 0 vanishes
        if n_zero and (y_zero or x_zero):
            return False  # numerator restriction to b' = 0 or c' = 0 vanishes
        if m_zero and (y_zero or x_zero):
            return False  # denominator restriction vanishes
    return True


def _sample_stratum(s, p, zn, zx, zy, p_cycles, s_cycles, samples, rng):
    k = 3
    # Multiplicative constraints on (c0, c1, c2, k0, k1, k2) as exponent rows.
    rows = [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]]
    for i in range(k):
        if s[i] not in zn:
            row = [0] * 6
            row[i] = 1
            row[3 + i] = -1
            rows.append(row)
    for cyc in p_cycles:
        if not set(cyc) <= zx:
            row = [0] * 6
            for i in cyc:
                row[i] += 1
            rows.append(row)
    for cyc in s_cycles:
        if not set(cyc) <= zy:
            row = [0] * 6
            for i in cyc:
                row[3 + i] += 1
            rows.append(row)
    gens = int_nullspace(rows, 6)
    sign_patterns = [
        signs
        for signs in itertools.product((1, -1), repeat=6)
        if all(
            _sign_product(signs, row) == 1
            for row in rows
        )
    ]
    for signs in sign_patterns:
        for _ in range(samples):
            mags = [_generic_rational(rng) for _ in gens]
            logs = [Fraction(1)] * 6
            for mag, gen in zip(mags, gens):
                for j in range(6):
                    if gen[j]:
                        logs[j] *= mag ** gen[j]
            c = tuple(signs[j] * logs[j] for j in range(3))
            km = tuple(signs[3 + j] * logs[3 + j] for j in range(3))
            witness = _build_stratum_product(s, p, zn, zx, zy, p_cycles, s_cycles, c, km, rng)
            if witness is not None:
                return witness
    return None


def _sign_product(signs, row) -> int:
    prod = 1
    for j, e in enumerate(row):
        if e % 2:
            prod *= signs[j]
    return prod


def _generic_rational(rng: random.Random) -> Fraction:
    while True:
        q = Fraction(rng.randint(2, 9), rng.randint(2, 9))
        if q != 1:
            return q if rng.random() < 0.5 else 1 / q


def _build_stratum_product(s, p, zn, zx, zy, p_cycles, s_cycles, c, km, rng):
    k = 3
    n = [Fraction(0) if i in zn else Fraction(1) for i in range(k)]
    x = [Fraction(0)] * k
    y = [Fraction(0)] * k
    for cyc in p_cycles:
        if set(cyc) <= zx:
            continue
        x[cyc[0]] = rand_rational(rng, 9, nonzero=True)
        i = cyc[0]
        for _ in range(len(cyc) - 1):
            x[p[i]] = x[i] / c[i]
            i = p[i]
    for cyc in s_cycles:
        if set(cyc) <= zy:
            continue
        y[cyc[0]] = rand_rational(rng, 9, nonzero=True)
        i = cyc[0]
        for _ in range(len(cyc) - 1):
            y[s[i]] = y[i] / km[i]
            i = s[i]
    mult = MultiplierAssignment(tuple(c), tuple(km), quantum=False)
    system = build_system(k, "three", PermTriple(tuple(s), tuple(p)), mult)
    report = verify_solution(system, tuple(n), tuple(x), tuple(y))
    if not report.ok:
        return None  # incompatible multipliers for this stratum draw
    try:
        product = product_from_assignment(system, tuple(n), tuple(x), tuple(y))
    except ValueError:
        return None
    if cancel(product).k == 0:
        return None
    data = {"zn": sorted(zn), "zx": sorted(zx), "zy": sorted(zy), "c": c, "k": km,
            "n": tuple(n), "x": tuple(x), "y": tuple(y)}
    return product, data


def matches_builtin_q33(entry: SurveyEntry) -> bool:
    """Whether a survey witness is the closed-form three-line family, after
    the index relabeling that aligns its pairings with builtin_q33's."""
    if not entry.nontrivial or entry.witness is None:
        return False
    data = entry.witness_data
    if data.get("zn") or data.get("zx") or data.get("zy"):
        return False
    c, x, y = data["c"], data["x"], data["y"]
    if entry.s == (1, 2, 0) and entry.p == (2, 0, 1):
        candidate = builtin_q33(c[0], c[1], x[0], y[0])
    elif entry.s == (2, 0, 1) and entry.p == (1, 2, 0):
        candidate = builtin_q33(c[1], c[0], x[1], y[1])
    else:
        return False
    quotient = cancel(ratio(entry.witness, candidate))
    return quotient.k == 0 and quotient.sign == 1 and quotient.scalar == 1
