"""p-complexity of finite coefficient sets and the universal protocol built on it.

The p-complexity of A is the fewest p-term arithmetic progressions whose
sumset contains A. All arithmetic here is exact (``fractions.Fraction``);
floating point would make sumset membership unreliable.

Exact minimisation over all real progressions is not searchable, so
:func:`p_complexity` searches a finite candidate space: progression steps are
drawn from ``{(a - b) / q : a > b in A, 1 <= q <= max_denominator}`` (or an
explicit list), while starts are unrestricted. Because a sumset only moves by
translation when the starts move, unrestricted starts reduce to a single
offset per step tuple, which the search enumerates exactly.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DecompositionError, PreconditionError
from .gf_codes import enumeration_bound
from .protocol import Answer, Progression, StorageSystem, shift_protocol

OPTIMAL_IN_SPACE = "optimal-in-space"
UPPER_BOUND = "upper-bound"


@dataclass(frozen=True)
class CoefficientSet:
    elements: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = tuple(sorted({Fraction(v) for v in self.elements}))
        if len(vals) != len(self.elements):
            raise PreconditionError("coefficient set has repeated elements")
        if len(vals) < 2:
            raise PreconditionError("coefficient set needs at least two elements")
        object.__setattr__(self, "elements", vals)

    @classmethod
    def of(cls, values: Iterable) -> CoefficientSet:
        return cls(tuple(sorted({Fraction(v) for v in values})))

    @classmethod
    def parse(cls, text: str) -> CoefficientSet:
        """Read ``"0..8"``, ``"-1,0,1"``, ``"1/2,3"`` or mixtures like ``"0..3,7"``."""
        return cls.of(parse_values(text))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value) -> bool:
        return Fraction(value) in set(self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"


_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_values(text: str) -> list[Fraction]:
    out: list[Fraction] = []
    for part in text.replace("{", "").replace("}", "").split(","):
        part = part.strip()
        if not part:
            continue
        match = _RANGE.match(part)
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if hi < lo:
                raise PreconditionError(f"empty range {part!r}")
            out.extend(Fraction(v) for v in range(lo, hi + 1))
            continue
        try:
            out.append(Fraction(part))
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"cannot parse {part!r} as a rational number") from exc
    if not out:
        raise PreconditionError(f"no values in {text!r}")
    return out


@dataclass(frozen=True)
class APDecomposition:
    p: int
    sets: tuple[Progression, ...]
    status: str = OPTIMAL_IN_SPACE

    def __post_init__(self) -> None:
        if self.p < 2:
            raise PreconditionError(f"p must be at least 2, got {self.p}")
        if not self.sets:
            raise PreconditionError("a decomposition needs at least one progression")
        for s in self.sets:
            if s.length != self.p:
                raise PreconditionError(f"progression {s} does not have {self.p} terms")

    @property
    def theta(self) -> int:
        return len(self.sets)

    @classmethod
    def from_elements(cls, p: int, sets: Iterable[Iterable], status: str = OPTIMAL_IN_SPACE) -> APDecomposition:
        return cls(p, tuple(Progression.from_elements(s) for s in sets), status)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "theta": self.theta,
            "sets": [{"start": str(s.start), "step": str(s.step)} for s in self.sets],
            "status": self.status,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> APDecomposition:
        if isinstance(data, str):
            data = json.loads(data)
        p = int(data["p"])
        sets = tuple(Progression(Fraction(s["start"]), Fraction(s["step"]), p) for s in data["sets"])
        dec = cls(p, sets, data.get("status", OPTIMAL_IN_SPACE))
        if "theta" in data and int(data["theta"]) != dec.theta:
            raise PreconditionError("theta does not match the number of sets")
        return dec


def _as_set(a: CoefficientSet | Iterable) -> CoefficientSet:
    return a if isinstance(a, CoefficientSet) else CoefficientSet.of(a)


def sumset(sets: Sequence[Progression]) -> set[Fraction]:
    size = math.prod(s.length for s in sets)
    if size > enumeration_bound():
        raise CapacityError(f"sumset of {len(sets)} progressions has up to {size} elements")
    total = {Fraction(0)}
    for s in sets:
        total = {x + e for x in total for e in s.elements}
    return total


def verify_decomposition(a: CoefficientSet | Iterable, dec: APDecomposition) -> bool:
    """True iff every element of ``a`` is a sum of one element from each progression."""
    covered = sumset(dec.sets)
    return all(e in covered for e in _as_set(a))


def lemma1_construction(a: CoefficientSet | Iterable, p: int) -> APDecomposition:
    """The explicit |A| - 1 progressions that always cover A.

    With a_1 < ... < a_M: for i <= M - 2 the set starting at a_i - a_M with
    step a_M - a_i (it contains a_i - a_M and 0), plus one set starting at
    a_{M-1} with step a_M - a_{M-1} (it contains a_{M-1} and a_M).
    """
    vals = _as_set(a).elements
    if p < 2:
        raise PreconditionError(f"p must be at least 2, got {p}")
    top = vals[-1]
    sets = [Progression(ai - top, top - ai, p) for ai in vals[:-2]]
    sets.append(Progression(vals[-2], top - vals[-2], p))
    return APDecomposition(p, tuple(sets), UPPER_BOUND)


def complexity_lower_bound(size: int, p: int) -> int:
    """Smallest theta with p**theta >= size."""
    theta = 1
    while p**theta < size:
        theta += 1
    return theta


def candidate_steps(a: CoefficientSet | Iterable, max_denominator: int = 2) -> list[Fraction]:
    vals = _as_set(a).elements
    diffs = {hi - lo for lo, hi in itertools.combinations(vals, 2)}
    return sorted({d / q for d in diffs for q in range(1, max_denominator + 1)})


@dataclass(frozen=True)
class ComplexityResult:
    theta: int
    witness: APDecomposition
    status: str
    lower_bound: int
    upper_bound: int
    leaves_searched: int

    def to_json(self) -> dict:
        return self.witness.to_json()


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _search(rel: list[int], steps: list[int], p: int, theta: int, budget: _Budget):
    """DFS over nondecreasing step tuples; returns (steps, tau) or None.

    ``rel`` is A - min(A) scaled to integers. A tuple of steps with sumset T
    works iff some tau in T has rel + tau inside T (tau places min(A)).
    A branch is cut when even the largest remaining steps could not span A.
    """
    span = rel[-1]
    top = steps[-1]
    exhausted = False

    def dfs(first: int, chosen: list[int], partial: frozenset[int], total: int):
        nonlocal exhausted
        depth = len(chosen)
        if depth == theta:
            if not budget.spend():
                exhausted = True
                return None
            for tau in sorted(partial):
                if all(r + tau in partial for r in rel):
                    return tuple(chosen), tau
            return None
        remaining = theta - depth - 1
        for idx in range(first, len(steps)):
            d = steps[idx]
            if (p - 1) * (total + d + remaining * top) < span:
                continue
            grown = frozenset(s + j * d for s in partial for j in range(p))
            found = dfs(idx, chosen + [d], grown, total + d)
            if found is not None or exhausted:
                return found
        return None

    return dfs(0, [], frozenset({0}), 0), exhausted


def p_complexity(a: CoefficientSet | Iterable, p: int, budget: int = 1_000_000, *,
                 max_denominator: int = 2, steps: Iterable | None = None) -> ComplexityResult:
    """Smallest number of p-term progressions covering ``a`` within the candidate space.

    Levels theta = ceil(log_p |A|), ..., |A| - 2 are searched in order; if
    none succeeds the explicit |A| - 1 construction is returned. Status is
    ``optimal-in-space`` when every smaller level was exhausted, or
    ``upper-bound`` when the leaf budget ran out first.
    """
    coeffs = _as_set(a)
    if p < 2:
        raise PreconditionError(f"p must be at least 2, got {p}")
    size = len(coeffs)
    lower = complexity_lower_bound(size, p)
    upper = size - 1
    step_list = sorted({Fraction(s) for s in steps}) if steps is not None else candidate_steps(coeffs, max_denominator)
    if any(s <= 0 for s in step_list):
        raise PreconditionError("candidate steps must be positive")

    scale = math.lcm(*(v.denominator for v in (*coeffs.elements, *step_list)))
    base = coeffs.elements[0]
    rel = [int((v - base) * scale) for v in coeffs.elements]
    int_steps = [int(s * scale) for s in step_list]

    tally = _Budget(budget)
    exhausted = False
    if int_steps:
        for theta in range(lower, upper):
            found, exhausted = _search(rel, int_steps, p, theta, tally)
            if found is not None:
                chosen, tau = found
                offset = base - Fraction(tau, scale)
                sets = [Progression(offset, Fraction(chosen[0], scale), p)]
                sets += [Progression(0, Fraction(d, scale), p) for d in chosen[1:]]
                witness = APDecomposition(p, tuple(sets), OPTIMAL_IN_SPACE)
                assert verify_decomposition(coeffs, witness)
                return ComplexityResult(theta, witness, OPTIMAL_IN_SPACE, lower, upper, tally.used)
            if exhausted:
                break

    status = UPPER_BOUND if exhausted else OPTIMAL_IN_SPACE
    fallback = lemma1_construction(coeffs, p)
    witness = APDecomposition(p, fallback.sets, status)
    return ComplexityResult(upper, witness, status, lower, upper, tally.used)


# -- universal protocol --------------------------------------------------------


def expression_table(a: CoefficientSet | Iterable, dec: APDecomposition) -> dict[Fraction, tuple[Fraction, ...]]:
    """For each element of A, the first tuple (s_1, ..., s_theta) summing to it.

    Tuples are visited in product order over the progressions' ascending
    terms, so the table is deterministic.
    """
    size = math.prod(s.length for s in dec.sets)
    if size > enumeration_bound():
        raise CapacityError(f"sumset enumeration of {size} tuples exceeds the bound")
    wanted = {Fraction(v) for v in a}
    table: dict[Fraction, tuple[Fraction, ...]] = {}
    for combo in itertools.product(*(s.elements for s in dec.sets)):
        total = sum(combo, Fraction(0))
        if total in wanted and total not in table:
            table[total] = combo
            if len(table) == len(wanted):
                break
    missing = wanted - table.keys()
    if missing:
        raise DecompositionError(f"{sorted(str(v) for v in missing)} not in the decomposition's sumset")
    return table


def split_query(w: Sequence, table: dict[Fraction, tuple[Fraction, ...]], theta: int) -> list[list[Fraction]]:
    """Split w into theta vectors, the i-th drawn from the i-th progression."""
    parts: list[list[Fraction]] = [[] for _ in range(theta)]
    for v in w:
        key = Fraction(v)
        if key not in table:
            raise DecompositionError(f"coefficient {v} is not covered by the decomposition")
        for i, s in enumerate(table[key]):
            parts[i].append(s)
    return parts


def universal_protocol(w: Sequence, storage: StorageSystem, dec: APDecomposition,
                       coefficients: CoefficientSet | Iterable | None = None) -> Answer:
    """Answer w . x for arbitrary coefficients from A_p storage.

    Each coordinate of w is split across the progressions of ``dec``; every
    part is answered with the shift protocol and the results are added. The
    all-ones node is shared, so it is read at most once.
    """
    if dec.p != storage.scheme.p:
        raise PreconditionError(f"decomposition uses p={dec.p}, storage uses p={storage.scheme.p}")
    table = expression_table(coefficients if coefficients is not None else w, dec)
    parts = split_query(w, table, dec.theta)
    value = 0.0
    nodes: set[int] = set()
    for part, progression in zip(parts, dec.sets):
        answer = shift_protocol(part, storage, progression)
        value += answer.value
        nodes |= answer.nodes
    return Answer(value, len(nodes), frozenset(nodes))
