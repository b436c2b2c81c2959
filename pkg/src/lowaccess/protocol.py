"""Low-access evaluation of w . x over a simulated systematic storage array.

Data x in R^k is cut into t batches of length m (zero padded). Batch i is
stored as x_i [I | B]: m systematic nodes followed by one node per column of
B. A query w is answered batch by batch from one coded node (possibly negated)
plus a few systematic corrections.

Three column sets are supported, all through :class:`AccessScheme`:

* ``reduced`` -- columns are the sign-reduced codewords in the symmetric
  (R-)representation of F_p, for coefficients in A_p = {0, +-1, ..., +-(p-1)/2};
* ``generic`` -- every codeword, under an arbitrary residue -> coefficient map;
* ``pm_one`` -- a binary code with one of each complementary pair, for {+-1}.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .constructions import ReducedCode, reduce_code
from .errors import CoefficientRangeError, DimensionError, IntegrityError, PreconditionError
from .gf_codes import CoveringCode

REL_TOL = 1e-9
ABS_TOL = 1e-12


def values_match(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL)


class RRepresentation:
    """Symmetric embedding of F_p (p odd) into A_p; negation commutes with it."""

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0:
            raise DimensionError(f"the symmetric representation needs an odd prime, got {p}")
        self.p = p
        self.half = (p - 1) // 2
        self.values: tuple[int, ...] = tuple(z if z <= self.half else z - p for z in range(p))

    def forward(self, residue: int) -> int:
        return self.values[residue % self.p]

    def inverse(self, value: int) -> int:
        if not -self.half <= value <= self.half or value != int(value):
            raise CoefficientRangeError(f"{value} is not in A_{self.p}")
        return int(value) % self.p

    @property
    def coefficient_set(self) -> tuple[int, ...]:
        return tuple(range(-self.half, self.half + 1))


def symmetric_set(p: int) -> tuple[int, ...]:
    """A_p = {0, +-1, ..., +-(p-1)/2}, ascending."""
    return RRepresentation(p).coefficient_set


@dataclass(frozen=True, eq=False)
class EncodingMatrix:
    """The coded part B of the per-batch generator matrix [I | B]."""

    m: int
    B: np.ndarray

    @property
    def columns(self) -> int:
        return self.B.shape[1]

    @property
    def M(self) -> np.ndarray:
        return np.hstack([np.eye(self.m), self.B])


@dataclass(frozen=True, eq=False)
class AccessScheme:
    """A code, its coefficient map, the stored columns, and how each codeword is reached.

    ``route_index[c]`` is the stored column that yields codeword ``c`` (after
    multiplying by ``route_sign[c]``), or -1 when ``c`` is served from
    systematic nodes alone.
    """

    kind: str
    code: CoveringCode
    values: tuple[float, ...]
    matrix: EncodingMatrix
    route_index: np.ndarray
    route_sign: np.ndarray
    key: tuple = field(repr=False)

    @property
    def p(self) -> int:
        return self.code.p

    @property
    def m(self) -> int:
        return self.code.m

    def coefficient_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def to_residues(self, w: np.ndarray) -> np.ndarray:
        vals = self.coefficient_array()
        order = np.argsort(vals)
        sorted_vals = vals[order]
        pos = np.clip(np.searchsorted(sorted_vals, w), 0, len(vals) - 1)
        bad = sorted_vals[pos] != w
        if bad.any():
            offender = w[np.argmax(bad)]
            raise CoefficientRangeError(
                f"coefficient {offender} is outside the scheme's coefficient set {sorted(self.values)}"
            )
        return order[pos]


def _make_scheme(kind: str, code: CoveringCode, values: Sequence, stored: Sequence[tuple[int, ...]],
                 routes: Sequence[tuple[int, int]]) -> AccessScheme:
    vals = tuple(float(v) for v in values)
    if len(set(vals)) != code.p:
        raise PreconditionError(f"need {code.p} distinct coefficients, got {list(values)}")
    table = np.asarray(vals)
    B = table[np.asarray(stored, dtype=np.int64).reshape(len(stored), code.m)].T.copy()
    B.setflags(write=False)
    index = np.array([r[0] for r in routes], dtype=np.int64)
    sign = np.array([r[1] for r in routes], dtype=np.int64)
    key = (kind, code.p, code.words, vals, tuple(stored))
    return AccessScheme(kind, code, vals, EncodingMatrix(code.m, B), index, sign, key)


def reduced_scheme(reduced: ReducedCode) -> AccessScheme:
    """Columns are the reduced codewords in the symmetric representation."""
    rep = RRepresentation(reduced.p)
    routes = []
    for w in reduced.parent.words:
        r = reduced.routes[w]
        routes.append((-1, 1) if r.low_weight else (r.index, r.sign))
    return _make_scheme("reduced", reduced.parent, rep.values, reduced.kept, routes)


def generic_scheme(code: CoveringCode, coefficients: Sequence) -> AccessScheme:
    """Store every codeword; residue z is read as ``coefficients[z]``."""
    if len(coefficients) != code.p:
        raise PreconditionError(f"need exactly {code.p} coefficients, got {len(coefficients)}")
    routes = [(j, 1) for j in range(len(code))]
    return _make_scheme("generic", code, coefficients, code.words, routes)


def complement_scheme(code: CoveringCode) -> AccessScheme:
    """Binary code for {+-1}: 0 -> +1, 1 -> -1, one column per complementary pair."""
    if code.p != 2:
        raise DimensionError("the complement scheme needs a binary code")
    stored: list[tuple[int, ...]] = []
    position: dict[tuple[int, ...], int] = {}
    routes = []
    for w in code.words:
        comp = tuple(1 - e for e in w)
        if comp in position:
            routes.append((position[comp], -1))
        else:
            position[w] = len(stored)
            stored.append(w)
            routes.append((position[w], 1))
    return _make_scheme("pm_one", code, (1, -1), stored, routes)


def _as_scheme(obj: AccessScheme | ReducedCode | CoveringCode) -> AccessScheme:
    if isinstance(obj, AccessScheme):
        return obj
    if isinstance(obj, ReducedCode):
        return reduced_scheme(obj)
    if isinstance(obj, CoveringCode):
        return reduced_scheme(reduce_code(obj))
    raise TypeError(f"cannot build an access scheme from {type(obj).__name__}")


# -- storage -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StorageSystem:
    """Node array for ``t`` batches; read-only once built.

    Batch i occupies nodes ``i*block .. i*block + block - 1``: first the m
    systematic symbols, then one node per stored column. The optional all-ones
    node ``1 . x`` sits after the last batch.
    """

    scheme: AccessScheme
    k: int
    t: int
    nodes: np.ndarray
    ones_index: int | None = None

    @property
    def m(self) -> int:
        return self.scheme.m

    @property
    def block(self) -> int:
        return self.m + self.scheme.matrix.columns

    @property
    def n(self) -> int:
        """Node count excluding the all-ones node."""
        return self.t * self.block

    @property
    def redundancy_ratio(self) -> Fraction:
        return Fraction(self.n, self.t * self.m)

    def systematic_node(self, batch: int, j: int) -> int:
        return batch * self.block + j

    def coded_node(self, batch: int, column: int) -> int:
        return batch * self.block + self.m + column

    def with_ones_node(self) -> StorageSystem:
        if self.ones_index is not None:
            return self
        systematic = self.nodes[: self.n].reshape(self.t, self.block)[:, : self.m]
        ones = math.fsum(systematic.ravel().tolist())
        nodes = np.append(self.nodes, ones)
        nodes.setflags(write=False)
        return StorageSystem(self.scheme, self.k, self.t, nodes, self.n)


def encode(x: Sequence[float] | np.ndarray, scheme: AccessScheme | ReducedCode | CoveringCode,
           *, ones_node: bool = False) -> StorageSystem:
    """Split x into zero-padded batches and store x_i [I | B] for each."""
    scheme = _as_scheme(scheme)
    data = np.asarray(x, dtype=float).ravel()
    if data.size == 0:
        raise DimensionError("cannot encode empty data")
    m = scheme.m
    t = -(-data.size // m)
    padded = np.zeros(t * m)
    padded[: data.size] = data
    batches = padded.reshape(t, m)
    nodes = np.hstack([batches, batches @ scheme.matrix.B]).ravel()
    nodes.setflags(write=False)
    storage = StorageSystem(scheme, data.size, t, nodes)
    return storage.with_ones_node() if ones_node else storage


# -- planning ------------------------------------------------------------------

CASE_SKIP, CASE_CODED, CASE_NEGATED, CASE_LOW_WEIGHT = "skip", "coded", "negated", "low_weight"


@dataclass(frozen=True, eq=False)
class AccessPlan:
    """Per-batch choice of codeword, coded column, sign and systematic corrections.

    ``corrections[i, j]`` is the coefficient applied to systematic node j of
    batch i; zero means the node is not read. ``column[i] == -1`` means no
    coded node is read for batch i.
    """

    scheme_key: tuple = field(repr=False)
    k: int
    t: int
    m: int
    block: int
    codeword: np.ndarray
    column: np.ndarray
    sign: np.ndarray
    corrections: np.ndarray
    cases: tuple[str, ...]

    @property
    def nodes(self) -> tuple[int, ...]:
        coded = [i * self.block + self.m + c for i, c in enumerate(self.column.tolist()) if c >= 0]
        rows, cols = np.nonzero(self.corrections)
        systematic = (rows * self.block + cols).tolist()
        return tuple(sorted(set(coded) | set(systematic)))

    @property
    def ell(self) -> int:
        return len(self.nodes)

    def batch_access(self) -> np.ndarray:
        return (self.column >= 0).astype(int) + (self.corrections != 0).sum(axis=1)


def _pad(w: Sequence[float] | np.ndarray, t: int, m: int) -> np.ndarray:
    arr = np.asarray([float(v) for v in np.ravel(np.asarray(w, dtype=object))], dtype=float)
    out = np.zeros(t * m)
    out[: arr.size] = arr
    return out.reshape(t, m)


def plan_access(w: Sequence[float] | np.ndarray, scheme: AccessScheme | ReducedCode | CoveringCode,
                *, k: int | None = None) -> AccessPlan:
    """Pick, per batch, a nearest codeword and the cheapest way to read it.

    Among codewords at minimum Hamming distance from the batch (as a word
    over F_p), the one with the fewest node reads wins; ties go to the
    lexicographically smallest codeword. Correction terms with coefficient 0
    are never read, and an all-zero batch reads nothing.
    """
    scheme = _as_scheme(scheme)
    m = scheme.m
    length = len(w) if k is None else k
    if length < 1:
        raise DimensionError("empty query")
    if k is not None and len(w) != k:
        raise DimensionError(f"query has length {len(w)}, storage holds k={k}")
    t = -(-length // m)
    W = _pad(w, t, m)
    # padded coordinates multiply x = 0, so they match any codeword for free
    real = np.zeros(t * m, dtype=bool)
    real[:length] = True
    real = real.reshape(t, m)
    residues = np.zeros((t, m), dtype=np.int64)
    residues[real] = scheme.to_residues(W[real])

    code = scheme.code.array
    dist = ((residues[:, None, :] != code[None, :, :]) & real[:, None, :]).sum(axis=2)
    nearest = dist.min(axis=1, keepdims=True)

    route = scheme.route_index
    column_nonzero = np.any(scheme.matrix.B != 0, axis=0)
    coded_cost = np.zeros(route.size, dtype=np.int64)
    if scheme.matrix.columns:
        # a stored all-zero combination contributes nothing and is never read
        coded_cost = np.where(route >= 0, column_nonzero[np.maximum(route, 0)], 0).astype(np.int64)
    weights = (W != 0).sum(axis=1)
    cost = np.where(route[None, :] >= 0, coded_cost[None, :] + dist, weights[:, None])
    cost = np.where(dist == nearest, cost, np.iinfo(np.int64).max)
    choice = cost.argmin(axis=1)

    vals = scheme.coefficient_array()
    chosen_real = vals[code[choice]]
    chosen_route = route[choice]
    low = chosen_route < 0
    mismatch = (W != chosen_real) & real
    corrections = np.where(low[:, None], W, np.where(mismatch, W - chosen_real, 0.0))
    sign = np.where(low, 0, scheme.route_sign[choice])
    column = np.where(low, -1, chosen_route)
    if column.size and scheme.matrix.columns:
        zero_col = ~column_nonzero[np.maximum(column, 0)] & (column >= 0)
        column = np.where(zero_col, -1, column)
    skip = ~W.any(axis=1)
    column = np.where(skip, -1, column)
    corrections = np.where(skip[:, None], 0.0, corrections)
    chosen = np.where(skip, -1, choice)

    cases = tuple(
        CASE_SKIP if s else CASE_LOW_WEIGHT if lo else CASE_NEGATED if sg < 0 else CASE_CODED
        for s, lo, sg in zip(skip.tolist(), low.tolist(), sign.tolist())
    )
    block = m + scheme.matrix.columns
    return AccessPlan(scheme.key, length, t, m, block, chosen, column, sign, corrections, cases)


def execute_plan(plan: AccessPlan, storage: StorageSystem, counter: set[int] | None = None) -> float:
    """Combine the planned node reads into w . x.

    ``counter``, when given, receives every node index read (a node read
    twice counts once).
    """
    if plan.scheme_key != storage.scheme.key:
        raise IntegrityError("plan was made for a different access scheme")
    if (plan.t, plan.m, plan.block) != (storage.t, storage.m, storage.block):
        raise IntegrityError(
            f"plan layout t={plan.t}, m={plan.m} does not match storage t={storage.t}, m={storage.m}"
        )
    batches = np.arange(plan.t)
    used = plan.column >= 0
    coded_idx = batches[used] * plan.block + plan.m + plan.column[used]
    rows, cols = np.nonzero(plan.corrections)
    sys_idx = rows * plan.block + cols
    terms = np.concatenate([
        plan.sign[used] * storage.nodes[coded_idx],
        plan.corrections[rows, cols] * storage.nodes[sys_idx],
    ])
    if counter is not None:
        counter.update(coded_idx.tolist())
        counter.update(sys_idx.tolist())
    return math.fsum(terms.tolist())


class Answer(NamedTuple):
    value: float
    ell: int
    nodes: frozenset[int]


def query(w: Sequence[float] | np.ndarray, storage: StorageSystem) -> Answer:
    plan = plan_access(w, storage.scheme, k=storage.k)
    nodes: set[int] = set()
    value = execute_plan(plan, storage, nodes)
    return Answer(value, len(nodes), frozenset(nodes))


def generic_protocol(w, x, code: CoveringCode, coefficient_set: Sequence) -> Answer:
    """Store all codewords with residue z read as ``coefficient_set[z]`` and answer w . x."""
    storage = encode(x, generic_scheme(code, coefficient_set))
    return query(w, storage)


def binary_baseline(w, x, code: CoveringCode, variant: str = "zero_one") -> Answer:
    """Binary-code protocols for {0, 1} (all codewords) and {+-1} (complement pairs)."""
    if code.p != 2:
        raise DimensionError("binary baselines need a code over F_2")
    if variant == "zero_one":
        scheme = generic_scheme(code, (0, 1))
    elif variant == "pm_one":
        scheme = complement_scheme(code)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return query(w, encode(x, scheme))


# -- arithmetic progressions ---------------------------------------------------


@dataclass(frozen=True)
class Progression:
    """start, start + step, ..., start + (length - 1) * step with step > 0."""

    start: Fraction
    step: Fraction
    length: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", Fraction(self.start))
        object.__setattr__(self, "step", Fraction(self.step))
        if self.step <= 0:
            raise PreconditionError(f"progression step must be positive, got {self.step}")
        if self.length < 1:
            raise PreconditionError("progression must be nonempty")

    @classmethod
    def from_elements(cls, elements: Iterable) -> Progression:
        vals = sorted({Fraction(v) for v in elements})
        if len(vals) < 2:
            raise PreconditionError("a progression needs at least two distinct elements")
        step = vals[1] - vals[0]
        if any(b - a != step for a, b in zip(vals, vals[1:])):
            raise PreconditionError(f"{[str(v) for v in vals]} is not an arithmetic progression")
        return cls(vals[0], step, len(vals))

    @property
    def elements(self) -> tuple[Fraction, ...]:
        return tuple(self.start + j * self.step for j in range(self.length))

    def __contains__(self, value) -> bool:
        q = (Fraction(value) - self.start) / self.step
        return q.denominator == 1 and 0 <= q < self.length

    def index(self, value) -> int:
        q = (Fraction(value) - self.start) / self.step
        if q.denominator != 1 or not 0 <= q < self.length:
            raise CoefficientRangeError(f"{value} is not in {self}")
        return int(q)

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"


def _require_symmetric(storage: StorageSystem) -> None:
    p = storage.scheme.p
    if p % 2 == 0 or storage.scheme.values != tuple(float(v) for v in RRepresentation(p).values):
        raise PreconditionError("storage must use the symmetric A_p representation")


def _ones(storage: StorageSystem) -> tuple[int, float]:
    if storage.ones_index is None:
        raise PreconditionError("storage has no all-ones node; encode with ones_node=True")
    return storage.ones_index, float(storage.nodes[storage.ones_index])


def shift_protocol(w: Sequence, storage: StorageSystem, progression: Progression) -> Answer:
    """Answer w . x for w over a p-term progression, using A_p storage.

    a_{i+1} is read as the A_p coefficient i - (p-1)/2; the A_p answer is
    scaled by the step and the all-ones node corrects the offset.
    """
    _require_symmetric(storage)
    p = storage.scheme.p
    if progression.length != p:
        raise PreconditionError(f"progression has {progression.length} terms, storage needs {p}")
    half = (p - 1) // 2
    shifted = [progression.index(v) - half for v in w]
    inner = query(shifted, storage)
    offset = half * progression.step + progression.start
    value = float(progression.step) * inner.value
    nodes = set(inner.nodes)
    if offset != 0:
        ones_index, ones = _ones(storage)
        value += float(offset) * ones
        nodes.add(ones_index)
    return Answer(value, len(nodes), frozenset(nodes))


def inverse_shift_protocol(w: Sequence, storage: StorageSystem, progression: Progression) -> Answer:
    """Answer an A_p query from storage built for a p-term progression.

    The storage must be a generic scheme whose residue z reads as the
    (z+1)-th term of ``progression``.
    """
    p = storage.scheme.p
    if progression.length != p or storage.scheme.values != tuple(float(e) for e in progression.elements):
        raise PreconditionError("storage coefficients must be the progression terms in order")
    half = (p - 1) // 2
    d, a1 = progression.step, progression.start
    lifted = []
    for v in w:
        i = Fraction(v)
        if i.denominator != 1 or abs(i) > half:
            raise CoefficientRangeError(f"{v} is not in A_{p}")
        lifted.append(a1 + (half + i) * d)
    inner = query(lifted, storage)
    ones_coef = half + a1 / d
    value = inner.value / float(d)
    nodes = set(inner.nodes)
    if ones_coef != 0:
        ones_index, ones = _ones(storage)
        value -= float(ones_coef) * ones
        nodes.add(ones_index)
    return Answer(value, len(nodes), frozenset(nodes))


# -- oracle and trace ----------------------------------------------------------


def exact_dot(w: Sequence, x: Sequence) -> Fraction:
    """w . x in exact rational arithmetic (floats are taken at their binary value)."""
    return sum((Fraction(a) * Fraction(float(b)) for a, b in zip(w, x)), Fraction(0))


def trace_record(query_id: int, storage: StorageSystem, answer: Answer, oracle: float) -> dict:
    return {
        "query_id": query_id,
        "k": storage.k,
        "m": storage.m,
        "t": storage.t,
        "accessed_nodes": sorted(answer.nodes),
        "ell": answer.ell,
        "result": answer.value,
        "oracle": oracle,
        "match": values_match(answer.value, oracle),
    }
