"""Vectors and covering codes over a prime field F_p.

Codes are explicit (possibly nonlinear) sets of codewords. Covering radius and
norm are computed exactly by enumerating F_p^m, so every routine that needs the
whole space checks the size against :func:`enumeration_bound` first.

Coordinates are 1-based in the public API (``coordinate=5`` is the fifth
symbol), as in the usual coding-theory notation.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmalgamationError,
    CapacityError,
    CodeFormatError,
    DimensionError,
    RadiusBoundViolation,
    UndefinedNormError,
)

DEFAULT_ENUM_BOUND = 2**24
ENUM_BOUND_ENV = "LOWACCESS_ENUM_BOUND"


def enumeration_bound() -> int:
    """Largest p**m this process is willing to enumerate."""
    raw = os.environ.get(ENUM_BOUND_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_ENUM_BOUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise CapacityError(f"{ENUM_BOUND_ENV}={raw!r} is not an integer") from exc
    if value < 1:
        raise CapacityError(f"{ENUM_BOUND_ENV} must be positive, got {value}")
    return value


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FpVector:
    """A vector over F_p with entries stored as residues 0..p-1."""

    p: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise DimensionError(f"modulus {self.p} is not prime")
        if len(self.entries) == 0:
            raise DimensionError("vectors must have positive length")
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        for e in self.entries:
            if not 0 <= e < self.p:
                raise DimensionError(f"entry {e} not in [0, {self.p - 1}]")

    @classmethod
    def from_string(cls, p: int, digits: str) -> FpVector:
        return cls(p, tuple(int(ch) for ch in digits))

    def __len__(self) -> int:
        return len(self.entries)

    def __neg__(self) -> FpVector:
        return FpVector(self.p, tuple((-e) % self.p for e in self.entries))

    def _check(self, other: FpVector) -> None:
        if self.p != other.p or len(self) != len(other):
            raise DimensionError(
                f"incompatible vectors: F_{self.p}^{len(self)} vs F_{other.p}^{len(other)}"
            )

    def __add__(self, other: FpVector) -> FpVector:
        self._check(other)
        return FpVector(self.p, tuple((a + b) % self.p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: FpVector) -> FpVector:
        return self + (-other)

    def scale(self, a: int) -> FpVector:
        return FpVector(self.p, tuple((a * e) % self.p for e in self.entries))

    @property
    def weight(self) -> int:
        return sum(1 for e in self.entries if e)

    def __str__(self) -> str:
        if self.p <= 10:
            return "".join(str(e) for e in self.entries)
        return " ".join(str(e) for e in self.entries)


def hamming_distance(u: FpVector, v: FpVector) -> int:
    u._check(v)
    return sum(1 for a, b in zip(u.entries, v.entries) if a != b)


class CoveringCode:
    """A nonempty set of distinct codewords in F_p^m.

    Codewords are kept in lexicographic order, so two codes with the same
    codeword set compare equal and iterate identically. Instances are treated
    as immutable; the covering radius and per-coordinate norms are cached.
    """

    def __init__(self, p: int, codewords: Iterable[Sequence[int] | FpVector], m: int | None = None):
        if not _is_prime(p):
            raise DimensionError(f"modulus {p} is not prime")
        words = set()
        for c in codewords:
            entries = c.entries if isinstance(c, FpVector) else tuple(int(e) for e in c)
            if isinstance(c, FpVector) and c.p != p:
                raise DimensionError(f"codeword over F_{c.p} in a code over F_{p}")
            words.add(entries)
        if not words:
            raise DimensionError("a code must contain at least one codeword")
        lengths = {len(w) for w in words}
        if len(lengths) != 1:
            raise DimensionError(f"codewords of different lengths: {sorted(lengths)}")
        (length,) = lengths
        if m is not None and m != length:
            raise DimensionError(f"declared length {m} but codewords have length {length}")
        if length == 0:
            raise DimensionError("codewords must have positive length")
        for w in words:
            if any(not 0 <= e < p for e in w):
                raise DimensionError(f"codeword {w} has entries outside [0, {p - 1}]")
        self.p = p
        self.m = length
        self.words: tuple[tuple[int, ...], ...] = tuple(sorted(words))
        self.array = np.array(self.words, dtype=np.int64).reshape(len(self.words), length)
        self.array.setflags(write=False)
        self.radius_cache: int | None = None
        self.norm_cache: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word) -> bool:
        if isinstance(word, FpVector):
            word = word.entries
        return tuple(word) in self._word_set

    @property
    def _word_set(self) -> frozenset:
        cached = self.__dict__.get("_ws")
        if cached is None:
            cached = self.__dict__["_ws"] = frozenset(self.words)
        return cached

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoveringCode):
            return NotImplemented
        return self.p == other.p and self.m == other.m and self.words == other.words

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.words))

    def __repr__(self) -> str:
        return f"CoveringCode(p={self.p}, m={self.m}, size={len(self)})"

    def vectors(self) -> list[FpVector]:
        return [FpVector(self.p, w) for w in self.words]

    def is_symmetric(self) -> bool:
        """True when the code is closed under negation."""
        return all(tuple((-e) % self.p for e in w) in self for w in self.words)

    def slice(self, coordinate: int, value: int) -> CoordinateSlice:
        _check_coordinate(self, coordinate)
        members = tuple(w for w in self.words if w[coordinate - 1] == value)
        return CoordinateSlice(self, coordinate, value, members)

    @property
    def space_size(self) -> int:
        return self.p**self.m


@dataclass(frozen=True)
class CoordinateSlice:
    """The codewords whose ``coordinate``-th symbol equals ``value``."""

    parent: CoveringCode
    coordinate: int
    value: int
    members: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.members)


def _check_coordinate(code: CoveringCode, coordinate: int) -> None:
    if not 1 <= coordinate <= code.m:
        raise DimensionError(f"coordinate {coordinate} outside [1, {code.m}]")


def _require_enumerable(p: int, m: int) -> None:
    bound = enumeration_bound()
    if p**m > bound:
        raise CapacityError(f"{p}^{m} words exceed the enumeration bound {bound}")


def distance_table(p: int, m: int, words: Sequence[Sequence[int]]) -> np.ndarray:
    """Distance from every word of F_p^m to the nearest of ``words``.

    Returns an array of shape ``(p,) * m`` whose entry at index ``v`` is
    ``min_c d_H(v, c)``. Hamming distance is a sum of per-coordinate costs, so
    the minimisation separates over coordinates: after seeding zeros at the
    codewords, one pass per axis lets each word either keep its value or take
    the best value on its axis line plus one.
    """
    _require_enumerable(p, m)
    if len(words) == 0:
        raise UndefinedNormError("distance to an empty set of words is undefined")
    table = np.full((p,) * m, m + 1, dtype=np.int16)
    idx = tuple(np.asarray(words, dtype=np.int64).reshape(len(words), m).T)
    table[idx] = 0
    for axis in range(m):
        np.minimum(table, table.min(axis=axis, keepdims=True) + 1, out=table)
    return table


def covering_radius(code: CoveringCode) -> int:
    """Largest distance from any word of F_p^m to the code."""
    if code.radius_cache is None:
        code.radius_cache = int(distance_table(code.p, code.m, code.words).max())
    return code.radius_cache


def norm(code: CoveringCode, coordinate: int) -> int:
    """Max over v of the summed distances from v to every slice at ``coordinate``."""
    _check_coordinate(code, coordinate)
    if coordinate in code.norm_cache:
        return code.norm_cache[coordinate]
    slices = [code.slice(coordinate, z) for z in range(code.p)]
    for s in slices:
        if len(s) == 0:
            raise UndefinedNormError(
                f"slice at coordinate {coordinate} with value {s.value} is empty"
            )
    total = np.zeros((code.p,) * code.m, dtype=np.int32)
    for s in slices:
        total += distance_table(code.p, code.m, s.members)
    value = int(total.max())
    code.norm_cache[coordinate] = value
    return value


def slices_nonempty(code: CoveringCode, coordinate: int) -> bool:
    _check_coordinate(code, coordinate)
    present = {w[coordinate - 1] for w in code.words}
    return len(present) == code.p


def is_acceptable(code: CoveringCode, coordinate: int) -> bool:
    if not slices_nonempty(code, coordinate):
        return False
    return norm(code, coordinate) <= (covering_radius(code) + 1) * code.p - 1


def acceptable_coordinates(code: CoveringCode) -> list[int]:
    return [i for i in range(1, code.m + 1) if is_acceptable(code, i)]


def is_normal(code: CoveringCode) -> bool:
    return any(is_acceptable(code, i) for i in range(1, code.m + 1))


def amalgamated_direct_sum(u: CoveringCode, v: CoveringCode, *, verify: bool = True) -> CoveringCode:
    """Glue ``u`` and ``v`` on the last coordinate of ``u`` and the first of ``v``.

    The result is ``{(a, z, b) : (a, z) in u, (z, b) in v}``. When the ambient
    space is small enough to enumerate and ``verify`` is set, its covering
    radius is measured and must not exceed ``r(u) + r(v)``.
    """
    if u.p != v.p:
        raise AmalgamationError(f"alphabets differ: F_{u.p} vs F_{v.p}")
    for name, code, coord in (("last coordinate of U", u, u.m), ("first coordinate of V", v, 1)):
        if not slices_nonempty(code, coord):
            raise AmalgamationError(f"{name} has an empty slice")
        if not is_acceptable(code, coord):
            raise AmalgamationError(f"{name} is not acceptable")

    by_first: dict[int, list[tuple[int, ...]]] = {}
    for b in v.words:
        by_first.setdefault(b[0], []).append(b[1:])
    glued = [a + tail for a in u.words for tail in by_first.get(a[-1], ())]
    result = CoveringCode(u.p, glued, m=u.m + v.m - 1)

    if verify:
        bound = covering_radius(u) + covering_radius(v)
        try:
            measured = covering_radius(result)
        except CapacityError:
            return result
        if measured > bound:
            raise RadiusBoundViolation(
                f"glued code has covering radius {measured} > {bound} = r1 + r2"
            )
    return result


def span(generator: Sequence[Sequence[int]], p: int) -> CoveringCode:
    """Linear code spanned by the rows of ``generator`` over F_p."""
    gen = np.asarray(generator, dtype=np.int64)
    if gen.ndim != 2 or gen.shape[0] == 0:
        raise DimensionError("generator must be a nonempty 2-D matrix")
    k = gen.shape[0]
    _require_enumerable(p, k)
    messages = np.indices((p,) * k).reshape(k, -1).T
    return CoveringCode(p, (messages @ gen) % p)


# -- text format ---------------------------------------------------------------


def parse_code(text: str) -> CoveringCode:
    """Read the ``p m`` header followed by one codeword per line."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise CodeFormatError("missing 'p m' header")
    header = lines[0].split()
    if len(header) != 2:
        raise CodeFormatError(f"header must be 'p m', got {lines[0]!r}")
    try:
        p, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise CodeFormatError(f"header must be two integers, got {lines[0]!r}") from exc
    if p > 10:
        raise CodeFormatError("the digit format only supports p <= 10")
    words = []
    for line in lines[1:]:
        if len(line) != m or not line.isdigit():
            raise CodeFormatError(f"codeword {line!r} is not {m} digits")
        words.append(tuple(int(ch) for ch in line))
    if not words:
        raise CodeFormatError("code file lists no codewords")
    try:
        return CoveringCode(p, words, m=m)
    except DimensionError as exc:
        raise CodeFormatError(str(exc)) from exc


def format_code(code: CoveringCode) -> str:
    if code.p > 10:
        raise CodeFormatError("the digit format only supports p <= 10")
    body = "\n".join("".join(str(e) for e in w) for w in code.words)
    return f"{code.p} {code.m}\n{body}\n"
