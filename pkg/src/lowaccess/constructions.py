"""Ternary code catalog, sign reduction, and feasible (redundancy, access) pairs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import CatalogError, DimensionError
from .gf_codes import CoveringCode, amalgamated_direct_sum, covering_radius, span

HAMMING_3_GENERATOR = ((0, 1, 1, 1), (1, 0, 1, 2))
EXPANDED_HAMMING_GENERATOR = ((0, 1, 1, 1, 0), (1, 0, 1, 2, 0), (0, 0, 0, 0, 1))

# names that take the integer parameter i
PARAMETRIC = ("entire_space", "repetition", "amalgam")
CATALOG_NAMES = ("entire_space", "repetition", "hamming_3", "expanded_hamming", "amalgam")


def entire_space(i: int, p: int = 3) -> CoveringCode:
    _check_i(i)
    code = span([[1 if r == c else 0 for c in range(i)] for r in range(i)], p)
    code.radius_cache = 0
    return code


def repetition(i: int, p: int = 3) -> CoveringCode:
    """span{1...1} in F_p^i.

    The radius and norms have closed forms, so they are cached up front and
    long repetition codes never need enumeration: a word's distance to z^i is
    i minus the number of z's it contains, which gives radius i - ceil(i/p)
    and a norm of (p - 1) * i at every coordinate.
    """
    _check_i(i)
    code = CoveringCode(p, [(z,) * i for z in range(p)])
    code.radius_cache = i - (-(-i // p))
    code.norm_cache = {j: (p - 1) * i for j in range(1, i + 1)}
    return code


def hamming_3() -> CoveringCode:
    return span(HAMMING_3_GENERATOR, 3)


def expanded_hamming() -> CoveringCode:
    return span(EXPANDED_HAMMING_GENERATOR, 3)


def amalgam(i: int) -> CoveringCode:
    """Expanded Hamming code glued to the length-i repetition code."""
    _check_i(i)
    return amalgamated_direct_sum(expanded_hamming(), repetition(i))


def _check_i(i: int) -> None:
    if not isinstance(i, int) or i < 1:
        raise CatalogError(f"parameter i must be a positive integer, got {i!r}")


def catalog(name: str, i: int | None = None) -> CoveringCode:
    """Build a catalog code by its stable CLI name."""
    if name not in CATALOG_NAMES:
        raise CatalogError(f"unknown catalog code {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    if name in PARAMETRIC:
        if i is None:
            raise CatalogError(f"catalog code {name!r} needs a parameter i")
        return {"entire_space": entire_space, "repetition": repetition, "amalgam": amalgam}[name](i)
    if i is not None:
        raise CatalogError(f"catalog code {name!r} takes no parameter")
    return hamming_3() if name == "hamming_3" else expanded_hamming()


def catalog_label(name: str, i: int | None = None) -> str:
    return f"{name}({i})" if name in PARAMETRIC else name


# -- reduction -----------------------------------------------------------------


def _negate(word: tuple[int, ...], p: int) -> tuple[int, ...]:
    return tuple((-e) % p for e in word)


def _weight(word: tuple[int, ...]) -> int:
    return sum(1 for e in word if e)


def is_positive_representative(word: tuple[int, ...], p: int) -> bool:
    """First nonzero residue lies in 1..(p-1)/2."""
    for e in word:
        if e:
            return e <= (p - 1) // 2
    return True


@dataclass(frozen=True)
class Route:
    """How a codeword is reached: via ``sign * kept[index]``, or systematically."""

    index: int | None
    sign: int = 1

    @property
    def low_weight(self) -> bool:
        return self.index is None


@dataclass(frozen=True)
class ReducedCode:
    """The stored subset of a code after dropping low-weight words and one of each +-pair."""

    parent: CoveringCode
    kept: tuple[tuple[int, ...], ...]
    routes: dict[tuple[int, ...], Route]

    @property
    def p(self) -> int:
        return self.parent.p

    @property
    def m(self) -> int:
        return self.parent.m

    @property
    def low_weight(self) -> tuple[tuple[int, ...], ...]:
        return tuple(w for w in self.parent.words if self.routes[w].low_weight)

    def __len__(self) -> int:
        return len(self.kept)


def reduce_code(code: CoveringCode) -> ReducedCode:
    """Drop codewords of weight <= 1, then keep one of each {c, -c}.

    The kept member of a pair is the one whose first nonzero residue is in
    1..(p-1)/2. For a nonlinear code where -c is absent, c itself is kept.
    """
    p = code.p
    if p == 2:
        raise DimensionError("sign reduction needs an odd prime; use the complement scheme for p = 2")
    kept = []
    for w in code.words:
        if _weight(w) <= 1:
            continue
        neg = _negate(w, p)
        if is_positive_representative(w, p) or neg not in code:
            kept.append(w)
    kept_t = tuple(kept)  # code.words is sorted, so kept is too
    position = {w: j for j, w in enumerate(kept_t)}
    routes: dict[tuple[int, ...], Route] = {}
    for w in code.words:
        if _weight(w) <= 1:
            routes[w] = Route(None)
        elif w in position:
            routes[w] = Route(position[w], 1)
        else:
            routes[w] = Route(position[_negate(w, p)], -1)
    return ReducedCode(code, kept_t, routes)


# -- feasible pairs ------------------------------------------------------------


@dataclass(frozen=True)
class FeasiblePair:
    alpha: Fraction
    beta: Fraction
    source: str

    def __post_init__(self) -> None:
        if self.alpha < 1 or not 0 < self.beta <= 1:
            raise ValueError(f"infeasible pair ({self.alpha}, {self.beta})")

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return self.alpha, self.beta


Scheme = Literal["generic", "reduced"]


def feasible_pair(code: CoveringCode, scheme: Scheme = "reduced", name: str | None = None) -> FeasiblePair:
    """Redundancy and access ratios achieved by storing ``code`` (or its reduction).

    ``generic`` stores every codeword, ``reduced`` stores only the sign-reduced set.
    """
    r = covering_radius(code)
    m = code.m
    if scheme == "generic":
        stored, theorem = len(code), "Thm1"
    elif scheme == "reduced":
        stored, theorem = len(reduce_code(code)), "Thm2/Cor1"
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    label = name or repr(code)
    beta = Fraction(r + 1, m)
    # beta <= 1: reading every systematic node already costs m per batch
    return FeasiblePair(Fraction(m + stored, m), min(beta, Fraction(1)), f"{label} via {theorem}")
