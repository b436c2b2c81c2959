import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from lowaccess.constructions import entire_space, expanded_hamming, hamming_3, repetition
from lowaccess.errors import (
    AmalgamationError,
    CapacityError,
    CodeFormatError,
    DimensionError,
    UndefinedNormError,
)
from lowaccess.gf_codes import (
    CoveringCode,
    FpVector,
    acceptable_coordinates,
    amalgamated_direct_sum,
    covering_radius,
    format_code,
    hamming_distance,
    is_acceptable,
    is_normal,
    norm,
    parse_code,
)


@st.composite
def small_codes(draw, primes=(2, 3, 5), max_m=4):
    p = draw(st.sampled_from(primes))
    m = draw(st.integers(1, max_m if p < 5 else 3))
    words = draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * m), min_size=1, max_size=12))
    return CoveringCode(p, words)


def test_hamming_distance_examples():
    v = lambda s: FpVector.from_string(3, s)  # noqa: E731
    assert hamming_distance(v("000"), v("000")) == 0
    assert hamming_distance(v("1012"), v("0111")) == 3
    for word in ("0120", "2222", "1011"):
        shifted = FpVector(3, tuple((e + 1) % 3 for e in v(word).entries))
        assert hamming_distance(v(word), shifted) == len(word)


def test_hamming_distance_rejects_mismatch():
    with pytest.raises(DimensionError):
        hamming_distance(FpVector(3, (0, 1)), FpVector(3, (0, 1, 2)))
    with pytest.raises(DimensionError):
        hamming_distance(FpVector(3, (0, 1)), FpVector(5, (0, 1)))


def test_vector_invariants():
    with pytest.raises(DimensionError):
        FpVector(3, (0, 3))
    with pytest.raises(DimensionError):
        FpVector(4, (0, 1))
    v = FpVector(5, (0, 1, 4, 2))
    assert -(-v) == v
    assert (-v).entries == (0, 4, 1, 3)
    assert (v + (-v)).weight == 0


def test_code_invariants():
    with pytest.raises(DimensionError):
        CoveringCode(3, [])
    with pytest.raises(DimensionError):
        CoveringCode(3, [(0, 1), (0, 1, 2)])
    code = CoveringCode(3, [(2, 1), (0, 1), (2, 1)])
    assert code.words == ((0, 1), (2, 1))


def test_covering_radius_examples():
    assert covering_radius(CoveringCode(3, itertools.product(range(3), repeat=2))) == 0
    assert covering_radius(hamming_3()) == 1
    assert covering_radius(repetition(5)) == 3


@given(small_codes())
@settings(max_examples=150, deadline=None)
def test_covering_radius_matches_two_loop_oracle(code):
    assert covering_radius(code) == oracles.radius(code.p, code.m, code.words)


@given(small_codes(), st.data())
@settings(max_examples=100, deadline=None)
def test_adding_a_codeword_never_increases_radius(code, data):
    extra = data.draw(st.tuples(*[st.integers(0, code.p - 1)] * code.m))
    bigger = CoveringCode(code.p, code.words + (extra,))
    assert covering_radius(bigger) <= covering_radius(code)


@given(small_codes())
@settings(max_examples=100, deadline=None)
def test_radius_zero_iff_entire_space(code):
    assert (covering_radius(code) == 0) == (len(code) == code.p**code.m)


@given(small_codes(primes=(2, 3)), st.data())
@settings(max_examples=100, deadline=None)
def test_norm_matches_oracle_and_bounds_radius(code, data):
    i = data.draw(st.integers(1, code.m))
    assume(len({w[i - 1] for w in code.words}) == code.p)
    n = norm(code, i)
    assert n == oracles.norm(code.p, code.m, code.words, i)
    assert n >= covering_radius(code)


def test_norm_examples():
    assert norm(entire_space(2), 1) == 2
    assert norm(entire_space(2), 2) == 2
    # brute force over all 81 words
    assert [norm(hamming_3(), i) for i in range(1, 5)] == [6, 6, 6, 6]
    assert norm(expanded_hamming(), 5) <= 5


def test_norm_of_empty_slice_is_an_error():
    code = CoveringCode(3, [(0, 0), (1, 1)])
    with pytest.raises(UndefinedNormError):
        norm(code, 1)
    assert not is_acceptable(code, 1)


def test_normality():
    assert not is_normal(hamming_3())
    eh = expanded_hamming()
    assert is_normal(eh)
    assert 5 in acceptable_coordinates(eh)
    for i in range(1, 8):
        code = repetition(i)
        assert acceptable_coordinates(code) == list(range(1, i + 1))


def test_repetition_closed_forms_match_enumeration():
    for i in range(1, 9):
        fresh = CoveringCode(3, repetition(i).words)
        assert covering_radius(fresh) == repetition(i).radius_cache == (2 * i) // 3
        assert norm(fresh, 1) == repetition(i).norm_cache[1]
    for p in (2, 5):
        for i in range(1, 6):
            fresh = CoveringCode(p, repetition(i, p).words)
            assert covering_radius(fresh) == repetition(i, p).radius_cache


def test_ads_of_repetitions_is_a_repetition():
    glued = amalgamated_direct_sum(repetition(2), repetition(2))
    assert glued == CoveringCode(3, repetition(3).words)


def test_ads_expanded_hamming_with_repetition():
    for i in range(1, 6):
        glued = amalgamated_direct_sum(expanded_hamming(), repetition(i))
        assert glued.m == i + 4
        assert len(glued) == 27
        assert covering_radius(glued) <= 1 + (2 * i) // 3


def test_ads_rejects_non_normal_input():
    with pytest.raises(AmalgamationError):
        amalgamated_direct_sum(hamming_3(), repetition(2))


def _random_codes(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = rng.choice((2, 3))
        m = rng.randint(1, 3)
        space = list(itertools.product(range(p), repeat=m))
        out.append(CoveringCode(p, rng.sample(space, rng.randint(1, len(space)))))
    return out


def test_ads_properties_on_random_instances():
    codes = _random_codes(7, 120)
    checked = 0
    for u, v in itertools.product(codes[:40], codes[40:]):
        if u.p != v.p:
            continue
        try:
            ok = is_acceptable(u, u.m) and is_acceptable(v, 1)
        except UndefinedNormError:
            ok = False
        if not ok:
            continue
        glued = amalgamated_direct_sum(u, v)
        expected_size = sum(
            len(u.slice(u.m, z)) * len(v.slice(1, z)) for z in range(u.p)
        )
        assert glued.m == u.m + v.m - 1
        assert len(glued) == expected_size
        assert covering_radius(glued) <= covering_radius(u) + covering_radius(v)
        checked += 1
    assert checked > 50


def test_capacity_bound(monkeypatch):
    monkeypatch.setenv("LOWACCESS_ENUM_BOUND", "80")
    with pytest.raises(CapacityError):
        covering_radius(CoveringCode(3, [(0, 0, 0, 0)]))
    monkeypatch.setenv("LOWACCESS_ENUM_BOUND", "81")
    assert covering_radius(CoveringCode(3, [(0, 0, 0, 0)])) == 4


def test_code_file_round_trip():
    text = "# the ternary Hamming code\n3 4\n0111\n1012 # trailing comment\n\n" + "\n".join(
        "".join(map(str, w)) for w in hamming_3().words[::-1]
    )
    code = parse_code(text)
    assert code == hamming_3()
    canonical = format_code(code)
    assert format_code(parse_code(canonical)) == canonical
    assert canonical.splitlines()[0] == "3 4"


@pytest.mark.parametrize("bad", ["", "3\n012", "3 3\n01", "3 3\n013", "3 3\n", "x y\n000"])
def test_code_file_errors(bad):
    with pytest.raises(CodeFormatError):
        parse_code(bad)
