from fractions import Fraction as F

import pytest

from conftest import make
from lmcsi.core import (ColoredInterval, DuplicateSameColorPosition, EmptyInput, KNotTwo,
                        MalformedInput, MissingColor, NonPositiveLength, Realization,
                        as_rational, format_rational, instance_to_json, load_instance,
                        mcsi_length, result_to_json, separation_ok, split_by_gaps, validate)


def test_validate_flags_for_separated_pair():
    inst = make((0, 0), (2, 1))
    assert inst.is_pairwise_disjoint and inst.is_semi_disjoint and not inst.has_overlap


def test_validate_rejects_same_color_at_same_position():
    with pytest.raises(DuplicateSameColorPosition):
        make((0, 0), (0, 0), k=1)


def test_validate_sorts_and_translates():
    inst = make(("1/2", 0), (0, 1))
    assert inst.lefts == (0, F(1, 2))
    assert inst.colors == (1, 0)
    inst = make((3, 0), ("7/2", 1))
    assert inst.lefts == (0, F(1, 2)) and inst.offset == 3


def test_validate_errors():
    with pytest.raises(EmptyInput):
        validate([], 2)
    with pytest.raises(NonPositiveLength):
        validate([ColoredInterval(F(0), F(0), 0)], 1)
    with pytest.raises(MissingColor):
        make((0, 0), (1, 0), k=2)


def test_equal_lefts_keep_input_order():
    assert make((0, 1), (0, 0)).colors == (1, 0)
    assert make((0, 0), (0, 1)).colors == (0, 1)


def test_semi_disjoint_flag():
    inst = make((0, 0), ("1/2", 0), (3, 1))
    assert inst.is_semi_disjoint and not inst.is_pairwise_disjoint
    assert make((0, 0), ("1/2", 1)).has_overlap


def test_rational_parsing_and_formatting():
    assert as_rational("3/4") == F(3, 4)
    assert as_rational("0.25") == F(1, 4)
    assert as_rational(2) == 2
    for bad in (0.5, "x", True, "1/0"):
        with pytest.raises(MalformedInput):
            as_rational(bad)
    assert format_rational(F(6, 3)) == "2"
    assert format_rational(F(-3, 6)) == "-1/2"


def test_mcsi_length_examples():
    assert mcsi_length(make((0, 0), (1, 1)), Realization([0, 2])) == 2
    assert mcsi_length(make((0, 0), (0, 1)), Realization([0, 0])) == 0
    inst = make((0, 0), (1, 1), (3, 2), (4, 0), k=3)
    assert mcsi_length(inst, Realization([0, 1, 3, 4])) == 3
    assert mcsi_length(make((0, 0), (3, 0), k=1), Realization([0, 3])) == 0


def test_separation_examples():
    inst = make((0, 0), (1, 1))
    assert separation_ok(inst, Realization([0, 1]), 1)
    assert not separation_ok(inst, Realization([0, 1]), F(101, 100))
    inst = make((0, 0), (3, 1), (5, 0))
    assert separation_ok(inst, Realization([0, 3, 5]), 2)
    with pytest.raises(KNotTwo):
        separation_ok(make((0, 0), (1, 1), (2, 2), k=3), Realization([0, 1, 2]), 1)


def test_separation_matches_mcsi_for_two_colors():
    inst = make((0, 0), ("1/2", 1), (1, 0))
    for reps in ([0, F(3, 2), 2], [0, F(1, 2), 1], [F(1, 2), 1, F(3, 2)]):
        r = Realization(reps)
        for q in (F(1, 4), F(1, 2), 1, F(3, 2)):
            assert separation_ok(inst, r, q) == (mcsi_length(inst, r) >= q)


def test_split_by_gaps_examples():
    assert [len(p) for p in split_by_gaps(make((0, 0), (5, 1)), 1)] == [1, 1]
    assert [len(p) for p in split_by_gaps(make((0, 0), ("3/2", 1)), 1)] == [2]
    parts = split_by_gaps(make((0, 0), ("1/2", 1), (4, 0), ("9/2", 1)), 2)
    assert [len(p) for p in parts] == [2, 2]
    assert parts[1].source == (2, 3)


def test_split_reassembly_keeps_separation():
    inst = make((0, 0), ("1/2", 1), (4, 0), ("9/2", 1))
    q = F(1, 2)
    reps = []
    for part in split_by_gaps(inst, q):
        reps += [part.offset + x for x in (0, F(1, 2))]
    assert separation_ok(inst, Realization(reps), q)


def test_json_round_trip(tmp_path):
    data = {"k": 2, "intervals": [{"x": "5/2", "color": 1}, {"x": "1", "color": 0, "len": "2"}]}
    inst = load_instance(data)
    assert inst.lefts == (0, F(3, 2)) and inst.offset == 1
    assert instance_to_json(inst) == {"k": 2, "intervals": [
        {"x": "5/2", "color": 1}, {"x": "1", "color": 0, "len": "2"}]}
    out = result_to_json(inst, F(1), [0, F(3, 2)], "Disjoint")
    assert out == {"q_star": "1", "reps": ["5/2", "1"], "method": "Disjoint"}
    path = tmp_path / "i.json"
    path.write_text('{"k": 1, "intervals": [{"x": "0", "color": 0}]}')
    assert len(load_instance(str(path))) == 1


@pytest.mark.parametrize("text", ['{"k": 2}', "{oops", '{"k": "2", "intervals": []}',
                                  '{"intervals": [{"x": 0.5, "color": 0}]}'])
def test_malformed_json(text):
    with pytest.raises(MalformedInput):
        load_instance(text)
