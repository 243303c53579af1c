import hashlib
import json
from pathlib import Path

import pytest
from hypothesis import given, settings

from ercheck.instances import (
    GenParams,
    ParseError,
    dumps,
    gen_random,
    gen_rcpsp,
    load,
    loads,
    parse_psplib,
    save,
    to_dict,
    write_psplib,
)
from ercheck.model import CuspInstance, RcpspInstance, validate_instance
from ercheck.rng import SplitMix64

from helpers import instances

FIXTURES = Path(__file__).parent / "fixtures"


def test_splitmix64_reference_vector():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_randint_range_and_errors():
    rng = SplitMix64(5)
    draws = [rng.randint(3, 7) for _ in range(500)]
    assert set(draws) == {3, 4, 5, 6, 7}
    with pytest.raises(ValueError):
        rng.randint(2, 1)


def test_psplib_fixture_matches_golden():
    rc = load(FIXTURES / "three_jobs.sm")
    assert isinstance(rc, RcpspInstance)
    assert rc.n == 3 and len(rc.precedences) == 2 and rc.capacities == [4]
    golden = json.loads((FIXTURES / "three_jobs.golden.json").read_text())
    assert to_dict(rc) == golden


def test_psplib_cycle_rejected():
    with pytest.raises(ParseError, match="cyclic"):
        load(FIXTURES / "cyclic.sm")


def test_psplib_empty_and_malformed():
    with pytest.raises(ParseError):
        parse_psplib("")
    text = (FIXTURES / "three_jobs.sm").read_text().replace("   2        1          0",
                                                             "   2        1          3")
    with pytest.raises(ParseError) as exc:
        parse_psplib(text)
    assert exc.value.section == "PRECEDENCE RELATIONS" and exc.value.line == 15


def test_psplib_round_trip_of_generated_project():
    rc = gen_rcpsp(30, 4, seed=3)
    back = parse_psplib(write_psplib(rc))
    assert back.precedences == tuple(sorted(rc.precedences))
    assert back.durations == rc.durations
    assert back.capacities == rc.capacities
    assert [[a.h for a in r.activities] for r in back.resources] == \
        [[a.h for a in r.activities] for r in rc.resources]


def test_json_errors():
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        loads('{"capacity": 2}')
    with pytest.raises(ParseError):
        loads('{"activities": [{"s": [0, 1], "p": 1, "h": 1}],'
              ' "resources": [{"capacity": 1, "heights": [1, 2]}]}')


@settings(max_examples=100)
@given(instances(max_n=6))
def test_json_round_trip(inst):
    back = loads(dumps(inst))
    assert back == CuspInstance(inst.activities, inst.capacity, inst.horizon)


def test_json_round_trip_multi_resource(tmp_path):
    rc = gen_rcpsp(10, 3, seed=2)
    path = tmp_path / "p.json"
    save(rc, path)
    assert load(path) == rc


def test_generator_is_deterministic():
    assert gen_random(GenParams(10, seed=1)) == gen_random(GenParams(10, seed=1))
    assert gen_random(GenParams(10, seed=1)) != gen_random(GenParams(10, seed=2))


def _digest(mode):
    h = hashlib.sha256()
    for k in range(1, 101):
        inst = gen_random(GenParams(20, seed=k, windows=mode))
        h.update(repr((inst.capacity, inst.horizon,
                       [(a.s_min, a.s_max, a.p, a.h) for a in inst.activities])).encode())
    return h.hexdigest()


def test_corpus_checksums():
    assert _digest("random") == "e2c8d49214614bbe71234bea86c99b61c55626b747b16b223773d3455d68022a"
    assert _digest("planted") == "dc9556d552896386443fdbfc9205d838e02c2963013ed7ce0b8aee70bcccffbb"


@pytest.mark.parametrize("mode", ["random", "open", "planted"])
def test_generated_corpus_respects_ranges(mode):
    for k in range(1, 101):
        inst = gen_random(GenParams(20, seed=k, windows=mode))
        assert len(inst) == 20
        assert validate_instance(inst) == []
        for a in inst.activities:
            assert 1 <= a.p <= 10 and 1 <= a.h <= 5


def test_gen_params_validation():
    with pytest.raises(ValueError):
        GenParams(0)
    with pytest.raises(ValueError):
        GenParams(5, p_range=(4, 2))
    with pytest.raises(ValueError):
        GenParams(5, windows="wide")


def test_generated_project_shape():
    rc = gen_rcpsp(30, 4, seed=1)
    assert rc.n == 32 and len(rc.resources) == 4
    assert rc.durations[0] == rc.durations[-1] == 0
    for r in rc.resources:
        assert max(a.h for a in r.activities) <= r.capacity
