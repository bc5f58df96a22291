import pytest

from relcomp.instances import (
    InstanceFormatError,
    SplitMix64,
    format_instance,
    parse_instance,
    random_bivariate_instance,
    random_instance,
    random_point_set,
    read_instance,
    write_instance,
)

P = 998244353


def test_splitmix_reference_value():
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


def test_below_stays_in_range():
    rng = SplitMix64(7)
    values = [rng.below(10) for _ in range(200)]
    assert min(values) >= 0 and max(values) < 10
    assert len(set(values)) == 10
    with pytest.raises(ValueError):
        rng.below(0)


def test_random_instance_is_deterministic():
    first = random_instance(P, 12, 42)
    second = random_instance(P, 12, 42)
    assert first == second
    assert first.n == 12
    assert first.f[-1] == 1 and first.f[0] != 0
    assert len(first.a) == len(first.g) == 12
    assert random_instance(P, 12, 43).a != first.a


def test_bivariate_instance_shape():
    inst = random_bivariate_instance(P, 10, 3, 7, 5)
    G = inst.bivariate()
    assert (G.xbound, G.ybound) == (3, 7)
    assert inst.params == {"n": 10, "m": 3, "d": 7}


def test_point_set_distinct_abscissae():
    inst = random_point_set(101, 50, 2, 4, 9)
    xs = [x for x, _ in inst.points]
    assert len(set(xs)) == 50
    with pytest.raises(ValueError):
        random_point_set(7, 8, 1, 1, 0)


def test_parse_skips_comments_and_reduces():
    text = "# demo\np=7\n\nf=1,0,1\na=0,8\ng=\n"
    inst = parse_instance(text)
    assert inst.p == 7
    assert inst.f == [1, 0, 1]
    assert inst.a == [0, 1]
    assert inst.g == []


@pytest.mark.parametrize(
    "text",
    [
        "p=7\nf=1,0,1\n",
        "p=7\nf=1,0,1\na=1\nq=3\n",
        "p=7\np=7\nf=1,0,1\na=1\n",
        "p=15\nf=1,0,1\na=1\n",
        "p=7\nf=1,x\na=1\n",
        "p=7\nf=3,0\na=1\n",
        "p=7\nf 1,0,1\na=1\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(InstanceFormatError):
        parse_instance(text)


def test_write_then_read(tmp_path):
    inst = random_instance(P, 6, 1)
    path = tmp_path / "inst.txt"
    write_instance(inst, str(path))
    assert path.read_text(encoding="utf-8") == format_instance(inst)
    back = read_instance(str(path))
    assert (back.p, back.f, back.a, back.g) == (inst.p, inst.f, inst.a, inst.g)
