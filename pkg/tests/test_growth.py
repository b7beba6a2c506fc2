import copy
import csv
import io
import json
import math

import pytest
from hypothesis import given, strategies as st

from diagprod.diagonal import DiagProductSpec, project_Un
from diagprod.growth import (
    CurvePoint,
    GrowthCurve,
    ParamsError,
    admissible_params,
    alt_order,
    check_admissible,
    lef_upper,
    log2_int,
    map_below_rf,
    map_lower,
    rf_upper,
    sr_lower,
    verify_curve,
)
from diagprod.markedgroups import ball
from diagprod.diagonal import DiagMarking

LAMP = DiagProductSpec.lamplighter("7,11,13", "1,3,4")
CLASSICAL = DiagProductSpec.classical("5,7,9")


@pytest.fixture(scope="module")
def lamp_curves():
    mc = map_lower(LAMP, 2, 16)
    lc = lef_upper(LAMP, 4, 3)
    rc = rf_upper(LAMP, 4, 3)
    return mc, lc, rc


def test_map_lower_points(lamp_curves):
    mc, _, _ = lamp_curves
    pts = {p.certificate["level"]: p for p in mc.points}
    assert pts[1].value == 7 - 1 and pts[1].n <= 4 + 4 * 1
    # d(2) = 11 gives MAP(R) >= 10
    assert pts[2].value == 10 and pts[2].n <= 4 + 4 * 3
    assert mc.is_monotone()
    assert verify_curve(mc, LAMP) == []


def test_map_lower_gap_without_witness():
    spec = DiagProductSpec.lamplighter("7,11", "1,1")
    mc = map_lower(spec, 1, 8)
    assert mc.points == [] and mc.gaps and mc.gaps[0]["level"] == 1


def test_lef_examples():
    lc = lef_upper(CLASSICAL, 3, 3)
    assert lc.value_at(0) == 1
    assert lc.value_at(1) == 60
    assert lc.is_monotone()
    assert verify_curve(lc, CLASSICAL) == []
    base = lef_upper(CLASSICAL, 3, 3, source="base")
    assert base.value_at(0) == 1 and base.value_at(1) == 60
    assert verify_curve(base, CLASSICAL) == []


def test_rf_examples(lamp_curves):
    _, lc, rc = lamp_curves
    assert rc.value_at(0) == 1
    assert rc.is_monotone()
    assert verify_curve(rc, LAMP) == []
    for p in lc.points:
        q = rc.value_at(p.n)
        if q is not None:
            assert q >= p.value
    assert rc.value_at(4) == alt_order(7) * alt_order(11)


def test_rf_level_increase_is_forced(lamp_curves):
    # at radius 4 two distinct ball elements agree on level 1
    B = ball(DiagMarking(LAMP), 4)
    level1 = {}
    clash = None
    for x in B.elements:
        k = tuple(p.key for p in project_Un(x, 1))
        if k in level1:
            clash = (level1[k], x)
            break
        level1[k] = x
    assert clash is not None and clash[0] != clash[1]
    _, _, rc = lamp_curves
    assert rc.points[-1].certificate["levels"] == 2


def test_certificate_tampering_is_caught(lamp_curves):
    mc, lc, rc = lamp_curves
    bad = copy.deepcopy(mc)
    bad.points[0].certificate["word"] = "abAB"
    assert verify_curve(bad, LAMP) == [bad.points[0].cert_id]
    bad = copy.deepcopy(rc)
    bad.points[-1].certificate["levels"] = 1
    assert bad.points[-1].cert_id in verify_curve(bad, LAMP)
    bad = copy.deepcopy(lc)
    bad.points[-1].certificate["levels"] = [1]
    assert bad.points[-1].cert_id in verify_curve(bad, LAMP)


def test_map_below_rf(lamp_curves):
    mc, _, rc = lamp_curves
    assert map_below_rf(mc, GrowthCurve("RF_upper", [CurvePoint(n, 10 ** 9, {}, f"x{n}") for n in range(21)])) == []
    assert map_below_rf(mc, GrowthCurve("RF_upper", [CurvePoint(8, 2, {}, "x8")])) == [8]


def _curve(kind, pairs):
    return GrowthCurve(kind, [CurvePoint(n, v, {"kind": "synthetic"}, f"{kind}-{n}") for n, v in pairs])


def test_sr_lower_vacuous():
    mc = _curve("MAP_lower", [(8, 10)])
    lc = _curve("LEF_upper", [(0, 1), (1, 60), (2, 60), (3, 60)])
    sr = sr_lower(mc, lc)
    assert sr.points == [] and sr.gaps


def test_sr_lower_synthetic_steep():
    # MAP(2) >= 1000 while LEF(m) < 1000 for m < 4, LEF(4) >= 1000:
    # LEF(max{SR(2), 2}) >= 1000 forces max{SR(2), 2} >= 4, so SR(2) >= 4
    mc = _curve("MAP_lower", [(2, 1000)])
    lc = _curve("LEF_upper", [(0, 1), (1, 60), (2, 60), (3, 500), (4, 2000)])
    sr = sr_lower(mc, lc)
    assert [(p.n, p.value) for p in sr.points] == [(2, 4)]
    assert sr.points[0].certificate["map_point"] == "MAP_lower-2"
    assert verify_curve(sr, map_curve=mc, lef_curve=lc) == []


def test_sr_lower_running_max():
    mc = _curve("MAP_lower", [(1, 1000), (2, 100)])
    lc = _curve("LEF_upper", [(0, 1), (1, 50), (2, 50), (3, 200), (4, 2000)])
    sr = sr_lower(mc, lc)
    assert [(p.n, p.value) for p in sr.points] == [(1, 4), (2, 4)]
    assert sr.is_monotone()


def test_sr_lower_desk_scale_is_empty(lamp_curves):
    mc, lc, _ = lamp_curves
    assert sr_lower(mc, lc).points == []


def test_csv_and_json(lamp_curves):
    _, _, rc = lamp_curves
    rows = list(csv.reader(io.StringIO(rc.to_csv())))
    assert rows[0] == ["n", "bound", "log2_bound", "certificate_id"]
    for n, bound, lg, cid in rows[1:]:
        assert float(lg) == pytest.approx(math.log2(int(bound)), abs=1e-6)
    data = json.loads(rc.certificates_json())
    assert data["kind"] == "RF_upper" and set(data["certificates"]) == {p.cert_id for p in rc.points}


@given(st.integers(1, 10 ** 400))
def test_log2_int(v):
    assert log2_int(v) == pytest.approx(math.log2(v) if v < 2 ** 1000 else v.bit_length() - 1, abs=1.0)


def brute_admissible(d, r, f):
    from sympy import isprime

    for n in range(1, len(d) + 1):
        dn, rn = d[n - 1], r[n - 1]
        assert isprime(dn) and f(n) <= dn - 1 and n <= rn <= min(18 * n, dn // 3)
        if n > 1:
            assert dn > d[n - 2]
    for l in range(len(d)):
        for m in range(len(d)):
            if l != m:
                assert all((r[l] - s * r[m]) % d[m] != 0 for s in (1, -1, 2, -2))


def test_admissible_params_identity_growth():
    d, r = admissible_params(lambda n: n, 5)
    assert (d, r) == ([5, 17, 47, 61, 79], [1, 5, 15, 20, 25])
    assert check_admissible(d, r, lambda n: n) == []
    brute_admissible(d, r, lambda n: n)


@pytest.mark.parametrize("f", [lambda n: 2 ** n, lambda n: n * n, lambda n: 10])
def test_admissible_params_other_targets(f):
    d, r = admissible_params(f, 4)
    assert check_admissible(d, r, f) == []
    brute_admissible(d, r, f)
    assert all(f(n) <= d[n - 1] - 1 for n in range(1, 5))


def test_violation_injection():
    d, r = admissible_params(lambda n: n, 3)
    r2 = list(r)
    r2[1] = r2[0]
    assert check_admissible(d, r2)
    assert check_admissible([5, 7], [1, 1])


def test_admissible_params_errors():
    with pytest.raises(ValueError):
        admissible_params([3, 2, 1], 3)
    with pytest.raises(ParamsError):
        admissible_params(lambda n: n, 4, max_prime_steps=1)
