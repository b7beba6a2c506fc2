"""Certified growth bounds for diagonal products.

Every curve point is a bound, never an exact value, and carries a
certificate that ``verify_curve`` re-checks without reusing the code path
that produced it. Orders of alternating groups are exact integers; CSV
output also lists log2 of the bound.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .diagonal import DiagMarking, DiagProductSpec, find_wn, from_word, project_Un, verify_witness
from .markedgroups import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    MarkedGroup,
    ball,
    classical_marking,
    evaluate_word,
    inverse_label,
    local_embedding_radius,
    neumann_marking,
)
from .permutations import Perm, neumann_generators
from .sequences import is_prime, next_prime

KINDS = ("RF_upper", "LEF_upper", "MAP_lower", "SR_lower")


def alt_order(d: int) -> int:
    return math.factorial(d) // 2


def log2_int(v: int) -> float:
    if v <= 0:
        raise ValueError("log2 of a non-positive bound")
    if v < 2**1000:
        return math.log2(v)
    shift = v.bit_length() - 64
    return math.log2(v >> shift) + shift


@dataclass
class CurvePoint:
    n: int
    value: int
    certificate: dict
    cert_id: str

    @property
    def log2(self) -> float:
        return log2_int(self.value)


@dataclass
class GrowthCurve:
    kind: str
    points: list[CurvePoint] = field(default_factory=list)
    gaps: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")

    def value_at(self, n: int) -> Optional[int]:
        for p in self.points:
            if p.n == n:
                return p.value
        return None

    def is_monotone(self) -> bool:
        pts = sorted(self.points, key=lambda p: p.n)
        return all(a.value <= b.value for a, b in zip(pts, pts[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "bound", "log2_bound", "certificate_id"])
        for p in self.points:
            w.writerow([p.n, p.value, f"{p.log2:.6f}", p.cert_id])
        return buf.getvalue()

    def certificates_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "certificates": {p.cert_id: p.certificate for p in self.points}, "gaps": self.gaps},
            indent=1,
            sort_keys=True,
        )


# -- level markings --


def level_marking(spec: DiagProductSpec, m: int) -> MarkedGroup:
    if spec.base == "classical":
        return classical_marking(spec.d, m)
    return neumann_marking(spec.d, spec.r, m)


def level_order_product(spec: DiagProductSpec, m: int) -> int:
    out = 1
    for i in range(1, m + 1):
        out *= alt_order(spec.d(i))
    return out


# -- curves --


def map_lower(spec: DiagProductSpec, n_levels: int, radius_budget: int, budget: int = DEFAULT_BUDGET) -> GrowthCurve:
    """MAP(R) >= d(n) - 1 whenever a level-n witness of length R exists.

    A unitary representation injective on B(R) cannot kill the witness, so
    it is nontrivial on the simple factor Alt(d(n)) and has dimension at
    least d(n) - 1. Points are emitted in R order as a running maximum.
    """
    found = []
    curve = GrowthCurve("MAP_lower")
    for n in range(1, n_levels + 1):
        if not spec.has_level(n):
            break
        try:
            res = find_wn(spec, n, radius_budget, budget)
        except BudgetExceeded as exc:
            curve.gaps.append({"level": n, "reason": str(exc)})
            continue
        if not res.found:
            curve.gaps.append({"level": n, "reason": f"no witness of length <= {radius_budget}"})
            continue
        found.append((len(res.word), spec.d(n) - 1, n, res.word))
    best = None
    for R, v, n, w in sorted(found):
        if best is None or v > best[1]:
            best = (R, v, n, w)
        R0, v0, n0, w0 = best
        cert = {"kind": "witness", "level": n0, "word": w0, "radius": R, "spec": spec.describe()}
        if curve.points and curve.points[-1].n == R:
            curve.points[-1] = CurvePoint(R, v0, cert, f"map-R{R}")
        else:
            curve.points.append(CurvePoint(R, v0, cert, f"map-R{R}"))
    return curve


def lef_upper(
    spec: DiagProductSpec, n_max: int, level_horizon: int, budget: int = DEFAULT_BUDGET, source: str = "diagonal"
) -> GrowthCurve:
    """Smallest group in the canonical quotient family that locally embeds the radius-n ball.

    With ``source="diagonal"`` the ball is the diagonal product's own and
    the family is {Alt(d(m))} together with the products over levels 1..m;
    projections are homomorphisms, so a local embedding is an injective
    projection. With ``source="base"`` the ball is the base group's and the
    family is the marked Alt(d(m)), compared by relation pattern.
    """
    if source not in ("diagonal", "base"):
        raise ValueError(f"unknown source {source!r}")
    curve = GrowthCurve("LEF_upper")
    levels = [m for m in range(1, level_horizon + 1) if spec.has_level(m)]
    if source == "base":
        base = spec.base_marking()
        radii = {m: local_embedding_radius(base, level_marking(spec, m), n_max, budget) for m in levels}
    else:
        family = [((m,), alt_order(spec.d(m))) for m in levels]
        family += [(tuple(range(1, m + 1)), level_order_product(spec, m)) for m in levels if m > 1]
        family.sort(key=lambda c: (c[1], c[0]))
        marking = DiagMarking(spec)
    for n in range(0, n_max + 1):
        if n == 0:
            curve.points.append(CurvePoint(0, 1, {"kind": "trivial"}, "lef-n0"))
            continue
        if source == "base":
            m = next((m for m in levels if radii[m] >= n), None)
            chosen = None if m is None else ((m,), alt_order(spec.d(m)))
        else:
            B = ball(marking, n, budget)
            chosen = None
            for lv, order in family:
                proj = {tuple(x.coord(i).key for i in lv) for x in B.elements}
                if len(proj) == len(B):
                    chosen = (lv, order)
                    break
        if chosen is None:
            curve.gaps.append({"n": n, "reason": f"no group in the family up to level {level_horizon} embeds the radius-{n} ball"})
            continue
        lv, order = chosen
        cert = {"kind": "embedding", "source": source, "levels": list(lv), "radius": n, "spec": spec.describe()}
        curve.points.append(CurvePoint(n, order, cert, f"lef-n{n}"))
    return curve


def rf_upper(spec: DiagProductSpec, n_max: int, level_horizon: int, budget: int = DEFAULT_BUDGET) -> GrowthCurve:
    """Least m such that projecting to levels 1..m is injective on the radius-n ball."""
    curve = GrowthCurve("RF_upper")
    marking = DiagMarking(spec)
    for n in range(0, n_max + 1):
        B = ball(marking, n, budget)
        chosen = None
        for m in range(0, level_horizon + 1):
            if m > 0 and not spec.has_level(m):
                break
            proj = {tuple(p.key for p in project_Un(x, m)) for x in B.elements}
            if len(proj) == len(B):
                chosen = m
                break
        if chosen is None:
            curve.gaps.append({"n": n, "reason": f"projection to levels <= {level_horizon} not injective"})
            continue
        cert = {"kind": "quotient", "levels": chosen, "radius": n, "ball_size": len(B), "spec": spec.describe()}
        curve.points.append(CurvePoint(n, level_order_product(spec, chosen), cert, f"rf-n{n}"))
    return curve


def sr_lower(map_curve: GrowthCurve, lef_curve: GrowthCurve) -> GrowthCurve:
    """Stability-radius lower bounds from MAP(n) <= LEF(max{SR(n), n}).

    Let MAP(n) >= v and suppose the computed upper bounds give LEF(m) < v
    for every m < M. Then LEF(max{SR(n), n}) >= v forces
    max{SR(n), n} >= M, and when M > n this reads SR(n) >= M. M is taken as
    the first m with LEF_upper(m) >= v, or one past the last contiguous LEF
    point when none reaches v.
    """
    if map_curve.kind != "MAP_lower" or lef_curve.kind != "LEF_upper":
        raise ValueError("need a MAP_lower and a LEF_upper curve")
    lef = {p.n: p for p in lef_curve.points}
    curve = GrowthCurve("SR_lower")
    for p in sorted(map_curve.points, key=lambda q: q.n):
        M = 0
        while M in lef and lef[M].value < p.value:
            M += 1
        if M <= p.n:
            curve.gaps.append({"n": p.n, "reason": "LEF bound reaches the MAP value too early"})
            continue
        cert = {
            "kind": "inequality",
            "map_point": p.cert_id,
            "map_value": p.value,
            "lef_points": [lef[m].cert_id for m in range(M) if m in lef],
            "bound": M,
            "stops_at": "lef_reaches_map_value" if M in lef else "end_of_lef_curve",
        }
        curve.points.append(CurvePoint(p.n, M, cert, f"sr-n{p.n}"))
    _enforce_running_max(curve)
    return curve


def _enforce_running_max(curve: GrowthCurve) -> None:
    best = None
    for i, p in enumerate(curve.points):
        if best is not None and p.value < best.value:
            curve.points[i] = CurvePoint(p.n, best.value, dict(best.certificate, inherited_from=best.cert_id), p.cert_id)
        else:
            best = p


# -- independent verification --


def _reduced_words(labels: Sequence[str], n: int):
    yield ""
    frontier = [""]
    for _ in range(n):
        nxt = []
        for w in frontier:
            for c in labels:
                if w and inverse_label(c) == w[-1]:
                    continue
                nxt.append(w + c)
        yield from nxt
        frontier = nxt


def _level_images(spec: DiagProductSpec, m: int) -> dict[str, Perm]:
    a, b = neumann_generators(spec.d, spec.r, m)
    lo = "st" if spec.base == "classical" else "ab"
    return {lo[0]: a, lo[0].upper(): a.inverse(), lo[1]: b, lo[1].upper(): b.inverse()}


def _perm_word(images: dict[str, Perm], w: str, degree: int) -> Perm:
    g = Perm.identity(degree)
    for c in w:
        g = g * images[c]
    return g


def check_witness_point(spec: DiagProductSpec, p: CurvePoint) -> bool:
    c = p.certificate
    w = c["word"]
    return len(w) <= p.n and p.value <= spec.d(c["level"]) - 1 and verify_witness(spec, c["level"], w, p.n)


def _projection_injective(spec: DiagProductSpec, levels: Sequence[int], n: int) -> bool:
    """Over all reduced words of length <= n, equal images at ``levels`` force equal elements."""
    imgs = {i: _level_images(spec, i) for i in levels}
    seen: dict = {}
    for w in _reduced_words(spec.labels, n):
        key = from_word(spec, w).key
        proj = tuple(_perm_word(imgs[i], w, spec.d(i)).key for i in levels)
        if seen.setdefault(proj, key) != key:
            return False
    return True


def check_embedding_point(spec: DiagProductSpec, p: CurvePoint) -> bool:
    c = p.certificate
    if c["kind"] == "trivial":
        return p.n == 0 and p.value == 1
    levels, n = c["levels"], c["radius"]
    order = 1
    for i in levels:
        order *= alt_order(spec.d(i))
    if p.value < order or n < p.n:
        return False
    if c["source"] == "diagonal":
        return _projection_injective(spec, levels, n)
    # base ball: words of length <= n coincide in the base iff they coincide in Alt(d(m))
    (m,) = levels
    base = spec.base_marking()
    imgs = _level_images(spec, m)
    sb, st = {}, {}
    for w in _reduced_words(base.labels, n):
        kb = base.key(evaluate_word(base, w))
        kt = _perm_word(imgs, w, spec.d(m)).key
        if sb.setdefault(kb, kt) != kt or st.setdefault(kt, kb) != kb:
            return False
    return True


def check_quotient_point(spec: DiagProductSpec, p: CurvePoint) -> bool:
    c = p.certificate
    m, n = c["levels"], c["radius"]
    if p.value < level_order_product(spec, m):
        return False
    return _projection_injective(spec, range(1, m + 1), n)


def check_inequality_point(p: CurvePoint, map_curve: GrowthCurve, lef_curve: GrowthCurve) -> bool:
    c = p.certificate
    mp = {q.cert_id: q for q in map_curve.points}.get(c["map_point"])
    if mp is None or mp.value != c["map_value"]:
        return False
    lef = {q.n: q.value for q in lef_curve.points}
    M = c["bound"]
    if not all(m in lef and lef[m] < mp.value for m in range(M)):
        return False
    return M > mp.n and p.value <= M


def verify_curve(curve: GrowthCurve, spec: Optional[DiagProductSpec] = None, map_curve=None, lef_curve=None) -> list[str]:
    """Certificate ids that fail re-verification (empty list means all good)."""
    bad = []
    for p in curve.points:
        if "inherited_from" in p.certificate:
            src = next((q for q in curve.points if q.cert_id == p.certificate["inherited_from"]), None)
            ok = src is not None and src.n <= p.n and src.value == p.value
            if ok and curve.kind == "SR_lower":
                ok = check_inequality_point(src, map_curve, lef_curve)
            elif ok:
                ok = _check_one(curve.kind, spec, src, map_curve, lef_curve)
        else:
            ok = _check_one(curve.kind, spec, p, map_curve, lef_curve)
        if not ok:
            bad.append(p.cert_id)
    if not curve.is_monotone():
        bad.append("monotonicity")
    return bad


def _check_one(kind, spec, p, map_curve, lef_curve) -> bool:
    ck = p.certificate.get("kind")
    if kind == "MAP_lower" and ck == "witness":
        return check_witness_point(spec, p)
    if kind == "LEF_upper" and ck in ("embedding", "trivial"):
        return check_embedding_point(spec, p)
    if kind == "RF_upper" and ck == "quotient":
        return check_quotient_point(spec, p)
    if kind == "SR_lower" and ck == "inequality":
        return check_inequality_point(p, map_curve, lef_curve)
    return False


def map_below_rf(map_curve: GrowthCurve, rf_curve: GrowthCurve) -> list[int]:
    """Radii where MAP_lower exceeds RF_upper (should be empty)."""
    bad = []
    for p in map_curve.points:
        v = rf_curve.value_at(p.n)
        if v is not None and p.value > v:
            bad.append(p.n)
    return bad


# -- admissible parameters --


class ParamsError(RuntimeError):
    pass


def _forbidden(r_other: int, r: int, d: int) -> bool:
    return r_other % d in {r % d, (-r) % d, (2 * r) % d, (-2 * r) % d}


def admissible_params(f, horizon: int, max_prime_steps: int = 10_000) -> tuple[list[int], list[int]]:
    """Greedy (d, r) meeting n <= r(n) <= min(18n, d(n)/3), f(n) <= d(n) - 1 and the residue condition.

    d(n) is the least prime above d(n-1) with d(n) >= max(5, f(n) + 1, 3n)
    for which some r passes; r(n) is the least such r.
    """
    fv = _target(f, horizon)
    if any(a > b for a, b in zip(fv, fv[1:])):
        raise ValueError("target growth must be non-decreasing")
    ds: list[int] = []
    rs: list[int] = []
    for n in range(1, horizon + 1):
        lo = max(5, fv[n - 1] + 1, 3 * n, (ds[-1] + 1) if ds else 0)
        d = lo if is_prime(lo) else next_prime(lo)
        for _ in range(max_prime_steps):
            r = _pick_r(n, d, ds, rs)
            if r is not None:
                break
            d = next_prime(d + 1)
        else:
            raise ParamsError(f"no admissible (d, r) at level {n} within {max_prime_steps} primes")
        ds.append(d)
        rs.append(r)
    return ds, rs


def _pick_r(n: int, d: int, ds: list[int], rs: list[int]) -> Optional[int]:
    for r in range(n, min(18 * n, d // 3) + 1):
        if all(not _forbidden(rl, r, d) and not _forbidden(r, rl, dl) for dl, rl in zip(ds, rs)):
            return r
    return None


def _target(f, horizon: int) -> list[int]:
    if callable(f):
        return [int(f(n)) for n in range(1, horizon + 1)]
    vals = list(f)
    if len(vals) < horizon:
        raise ValueError(f"target table has {len(vals)} entries, need {horizon}")
    return [int(v) for v in vals[:horizon]]


def check_admissible(d: Sequence[int], r: Sequence[int], f=None) -> list[str]:
    """Independent pass over the conditions; returns a list of violations."""
    out = []
    fv = None if f is None else _target(f, len(d))
    for n in range(1, len(d) + 1):
        dn, rn = d[n - 1], r[n - 1]
        if not is_prime(dn):
            out.append(f"d({n}) = {dn} is not prime")
        if n == 1 and dn < 5:
            out.append("d(1) < 5")
        if n > 1 and dn <= d[n - 2]:
            out.append(f"d not increasing at {n}")
        if not (n <= rn and rn <= 18 * n and 3 * rn <= dn):
            out.append(f"r({n}) = {rn} outside [{n}, min(18n, d/3)]")
        if fv is not None and fv[n - 1] > dn - 1:
            out.append(f"f({n}) = {fv[n - 1]} > d({n}) - 1")
    for (l, m) in itertools.permutations(range(len(d)), 2):
        dm, rm = d[m], r[m]
        res = r[l] % dm
        if res in {rm % dm, (-rm) % dm, (2 * rm) % dm, (-2 * rm) % dm}:
            out.append(f"r({l + 1}) = {r[l]} collides with +-r, +-2r mod d({m + 1}) = {dm}")
    return out
