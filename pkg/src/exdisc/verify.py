"""Exact property checks for the convolution and distribution inequalities.

Each check returns a :class:`VerificationReport`.  Universal statements
("for all alpha > 0", "for all symmetric decreasing h") are decided on the
exact piecewise representation of the gap function; sampled ladders are
only used as additional explicit evaluation points.
"""
from __future__ import annotations

import enum
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from . import poly as P
from .distribution import dist_D, dist_Dtilde, grid_profile_D, grid_profile_Dtilde, density_of_D
from .errors import HypothesisViolated, NegativeValues
from .piecewise import M1, PiecewisePoly, bspline, indicator, is_sd, make_step, sd_rearrange
from .pointset import GridKind, PointSet, centered_grid, classify, random_set, translated_grid
from .rational import fmt, to_fraction

CHECKS = ("charest", "main", "riesz", "nconv", "thm1", "thm2")


class Outcome(enum.Enum):
    HOLDS = "holds"
    HOLDS_WITH_EQUALITY = "holds_with_equality"
    STRICT_VIOLATION = "strict_violation"


@dataclass
class VerificationReport:
    check: str
    instance: dict
    outcome: Outcome
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None
    witness: Optional[dict] = None
    equality_for_all: Optional[bool] = None
    equality_expected: Optional[bool] = None
    elapsed: float = 0.0

    @property
    def equality_consistent(self) -> bool:
        if self.equality_for_all is None or self.equality_expected is None:
            return True
        return self.equality_for_all == self.equality_expected

    @property
    def ok(self) -> bool:
        return self.outcome is not Outcome.STRICT_VIOLATION and self.equality_consistent

    def to_json(self, timing: bool = False) -> dict:
        out = {"check": self.check, "outcome": self.outcome.value, "instance": self.instance}
        if self.lhs is not None:
            out["lhs"] = fmt(self.lhs)
            out["rhs"] = fmt(self.rhs)
        if self.witness is not None:
            out["witness"] = self.witness
        if self.equality_for_all is not None:
            out["equality_for_all"] = self.equality_for_all
            out["equality_expected"] = self.equality_expected
        if timing:
            out["elapsed"] = self.elapsed
        return out


# ----------------------------------------------------------------- gap analysis


@dataclass
class GapAnalysis:
    nonneg: bool
    zero: bool
    witness: Optional[dict] = None


def _negative_point(p: P.Poly, a: Fraction, b: Fraction) -> Fraction:
    cands = [a, b, (a + b) / 2]
    for r in P.roots_in(P.deriv(p), a, b, Fraction(1, 10**20)):
        cands.append(r)
    cands += [a + (b - a) * k / 64 for k in range(1, 64)]
    return min(cands, key=lambda x: P.evaluate(p, x))


def _positive_subinterval(p: P.Poly, a: Fraction, b: Fraction) -> Tuple[Fraction, Fraction]:
    cuts = [a] + P.roots_in(p, a, b, Fraction(1, 10**20)) + [b]
    for lo, hi in zip(cuts, cuts[1:]):
        if P.evaluate(p, (lo + hi) / 2) > 0:
            return lo, hi
    return a, b


def analyze_gap(gap: PiecewisePoly, tail: Fraction = Fraction(0)) -> GapAnalysis:
    """Decide gap(alpha) >= 0 for all alpha > 0.

    ``gap`` is only consulted on (0, inf); beyond its support it is taken to
    equal the constant ``tail``.  On success the witness (if the gap is not
    identically zero) is the first piece, in increasing alpha, on which the
    gap is strictly positive; on failure it is a point where it is negative.
    """
    g = gap.restrict(0, None)
    pieces = list(g.intervals())
    end = pieces[-1][1] if pieces else Fraction(0)
    zero = not pieces and tail == 0
    first_pos = None
    # gaps between pieces are zero stretches; they need no check
    for a, b, p in pieces:
        if not P.nonneg_on(p, a, b):
            x = _negative_point(p, a, b)
            return GapAnalysis(False, False, {"alpha": fmt(x), "gap": fmt(P.evaluate(p, x))})
        if p and first_pos is None:
            lo, hi = _positive_subinterval(p, a, b)
            mid = (lo + hi) / 2
            first_pos = {"interval": [fmt(lo), fmt(hi)], "alpha": fmt(mid), "gap": fmt(P.evaluate(p, mid))}
    if tail < 0:
        return GapAnalysis(False, False, {"alpha": fmt(end + 1), "gap": fmt(tail)})
    if first_pos is None and tail > 0:
        first_pos = {"interval": [fmt(end), "inf"], "alpha": fmt(end + 1), "gap": fmt(tail)}
    return GapAnalysis(True, zero, first_pos)


def symmetric_gap(upper: PiecewisePoly, lower: PiecewisePoly) -> Tuple[PiecewisePoly, Fraction]:
    """alpha -> integral over (-alpha, alpha) of (upper - lower), plus its limit at infinity."""
    d = upper - lower
    e = (d + d.reflect()).restrict(0, None)
    total = e.integrate()
    tail = e.tail_integral(0)
    # G(alpha) = total - tail(alpha) on [0, end]; constant total afterwards
    sup = tail.support()
    const = PiecewisePoly.from_pieces([(0, sup[1], P.const(total))]) if sup else PiecewisePoly()
    return const - tail, total


def _outcome(analysis: GapAnalysis) -> Outcome:
    if not analysis.nonneg:
        return Outcome.STRICT_VIOLATION
    return Outcome.HOLDS_WITH_EQUALITY if analysis.zero else Outcome.HOLDS


def _cmp_outcome(lhs: Fraction, rhs: Fraction) -> Outcome:
    if lhs > rhs:
        return Outcome.STRICT_VIOLATION
    return Outcome.HOLDS_WITH_EQUALITY if lhs == rhs else Outcome.HOLDS


# ----------------------------------------------------------------- hypotheses


def _require_density(g: PiecewisePoly, name: str = "g") -> None:
    if not g.is_step():
        raise HypothesisViolated(f"{name} must be a step function")
    if any(v < 0 or v > 1 for v in g.values()):
        raise HypothesisViolated(f"{name} must satisfy 0 <= {name} <= 1")
    if g.integrate() != 1:
        raise HypothesisViolated(f"{name} must integrate to 1, got {g.integrate()}")


def _require_nonneg_step(f: PiecewisePoly, name: str, exc=HypothesisViolated) -> None:
    if not f.is_step():
        raise exc(f"{name} must be a step function")
    if any(v < 0 for v in f.values()):
        raise exc(f"{name} must be non-negative")


def _conv_all(fs: Sequence[PiecewisePoly]) -> PiecewisePoly:
    out = fs[0]
    for f in fs[1:]:
        out = out.convolve(f)
    return out


# ----------------------------------------------------------------- checks


def check_charest(g: PiecewisePoly, alphas: Iterable = ()) -> VerificationReport:
    """integral_{-a}^{a} g <= integral_{-a}^{a} M_1 for densities 0 <= g <= 1."""
    t0 = time.perf_counter()
    _require_density(g)
    G, tail = symmetric_gap(M1, g)
    analysis = analyze_gap(G, tail)
    # explicit evaluation on the ladder and at every |breakpoint| of g
    pts = sorted({abs(Fraction(a)) for a in alphas} | {abs(b) for b in g.breakpoints} | {Fraction(1, 2)})
    worst = None
    for a in pts:
        if a <= 0:
            continue
        lhs, rhs = g.integrate(-a, a), min(2 * a, Fraction(1))
        if lhs > rhs:
            analysis = GapAnalysis(False, False, {"alpha": fmt(a), "lhs": fmt(lhs), "rhs": fmt(rhs)})
            break
        if worst is None or rhs - lhs > worst[2] - worst[1]:
            worst = (a, lhs, rhs)
    rep = VerificationReport(
        "charest", {"g": g.to_json()}, _outcome(analysis), witness=analysis.witness,
        equality_for_all=analysis.zero, equality_expected=(g == M1),
    )
    if worst is not None:
        rep.lhs, rep.rhs = worst[1], worst[2]
    rep.elapsed = time.perf_counter() - t0
    return rep


def check_thm_main(f: PiecewisePoly, g: PiecewisePoly, h: PiecewisePoly) -> VerificationReport:
    """integral h (f*g) <= integral h (f*M_1) for s.d. f, h and a density g."""
    t0 = time.perf_counter()
    if not is_sd(f):
        raise HypothesisViolated("f must be symmetric decreasing")
    if not is_sd(h):
        raise HypothesisViolated("h must be symmetric decreasing")
    _require_density(g)
    fg, fm = f.convolve(g), f.convolve(M1)
    lhs, rhs = (h * fg).integrate(), (h * fm).integrate()
    # every s.d. h is a monotone limit of sums of symmetric indicators, so the
    # inequality for all h is the sign of alpha -> integral_{-alpha}^{alpha} (f*M_1 - f*g)
    G, tail = symmetric_gap(fm, fg)
    analysis = analyze_gap(G, tail)
    outcome = _cmp_outcome(lhs, rhs)
    if not analysis.nonneg:
        outcome = Outcome.STRICT_VIOLATION
    return VerificationReport(
        "main", {"f": f.to_json(), "g": g.to_json(), "h": h.to_json()}, outcome, lhs, rhs,
        witness=analysis.witness, equality_for_all=analysis.zero,
        equality_expected=(g == M1) or f.is_zero(), elapsed=time.perf_counter() - t0,
    )


def check_riesz(f: PiecewisePoly, gs: Sequence[PiecewisePoly]) -> VerificationReport:
    """integral f (g_1*...*g_n) <= integral f* (g_1* * ... * g_n*) for non-negative steps."""
    t0 = time.perf_counter()
    if not 1 <= len(gs) <= 3:
        raise ValueError("riesz check takes between 1 and 3 functions g")
    _require_nonneg_step(f, "f", NegativeValues)
    for i, g in enumerate(gs):
        _require_nonneg_step(g, f"g_{i + 1}", NegativeValues)
    lhs = (f * _conv_all(gs)).integrate()
    rhs = (sd_rearrange(f) * _conv_all([sd_rearrange(g) for g in gs])).integrate()
    all_sd = is_sd(f) and all(is_sd(g) for g in gs)
    outcome = _cmp_outcome(lhs, rhs)
    rep = VerificationReport(
        "riesz", {"f": f.to_json(), "gs": [g.to_json() for g in gs]}, outcome, lhs, rhs,
        elapsed=time.perf_counter() - t0,
    )
    if all_sd:
        # rearrangement leaves symmetric decreasing inputs unchanged
        rep.equality_for_all = lhs == rhs
        rep.equality_expected = True
    if outcome is Outcome.STRICT_VIOLATION:
        rep.witness = {"lhs": fmt(lhs), "rhs": fmt(rhs)}
    return rep


def check_nconv(gs: Sequence[PiecewisePoly], h: PiecewisePoly) -> VerificationReport:
    """integral h (g_1*...*g_n) <= integral h* M_n for densities g_j and h >= 0.

    ``equality_for_all`` records equality for every s.d. h; it forces every
    g_j* = M_1.  The converse needs the g_j to combine into M_n itself (e.g.
    opposite translates), so the expectation is checked as an implication.
    """
    t0 = time.perf_counter()
    n = len(gs)
    if n < 1:
        raise ValueError("need at least one density")
    for i, g in enumerate(gs):
        _require_density(g, f"g_{i + 1}")
    _require_nonneg_step(h, "h")
    conv = _conv_all(gs)
    mn = bspline(n)
    lhs = (h * conv).integrate()
    rhs = (sd_rearrange(h) * mn).integrate()
    G, tail = symmetric_gap(mn, conv)
    analysis = analyze_gap(G, tail)
    outcome = _cmp_outcome(lhs, rhs)
    if not analysis.nonneg:
        outcome = Outcome.STRICT_VIOLATION
    rearranged_m1 = all(sd_rearrange(g) == M1 for g in gs)
    eq_all = analysis.zero
    rep = VerificationReport(
        "nconv", {"gs": [g.to_json() for g in gs], "h": h.to_json()}, outcome, lhs, rhs,
        witness=analysis.witness, equality_for_all=eq_all,
        elapsed=time.perf_counter() - t0,
    )
    # equality for all s.d. h  =>  every rearrangement is M_1;
    # every g_j = M_1          =>  equality for all s.d. h
    if eq_all:
        rep.equality_expected = rearranged_m1
    else:
        rep.equality_expected = all(g == M1 for g in gs)
    rep.instance["rearrangements_equal_M1"] = rearranged_m1
    return rep


def _theorem_check(name: str, ps: PointSet, profile, reference, expect_equal: bool) -> VerificationReport:
    t0 = time.perf_counter()
    gap = profile.gap_to(reference)
    analysis = analyze_gap(gap)
    witness = analysis.witness
    if witness is not None and analysis.nonneg:
        a = to_fraction(witness["alpha"])
        witness = dict(witness, F_P=fmt(profile(a)), F_grid=fmt(reference(a)))
    return VerificationReport(
        name, {"points": ps.to_json()["points"], "classification": classify(ps).to_json()},
        _outcome(analysis), witness=witness, equality_for_all=analysis.zero,
        equality_expected=expect_equal, elapsed=time.perf_counter() - t0,
    )


def check_theorem1(ps: PointSet) -> VerificationReport:
    """P(|D_P| < alpha) <= P(|D_grid| < alpha) for all alpha; equality iff P is the centered grid."""
    return _theorem_check("thm1", ps, dist_D(ps), grid_profile_D(), classify(ps).kind is GridKind.CENTERED)


def is_endpoint_translate(ps: PointSet) -> bool:
    """P = {(n+1)/N}: the translate with delta = 1/N, which puts a point at 1.

    D counts points strictly below t, so this set has D = D_{grid, delta=0} - 1
    on (0, 1] and the same D~ profile as every translated grid.
    """
    n = ps.n_points
    return ps.points == tuple(Fraction(k + 1, n) for k in range(n))


def check_theorem2(ps: PointSet) -> VerificationReport:
    """Same for D~; equality iff P is a translated grid (delta in [0, 1/N])."""
    expected = classify(ps).kind is not GridKind.OTHER or is_endpoint_translate(ps)
    rep = _theorem_check("thm2", ps, dist_Dtilde(ps), grid_profile_Dtilde(), expected)
    if is_endpoint_translate(ps):
        rep.instance["endpoint_translate"] = True
    return rep


# ----------------------------------------------------------------- random instances


def _rand_frac(rng: random.Random, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_density(rng: random.Random) -> PiecewisePoly:
    """A step density with values in [0, 1]; equality cases show up on purpose."""
    r = rng.random()
    if r < 0.1:
        return M1
    if r < 0.2:
        s = _rand_frac(rng, -2, 2, 4)
        return indicator(s, s + 1)
    if r < 0.35:
        return density_of_D(random_set(rng.randint(1, 6), rng.randrange(2**32), 12))
    # a few blocks of height v_i carrying mass m_i, laid out left to right
    k = rng.randint(1, 4)
    cuts = sorted(Fraction(rng.randint(1, 11), 12) for _ in range(k - 1))
    masses = [b - a for a, b in zip([Fraction(0)] + cuts, cuts + [Fraction(1)])]
    pos = _rand_frac(rng, -2, 1, 4)
    intervals, values = [], []
    for m in masses:
        if m == 0:
            continue
        v = Fraction(rng.randint(1, 4), 4)
        intervals.append((pos, pos + m / v))
        values.append(v)
        pos += m / v + Fraction(rng.randint(0, 2), 4)
    return make_step(intervals, values)


def random_sd_step(rng: random.Random) -> PiecewisePoly:
    """Sum of centered indicators with positive weights."""
    out = PiecewisePoly()
    for _ in range(rng.randint(1, 3)):
        t = Fraction(rng.randint(1, 8), 4)
        out = out + indicator(-t, t, Fraction(rng.randint(1, 4), 2))
    return out


def random_nonneg_step(rng: random.Random) -> PiecewisePoly:
    out = PiecewisePoly()
    for _ in range(rng.randint(1, 3)):
        a = _rand_frac(rng, -3, 3, 4)
        out = out + indicator(a, a + Fraction(rng.randint(1, 8), 4), Fraction(rng.randint(1, 4), 2))
    return out


def random_pointset(rng: random.Random, n_max: int) -> PointSet:
    n = rng.randint(1, n_max)
    r = rng.random()
    if r < 0.1:
        return centered_grid(n)
    if r < 0.2:
        m = rng.randint(1, 6)
        return translated_grid(n, Fraction(rng.randint(0, m - 1), m * n))
    return random_set(n, rng.randrange(2**32), rng.choice([max(n, 2), 2 * n, 1000]))


def _pw(d: dict) -> PiecewisePoly:
    return PiecewisePoly.from_json(d)


def run_trial(check: str, seed, index: int, n_max: int = 30) -> VerificationReport:
    """One reproducible random instance of a check."""
    rng = random.Random(f"{seed}:{check}:{index}")
    if check == "charest":
        return check_charest(random_density(rng), [Fraction(rng.randint(1, 40), 16) for _ in range(5)])
    if check == "main":
        f = random_sd_step(rng) if rng.random() < 0.8 else bspline(2)
        h = random_sd_step(rng) if rng.random() < 0.7 else bspline(rng.randint(1, 2))
        return check_thm_main(f, random_density(rng), h)
    if check == "riesz":
        gs = [random_nonneg_step(rng) for _ in range(rng.randint(1, 3))]
        return check_riesz(random_nonneg_step(rng), gs)
    if check == "nconv":
        gs = [random_density(rng) for _ in range(rng.randint(1, 3))]
        return check_nconv(gs, random_nonneg_step(rng))
    if check == "thm1":
        return check_theorem1(random_pointset(rng, n_max))
    if check == "thm2":
        return check_theorem2(random_pointset(rng, n_max))
    raise ValueError(f"unknown check {check!r}")


def _run_task(task):
    return run_trial(*task)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("EXDISC_THREADS", "1")))
    except ValueError:
        return 1


def campaign(seed=0, trials: int = 100, n_max: int = 30, checks: Sequence[str] = CHECKS,
             workers: Optional[int] = None) -> dict:
    """Run ``trials`` random instances of each check; deterministic per seed.

    With EXDISC_THREADS (or ``workers``) > 1 trials run in worker processes;
    results are merged in trial order so the summary does not depend on
    scheduling.
    """
    for c in checks:
        if c not in CHECKS:
            raise ValueError(f"unknown check {c!r}")
    tasks = [(c, seed, i, n_max) for c in checks for i in range(trials)]
    workers = workers or _threads()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        reports = [_run_task(t) for t in tasks]
    per_check: Dict[str, dict] = {}
    failures = []
    for c in checks:
        per_check[c] = {o.value: 0 for o in Outcome}
        per_check[c]["equality_mismatches"] = 0
    for (c, _, i, _), rep in zip(tasks, reports):
        stats = per_check[c]
        stats[rep.outcome.value] += 1
        if not rep.equality_consistent:
            stats["equality_mismatches"] += 1
        if not rep.ok:
            failures.append(dict(rep.to_json(), trial=i))
    violations = sum(s[Outcome.STRICT_VIOLATION.value] for s in per_check.values())
    mismatches = sum(s["equality_mismatches"] for s in per_check.values())
    return {
        "seed": str(seed),
        "trials": trials,
        "n_max": n_max,
        "checks": per_check,
        "violations": violations,
        "equality_mismatches": mismatches,
        "failures": failures,
    }
