"""Fixed-point analysis on the invariant line: translation-invariant root
counting with thresholds, the level-parity (2-periodic) quadratic, and
parameter sweeps.

Everything here lives on the invariant line u_1 = 1 of the ratio recursion
(the 1<->3 spin symmetry preserves it), with branching order fixed at 2 so
the one-dimensional map is

    f(u) = ((xw*u + 2*yw) / (yw*u + xw + zw))^2.

Translation-invariant measures correspond to u = f(u); reducing by
x = u*xw/(2*yw) turns that into the cubic a*x*(b+x)^2 = (1+x)^2 in the
canonical parameters a = 2*yw^3/xw^3, b = xw*(xw+zw)/(2*yw^2), whose
positive-root count is decided by the thresholds eps_1, eps_2 when b > 9.
Proper 2-periodic measures solve u = f(f(u)) but not u = f(u); dividing
the fixed-point numerators exactly gives a quadratic A*u^2 + B*u + C whose
discriminant sign decides existence.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalConsistencyError, NonDivisibleError
from .model import LambdaParams
from .poly import Poly, RationalFn, X, compose, divide_exact, real_roots

K_CHILDREN = 2  # branching order baked into the squared map

_ROOT_DEDUP_TOL = 1e-8       # relative; decides "two solutions" boundary cases
_THRESHOLD_EQ_TOL = 1e-10    # |a_can - eps| below this counts as on-boundary
_FIXED_POINT_RESIDUAL = 1e-9
_PROPERNESS_GAP = 1e-6

INVARIANT_LINE_NOTE = ("invariant-line analysis only: first ratio component "
                       "pinned to 1; solutions off the line are out of scope")

SWEEP_COLUMNS = ("a", "b", "c", "beta", "xw", "yw", "zw", "a_can", "b_can",
                 "ti_count", "eps1", "eps2", "B", "D", "two_periodic",
                 "phase_transition")


@dataclass(frozen=True)
class BoltzmannWeights:
    """Edge weights (xw, yw, zw) = exp(beta*(c, b, a)) — note the pairing."""

    xw: float
    yw: float
    zw: float

    def __post_init__(self):
        for name in ("xw", "yw", "zw"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")

    @classmethod
    def from_mapping(cls, obj) -> "BoltzmannWeights":
        try:
            return cls(float(obj["xw"]), float(obj["yw"]), float(obj["zw"]))
        except KeyError as e:
            raise ValueError(f"missing weight {e.args[0]!r}") from None


@dataclass(frozen=True)
class CanonicalParams:
    a_can: float
    b_can: float


@dataclass(frozen=True)
class FixedPointReport:
    ti_roots: tuple[float, ...]        # u values on the invariant line
    regime: str                        # "unique" | "two" | "three"
    thresholds: tuple[float, float] | None  # (eps1, eps2) when b_can > 9
    phase_transition: bool


@dataclass(frozen=True)
class PeriodicReport:
    quad: tuple[float, float, float]   # (A, B, C)
    discriminant: float
    proper_roots: tuple[float, ...]
    two_periodic_exists: bool


@dataclass(frozen=True)
class CaseSample:
    weights: tuple[float, ...]         # the free parameters of the case
    computed_d: float
    printed_d: float
    rel_deviation: float
    agrees: bool


@dataclass(frozen=True)
class CaseIdentityReport:
    case: str
    samples: tuple[CaseSample, ...]
    max_rel_deviation: float

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "max_rel_deviation": self.max_rel_deviation,
            "samples": [{"weights": list(s.weights), "computed_d": s.computed_d,
                         "printed_d": s.printed_d,
                         "rel_deviation": s.rel_deviation, "agrees": s.agrees}
                        for s in self.samples],
        }


def weights_from(p: LambdaParams) -> BoltzmannWeights:
    return BoltzmannWeights(math.exp(p.beta * p.c), math.exp(p.beta * p.b),
                            math.exp(p.beta * p.a))


def ti_map(u: tuple[float, float], w: BoltzmannWeights) -> tuple[float, float]:
    """The two-component ratio map with both children equal.

    The three-term sums are grouped so that at u1 = 1 the first numerator
    and the denominator are the same float expression, making the first
    output component exactly 1.0 on the invariant line.
    """
    u1, u2 = u
    if not (u1 > 0 and u2 > 0):
        raise DomainError(f"ratios must be positive, got {u}")
    shared = w.yw * u2
    den = (w.zw * u1 + w.xw) + shared
    n1 = (w.xw * u1 + w.zw) + shared
    n2 = w.yw * u1 + w.xw * u2 + w.yw
    return ((n1 / den) ** K_CHILDREN, (n2 / den) ** K_CHILDREN)


def f_map(u: float, w: BoltzmannWeights) -> float:
    """The invariant-line map f(u) = ((xw*u + 2*yw)/(yw*u + xw + zw))^2."""
    return ((w.xw * u + 2.0 * w.yw) / (w.yw * u + (w.xw + w.zw))) ** K_CHILDREN


def canonical_params(w: BoltzmannWeights) -> CanonicalParams:
    return CanonicalParams(2.0 * w.yw ** 3 / w.xw ** 3,
                           w.xw * (w.xw + w.zw) / (2.0 * w.yw ** 2))


def weights_for_canonical(a_can: float, b_can: float,
                          yw: float = 1.0) -> BoltzmannWeights:
    """Invert the canonical map at a chosen yw.

    Feasible iff the implied zw = 2*b_can*yw^2/xw - xw is positive, i.e.
    b_can > (1/2)*(2/a_can)^(2/3) at yw = 1.
    """
    if a_can <= 0 or b_can <= 0:
        raise DomainError("canonical parameters must be positive")
    xw = yw * (2.0 / a_can) ** (1.0 / 3.0)
    zw = 2.0 * b_can * yw ** 2 / xw - xw
    if zw <= 0:
        raise DomainError(
            f"no positive weights realize a_can={a_can}, b_can={b_can} at yw={yw}")
    return BoltzmannWeights(xw, yw, zw)


def ti_cubic(a_can: float, b_can: float) -> Poly:
    """a*x*(b+x)^2 - (1+x)^2 expanded: the positive roots are the
    translation-invariant solutions in the reduced variable x."""
    a, b = a_can, b_can
    return Poly((-1.0, a * b * b - 2.0, 2.0 * a * b - 1.0, a))


def ti_thresholds(b_can: float) -> tuple[float, float, float, float]:
    """(x1, x2, eps1, eps2) for b_can > 9: x_i are the roots of
    x^2 + (3-b)x + b = 0 and eps_i = (1/x_i)*((1+x_i)/(b+x_i))^2."""
    b = b_can
    if b <= 9:
        raise DomainError(f"thresholds exist only for b_can > 9, got {b}")
    disc = (b - 1.0) * (b - 9.0)
    s = math.sqrt(disc)
    x2 = ((b - 3.0) + s) / 2.0
    x1 = b / x2  # product of the quadratic's roots is b; this form is stable

    def eps(x: float) -> float:
        return (1.0 / x) * ((1.0 + x) / (b + x)) ** 2

    return x1, x2, eps(x1), eps(x2)


def canonical_root_count(a_can: float, b_can: float,
                         dedup_tol: float = _ROOT_DEDUP_TOL):
    """Positive roots of the reduced cubic plus the regime verdict.

    Returns (roots_x, regime, thresholds): regime follows the threshold
    case analysis — unique for b <= 9, three strictly inside (eps1, eps2),
    two on the boundary (within 1e-10), unique otherwise.
    """
    if a_can <= 0 or b_can <= 0:
        raise DomainError("canonical parameters must be positive")
    roots = [r for r, _ in real_roots(ti_cubic(a_can, b_can), dedup_tol=dedup_tol)
             if r > 0]
    if b_can <= 9:
        return tuple(roots), "unique", None
    x1, x2, eps1, eps2 = ti_thresholds(b_can)
    if (abs(a_can - eps1) <= _THRESHOLD_EQ_TOL
            or abs(a_can - eps2) <= _THRESHOLD_EQ_TOL):
        regime = "two"
    elif eps1 < a_can < eps2:
        regime = "three"
    else:
        regime = "unique"
    return tuple(roots), regime, (eps1, eps2)


def count_ti_roots(w: BoltzmannWeights) -> FixedPointReport:
    """Translation-invariant fixed points on the invariant line."""
    can = canonical_params(w)
    roots_x, regime, thresholds = canonical_root_count(can.a_can, can.b_can)
    scale = 2.0 * w.yw / w.xw
    u_roots = []
    for x in roots_x:
        u = _polish_fixed_point(x * scale, w)
        if abs(u - f_map(u, w)) > _FIXED_POINT_RESIDUAL:
            raise InternalConsistencyError(
                f"fixed-point residual {abs(u - f_map(u, w)):.3e} at u={u}")
        u_roots.append(u)
    return FixedPointReport(tuple(sorted(u_roots)), regime, thresholds,
                            regime != "unique")


def _polish_fixed_point(u: float, w: BoltzmannWeights) -> float:
    """A few Newton steps on g(u) = f(u) - u."""
    for _ in range(4):
        num = w.xw * u + 2.0 * w.yw
        den = w.yw * u + (w.xw + w.zw)
        ratio = num / den
        g = ratio * ratio - u
        dg = 2.0 * ratio * (w.xw * den - num * w.yw) / (den * den) - 1.0
        if dg == 0.0:
            break
        step = g / dg
        if not math.isfinite(step) or abs(step) > 0.5 * max(1.0, abs(u)):
            break
        u -= step
        if abs(step) <= 1e-16 * max(1.0, abs(u)):
            break
    return u


def _exact_line_map(w: BoltzmannWeights) -> RationalFn:
    """f as a rational function with exact Fraction coefficients."""
    xf, yf, zf = Fraction(w.xw), Fraction(w.yw), Fraction(w.zw)
    num = Poly((2 * yf, xf))
    den = Poly((xf + zf, yf))
    return RationalFn(num * num, den * den)


def periodic_quadratic(w: BoltzmannWeights) -> tuple[Fraction, Fraction, Fraction]:
    """(A, B, C) of the exact quotient numerator(f∘f - id)/numerator(f - id).

    Computed entirely in rational arithmetic (floats are exact binary
    rationals), so the division is exact and the coefficients carry the
    same normalization as the printed expansion they are audited against.
    """
    f = _exact_line_map(w)
    ff = compose(f, f)
    p_fix = f.num - X * f.den
    q_fix = ff.num - X * ff.den
    try:
        quad = divide_exact(q_fix, p_fix)
    except NonDivisibleError as e:
        raise InternalConsistencyError(
            f"fixed-point numerator did not divide the composed one: {e}") from e
    if quad.degree() != 2:
        raise InternalConsistencyError(
            f"expected a quadratic quotient, got degree {quad.degree()}")
    c0, c1, c2 = quad.coeffs
    return Fraction(c2), Fraction(c1), Fraction(c0)


def two_periodic_report(w: BoltzmannWeights) -> PeriodicReport:
    """Proper 2-periodic solutions on the invariant line.

    Existence is decided exactly: B < 0 and D > 0 in rational arithmetic
    (A and C are positive for all positive weights, so this is equivalent
    to the quadratic having two positive roots). Near D = 0 the root pair
    degenerates toward a translation-invariant point and the properness
    gap |r - f(r)| > 1e-6 empties the list.
    """
    a_f, b_f, c_f = periodic_quadratic(w)
    disc = b_f * b_f - 4 * a_f * c_f
    exists = b_f < 0 and disc > 0

    roots: list[float] = []
    if disc > 0:
        af, bf, cf = float(a_f), float(b_f), float(c_f)
        s = math.sqrt(float(disc))
        q = -(bf + math.copysign(s, bf)) / 2.0
        roots = [q / af, cf / q]
    elif disc == 0:
        roots = [float(-b_f / (2 * a_f))]

    proper = []
    for r in roots:
        if r <= 0:
            continue
        if abs(r - f_map(f_map(r, w), w)) >= _FIXED_POINT_RESIDUAL:
            raise InternalConsistencyError(
                f"2-periodic residual too large at root {r}")
        if abs(r - f_map(r, w)) > _PROPERNESS_GAP:
            proper.append(r)
    return PeriodicReport((float(a_f), float(b_f), float(c_f)), float(disc),
                          tuple(sorted(proper)), exists)


# printed factorized discriminants, evaluated exactly per case
def _printed_case_d(case: str, sample) -> tuple[Fraction, BoltzmannWeights]:
    if case == "i":
        x = Fraction(float(sample))
        printed = -x * (4 + 3 * x) * (2 * x + 3) ** 2 * (2 * x ** 2 + x - 2) ** 2
        weights = BoltzmannWeights(float(sample), 1.0, float(sample) + 1.0)
    elif case == "ii":
        x = Fraction(float(sample))
        printed = (-16 * (3 * x ** 4 + 10 * x ** 3 + 6 * x ** 2 - 1)
                   * (x - 1) ** 2 * (x + 1) ** 2)
        weights = BoltzmannWeights(float(sample), 1.0, float(sample))
    elif case == "iii":
        xs, zs = sample
        x, z = Fraction(float(xs)), Fraction(float(zs))
        printed = (-x ** 3 * (23 * x ** 3 + 30 * x ** 2 * z
                              + 15 * x * z ** 2 + 4 * z ** 3) * (x - z) ** 2)
        weights = BoltzmannWeights(float(xs), float(xs), float(zs))
    else:
        raise ValueError(f"unknown case {case!r}; expected i, ii or iii")
    return printed, weights


def case_identity_check(case: str, samples) -> CaseIdentityReport:
    """Audit the printed factorized discriminant of one special case
    against the division-derived one, sample by sample, exactly.

    Case "i" fixes zw = xw + 1, yw = 1 (samples are xw values); case "ii"
    fixes zw = xw, yw = 1 (samples are xw values); case "iii" fixes
    yw = xw (samples are (xw, zw) pairs).
    """
    rows = []
    worst = 0.0
    for sample in samples:
        printed, w = _printed_case_d(case, sample)
        a_f, b_f, c_f = periodic_quadratic(w)
        computed = b_f * b_f - 4 * a_f * c_f
        denom = max(abs(computed), abs(printed))
        rel = 0.0 if denom == 0 else float(abs(computed - printed) / denom)
        worst = max(worst, rel)
        key = (float(sample),) if case in ("i", "ii") else tuple(float(v) for v in sample)
        rows.append(CaseSample(key, float(computed), float(printed), rel,
                               rel <= 1e-8))
    return CaseIdentityReport(case, tuple(rows), worst)


@dataclass(frozen=True)
class SweepRow:
    a: float | None
    b: float | None
    c: float | None
    beta: float | None
    xw: float
    yw: float
    zw: float
    a_can: float
    b_can: float
    ti_count: int
    eps1: float | None
    eps2: float | None
    B: float
    D: float
    two_periodic: bool
    phase_transition: bool


def _sweep_point(point) -> SweepRow:
    if isinstance(point, LambdaParams):
        w = weights_from(point)
        abc = (point.a, point.b, point.c, point.beta)
    else:
        w = point
        abc = (None, None, None, None)
    can = canonical_params(w)
    fp = count_ti_roots(w)
    pr = two_periodic_report(w)
    eps1, eps2 = fp.thresholds if fp.thresholds else (None, None)
    return SweepRow(abc[0], abc[1], abc[2], abc[3], w.xw, w.yw, w.zw,
                    can.a_can, can.b_can, len(fp.ti_roots), eps1, eps2,
                    pr.quad[1], pr.discriminant, pr.two_periodic_exists,
                    fp.phase_transition or pr.two_periodic_exists)


def sweep(points, threads: int = 1) -> list[SweepRow]:
    """One row per grid point, in the given order regardless of threading."""
    points = list(points)
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(points))) as pool:
            return list(pool.map(_sweep_point, points))
    return [_sweep_point(pt) for pt in points]


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt_cell(getattr(row, col)) for col in SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def sweep_to_jsonl(rows: list[SweepRow]) -> str:
    lines = []
    for row in rows:
        obj = {}
        for col in SWEEP_COLUMNS:
            v = getattr(row, col)
            if isinstance(v, float):
                v = float(format(v, ".15g"))
            obj[col] = v
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"
