"""Label-count bounds evaluated exactly or with certified intervals.

Every formula is written once against a tiny arithmetic interface and
evaluated by two backends:

* ``_Exact`` uses ``Fraction`` and succeeds when all powers are rational
  (integral exponents, or perfect powers);
* ``_Interval`` uses mpmath's outward-rounded interval context.

When no exact value exists the working precision doubles until the
smallest even integer above the value is unambiguous.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import gmpy2
import mpmath
from mpmath import iv

from .errors import InfeasibleError, ThresholdError
from .graphs import Graph, count_paths, gamma_of, girth

DEFAULT_EPS = Fraction(1, 10**6)
MAX_PREC = 1 << 16
LOG10_PREC = 256
LOG10_DIGITS = 32

# Chiu's cubic Ramanujan graphs: |E| <= 3/2 * 2^((3 girth + 6) / 4)
CHIU_GROWTH = (Fraction(3, 2), Fraction(2), Fraction(3, 4), Fraction(3, 2))

# the 10^272 figure commonly quoted for Osajda's bound at (3, 3/2, 1/6)
OSAJDA_QUOTED_LOG10 = 272


class _Inexact(Exception):
    pass


def _exact_root(x: int, k: int) -> Optional[int]:
    if x < 0:
        return None
    r, exact = gmpy2.iroot(x, k)
    return int(r) if exact else None


def exact_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """``base ** exponent`` as a Fraction when it is rational, else ``None``."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    a, b = exponent.numerator, exponent.denominator
    if b == 1:
        return base**a
    # base^(a/b) with gcd(a, b) = 1 is rational iff base is a perfect b-th power
    if b > max(base.numerator, base.denominator).bit_length():
        return base**a if base == 1 else None
    p = _exact_root(base.numerator, b)
    q = _exact_root(base.denominator, b)
    if p is None or q is None:
        return None
    return Fraction(p, q) ** a


class _Exact:
    def const(self, x):
        return Fraction(x)

    def pow(self, base, exponent):
        v = exact_power(Fraction(base), Fraction(exponent))
        if v is None:
            raise _Inexact
        return v

    def exp(self, x):
        if Fraction(x) == 0:
            return Fraction(1)
        raise _Inexact


class _Interval:
    def const(self, x):
        x = Fraction(x)
        return iv.mpf(x.numerator) / x.denominator

    def pow(self, base, exponent):
        exponent = Fraction(exponent)
        b = base if isinstance(base, iv.mpf) else self.const(base)
        if exponent.denominator == 1 and exponent.numerator >= 0:
            return b ** int(exponent.numerator)
        return iv.exp(self.const(exponent) * iv.log(b))

    def exp(self, x):
        return iv.exp(x if isinstance(x, iv.mpf) else self.const(x))


@contextmanager
def _iv_precision(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -v if sign else v


def enclose(formula: Callable, prec: int) -> tuple[Fraction, Fraction]:
    """Certified ``(lower, upper)`` of ``formula`` at ``prec`` bits."""
    with _iv_precision(prec):
        v = formula(_Interval())
        if not isinstance(v, iv.mpf):
            v = _Interval().const(v)
        lo, hi = v._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def _log10_interval(formula: Callable, prec: int):
    with _iv_precision(prec):
        v = formula(_Interval())
        if not isinstance(v, iv.mpf):
            v = _Interval().const(v)
        lg = iv.log(v) / iv.log(10)
        lo, hi = lg._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def ceil_even(x: Fraction) -> int:
    """Smallest even integer >= x."""
    c = math.ceil(Fraction(x))
    return c if c % 2 == 0 else c + 1


def _fmt_decimal(x: Fraction, digits: int) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits)


@dataclass
class BoundResult:
    name: str
    exact: Optional[Fraction]
    lower: Fraction
    upper: Fraction
    ceil: int
    L_even: int
    log10: str
    prec: int = 0
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def contains(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    def value_str(self, digits: int = 12) -> str:
        if self.exact is not None:
            e = self.exact
            return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
        return f"[{_fmt_decimal(self.lower, digits)}, {_fmt_decimal(self.upper, digits)}]"


def evaluate(name: str, formula: Callable, decide=None, exact_allowed: bool = True) -> BoundResult:
    """Evaluate ``formula`` exactly if possible, else by interval refinement
    until its ceiling (and ``decide(x)``, if given) is the same at both ends."""
    exact = None
    if exact_allowed:
        try:
            exact = Fraction(formula(_Exact()))
        except _Inexact:
            exact = None
    notes = []

    def settled(lo, hi):
        if math.ceil(lo) != math.ceil(hi):
            return False
        return decide is None or decide(lo) == decide(hi)

    if exact is not None:
        lo = hi = exact
        prec = 0
    else:
        prec = 64
        while True:
            lo, hi = enclose(formula, prec)
            if settled(lo, hi) or prec >= MAX_PREC:
                break
            prec *= 2
        if not settled(lo, hi):
            notes.append(f"rounding still ambiguous at {prec} bits; upper end used")
    l_lo, l_hi = _log10_interval(formula, max(prec, LOG10_PREC))
    log10 = _fmt_decimal((l_lo + l_hi) / 2, LOG10_DIGITS)
    return BoundResult(name, exact, lo, hi, math.ceil(hi), ceil_even(hi), log10, prec, notes)


def _params(Delta, A, lam):
    Delta, A, lam = int(Delta), Fraction(A), Fraction(lam)
    if Delta < 3:
        raise ValueError("Delta must be >= 3")
    if A <= 0:
        raise ValueError("A must be positive")
    if not (0 < lam <= Fraction(1, 6)):
        raise ValueError("lambda must lie in (0, 1/6]")
    return Delta, A, lam


@dataclass(frozen=True)
class BoundParams:
    Delta: int
    A: Fraction
    lam: Fraction
    eps: Optional[Fraction] = None

    def __post_init__(self):
        Delta, A, lam = _params(self.Delta, self.A, self.lam)
        object.__setattr__(self, "Delta", Delta)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lam", lam)
        if self.eps is not None:
            eps = Fraction(self.eps)
            if eps <= 0:
                raise ValueError("epsilon must be positive")
            object.__setattr__(self, "eps", eps)


# -- formulas ----------------------------------------------------------------


def osajda_formula(Delta, A, lam):
    Delta, A, lam = _params(Delta, A, lam)

    def f(ar):
        e4 = ar.exp(4)
        first = 2 * e4 * ar.pow(Delta, 2 * A / lam + 2)
        return first * ar.pow(4 * e4 * Delta, 8 * A / lam + 16)

    return f


def main_formula(Delta, A, lam):
    Delta, A, lam = _params(Delta, A, lam)
    return lambda ar: 2 * (Delta - 1) + 26 * ar.pow(Delta - 1, 2 * A / lam + 2)


def alpha_formula(Delta, A, lam):
    Delta, A, lam = _params(Delta, A, lam)
    return lambda ar: 2 * ar.pow(Delta - 1, 2 * A / lam + 2)


def osajda_bound(p: BoundParams) -> BoundResult:
    """2 e^4 Delta^(2A/lam+2) (4 e^4 Delta)^(8A/lam+16); never exact."""
    res = evaluate("osajda", osajda_formula(p.Delta, p.A, p.lam), exact_allowed=False)
    if (p.Delta, p.A, p.lam) == (3, Fraction(3, 2), Fraction(1, 6)):
        res.notes.append(
            f"discrepancy: computed log10 = {float(res.log10):.2f}, "
            f"not the quoted > 10^{OSAJDA_QUOTED_LOG10} for these parameters"
        )
    return res


def main_bound(p: BoundParams) -> BoundResult:
    """2(Delta-1) + 26 (Delta-1)^(2A/lam+2)."""
    return evaluate("main", main_formula(p.Delta, p.A, p.lam))


def alpha_bound(Delta, A, lam) -> BoundResult:
    """alpha = 2 (Delta-1)^(2A/lam+2)."""
    return evaluate("alpha", alpha_formula(Delta, A, lam))


def eps_girth_bound(p: BoundParams) -> BoundResult:
    """L = 2(Delta-1) + 13 ceil(2 (Delta-1)^((1+eps) A/lam + 2)).

    Large graphs have girth/gamma <= (1+eps)/lam, which replaces 2A/lam by
    (1+eps)A/lam in the exponent.
    """
    eps = DEFAULT_EPS if p.eps is None else p.eps
    d = p.Delta - 1
    expo = (1 + eps) * p.A / p.lam + 2
    alpha = evaluate("alpha_eps", lambda ar: 2 * ar.pow(d, expo))
    alpha_eps = alpha.ceil
    L = 2 * d + 13 * alpha_eps
    res = evaluate("eps_girth", lambda ar: ar.const(L))
    res.details.update(alpha_eps=alpha_eps, alpha=alpha, eps=eps, exponent=expo)
    return res


def _tail_sum(m: int, r) -> mpmath.mpf:
    # sum_{j >= m} j r^j = r^m (m (1 - r) + r) / (1 - r)^2
    return r**m * (m * (1 - r) + r) / (1 - r) ** 2


def _min_tail_index(kappa_alpha, r, slack) -> int:
    with mpmath.workprec(200):
        r = mpmath.mpf(r)
        ok = lambda m: kappa_alpha * _tail_sum(m, r) <= slack
        hi = 1
        while not ok(hi):
            hi *= 2
        lo = max(1, hi // 2)
        if ok(lo):
            return lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
        return hi


def edge_growth_bound(
    lam,
    eps=DEFAULT_EPS,
    growth: Sequence = CHIU_GROWTH,
    Delta: int = 3,
    target_L: Optional[int] = None,
) -> BoundResult:
    """Label count when ``|E(G)| <= C * b^(c1 * girth + c0)``.

    ``growth = (C, b, c1, c0)``. For large graphs the edge exponent is at
    most ``(c1/lam + eps/2) * gamma``; with ``K = (Delta-1)^2 b^(c1/lam+eps/2)``
    and ``alpha = (1+eps) K`` the number of labels is ``alpha + eps + 2(Delta-1)``.
    With ``target_L`` given, ``alpha = target_L - 2(Delta-1) - eps`` instead and
    the geometric ratio ``K/alpha`` must stay below 1.

    ``details['gamma1_min']`` is the first threshold from which the estimate
    holds: the edge-exponent slack needs ``gamma >= (c1/lam + c0)/(eps/2)`` and
    the tail ``kappa * alpha * sum_{j>=gamma1} j r^j`` must not exceed eps.
    That tail search uses 200-bit floats, not intervals.
    """
    lam, eps = Fraction(lam), Fraction(eps)
    C, b, c1, c0 = (Fraction(x) for x in growth)
    if not (0 < lam < Fraction(1, 2)):
        raise ValueError("lambda must lie in (0, 1/2)")
    if eps <= 0:
        raise InfeasibleError("ratio 1/(1+eps) >= 1 for eps <= 0; the tail sum diverges")
    if C <= 0 or b <= 1 or c1 <= 0:
        raise ValueError("growth needs C > 0, b > 1, c1 > 0")
    d = Delta - 1
    delta = eps / 2
    expo = c1 / lam + delta
    kappa = 4 * C / d**2
    K = lambda ar: d**2 * ar.pow(b, expo)
    if target_L is None:
        alpha_f = lambda ar: ar.const(1 + eps) * K(ar)
        res = evaluate("edge_growth", lambda ar: alpha_f(ar) + ar.const(eps) + 2 * d)
        ratio = 1 / (1 + eps)
        ratio_hi = ratio
    else:
        if target_L % 2:
            raise ValueError("target L must be even")
        alpha_val = Fraction(target_L) - 2 * d - eps
        if alpha_val <= 0:
            raise InfeasibleError(f"target L={target_L} leaves no room for alpha")
        alpha_f = lambda ar: ar.const(alpha_val)
        ratio_res = evaluate("ratio", lambda ar: K(ar) / ar.const(alpha_val), decide=lambda x: x >= 1)
        ratio = (ratio_res.lower + ratio_res.upper) / 2
        ratio_hi = ratio_res.upper
        if ratio_res.lower >= 1:
            raise InfeasibleError(
                f"geometric ratio K/alpha = {float(ratio):.6g} >= 1 for target L={target_L}; "
                "the truncated sum cannot be made small"
            )
        res = evaluate("edge_growth", lambda ar: ar.const(target_L))
    alpha = evaluate("alpha", alpha_f)
    g_expo = math.ceil((c1 / lam + c0) / delta)
    with mpmath.workprec(200):
        kappa_alpha = mpmath.mpf(kappa.numerator) / kappa.denominator * mpmath.mpf(alpha.upper.numerator) / alpha.upper.denominator
        g_tail = _min_tail_index(kappa_alpha, mpmath.mpf(ratio_hi.numerator) / ratio_hi.denominator, mpmath.mpf(eps.numerator) / eps.denominator)
    res.details.update(
        alpha=alpha,
        ratio=ratio,
        kappa=kappa,
        eps=eps,
        growth=(C, b, c1, c0),
        gamma1_exponent=g_expo,
        gamma1_tail=g_tail,
        gamma1_min=max(g_expo, g_tail),
    )
    return res


def asymptotic_lower_bound(Delta: int, lam) -> BoundResult:
    """The bare power Delta^(1/(2 lam) + 1); an asymptotic order, not a hard bound."""
    lam = Fraction(lam)
    if not (0 < lam < Fraction(1, 2)):
        raise ValueError("lambda must lie in (0, 1/2)")
    if Delta < 2:
        raise ValueError("Delta must be >= 2")
    res = evaluate("asymptotic_lower", lambda ar: ar.pow(Delta, 1 / (2 * lam) + 1))
    res.notes.append("asymptotic order only; the hidden constant is unspecified")
    return res


def exact_lower_bound(g: Graph, lam) -> int:
    """Smallest L with L^gamma >= number of directed paths of length gamma.

    Those paths must all read distinct words, so every valid labelling of
    ``g`` alone needs at least this many labels.
    """
    gam = gamma_of(Fraction(lam), girth(g))
    if gam is None or gam <= 1:
        raise ThresholdError(f"gamma = {gam}; the window length must exceed 1")
    P = count_paths(g, gam)
    if P == 0:
        return 0
    r, exact = gmpy2.iroot(P, gam)
    return int(r) if exact else int(r) + 1


def bounds_table(
    Delta=3,
    A=Fraction(3, 2),
    lam=Fraction(1, 6),
    eps=DEFAULT_EPS,
    growth=CHIU_GROWTH,
) -> list[BoundResult]:
    p = BoundParams(Delta, A, lam, eps)
    rows = [osajda_bound(p), main_bound(p), eps_girth_bound(p)]
    rows.append(edge_growth_bound(lam, eps, growth, Delta=Delta))
    rows.append(asymptotic_lower_bound(Delta, lam))
    return rows


def format_table(rows: Sequence[BoundResult]) -> str:
    lines = ["name\tvalue\tL_even\tlog10"]
    for r in rows:
        lines.append(f"{r.name}\t{r.value_str()}\t{r.L_even}\t{r.log10}")
    for r in rows:
        lines.extend(f"# {r.name}: {n}" for n in r.notes)
    return "\n".join(lines) + "\n"
