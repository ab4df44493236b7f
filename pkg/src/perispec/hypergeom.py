"""Cancellation-safe evaluation of generalized hypergeometric series.

The functions here evaluate pFq(a; b; z) = sum_k (a)_k / (b)_k * z^k / k!
for real parameters and real z, together with three series manipulations
that the rest of the package relies on: subtracting the leading 1 without
cancellation, merging a linear combination of two related series into a
single higher-order series, and differentiating functions of the form
f(z) = z * pFq(a; b; z).

For large negative z the terms of these series grow to astronomical size
before decaying, while the sum itself stays of moderate size; plain double
precision then loses every significant digit.  Evaluation therefore runs a
double-precision pass first and, when the largest term exceeds the partial
sum by more than ``ESCALATION_RATIO``, re-sums with mpmath big floats at a
bit width sized to the observed cancellation.  All arithmetic in the
escalated pass is done in big-float form: even letting a single parameter
update round through a double (e.g. computing ``a + k`` in float before
lifting it) produces per-term perturbations that are coherent across the
series and get amplified by the full cancellation ratio.

Everything here is a pure function of its arguments; results are
bit-identical across calls within one build.
"""

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import InvalidParams, NonConvergent

#: Default relative tolerance used when callers do not pass one.
DEFAULT_REL_TOL = 1e-13

#: Escalate to big floats when max|term| / |sum| exceeds this.  The
#: double-precision pass loses roughly ``ratio * 3e-17`` in relative
#: accuracy, so 1e3 keeps the unescalated path at ~1e-13 or better.
ESCALATION_RATIO = 1e3

_MAX_TERMS = 10000
_TOL_RANGE = (1e-15, 1e-6)

# mpmath's working precision is process-global state; escalated passes
# serialize on this lock so concurrent callers stay safe
_MP_LOCK = threading.Lock()


def _is_nonpositive_integer(x):
    return x <= 0.0 and x == math.floor(x)


@dataclass(frozen=True)
class PfqParams:
    """Numerator and denominator parameter vectors of a pFq series.

    Parameters
    ----------
    a : sequence of float
        Numerator parameters (length p).
    b : sequence of float
        Denominator parameters (length q).  No entry may be zero or a
        negative integer, otherwise the series is undefined.

    Only p <= q + 1 is accepted; for p = q + 1 the series converges for
    |z| < 1 only.
    """

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) > len(b) + 1:
            raise InvalidParams(
                f"pFq requires p <= q + 1, got p={len(a)}, q={len(b)}")
        for bj in b:
            if _is_nonpositive_integer(bj):
                raise InvalidParams(
                    f"denominator parameter {bj} is zero or a negative integer")


@dataclass(frozen=True)
class EvalResult:
    """Value of a series evaluation plus accounting.

    ``abs_error_estimate`` is the a-posteriori truncation bound from the
    stopping rule (twice the first neglected term).  ``precision_bits`` is
    53 for the double-precision path and the escalated width otherwise.
    """

    value: float
    abs_error_estimate: float
    terms_used: int
    precision_bits: int


def pochhammer(a, k):
    """Rising factorial a (a+1) ... (a+k-1), with the empty product = 1."""
    if k < 0:
        raise InvalidParams(f"pochhammer needs k >= 0, got {k}")
    out = 1.0
    for i in range(int(k)):
        out *= a + i
    return out


def _cancel_common(a, b):
    """Remove parameter pairs that appear in both a and b.

    Repeated parameters cancel exactly in (a)_k / (b)_k, so dropping them
    shortens the series and avoids spurious degeneracy errors when a
    cancelled denominator entry would otherwise be illegal.
    """
    b_left = list(b)
    a_out = []
    for ai in a:
        if ai in b_left:
            b_left.remove(ai)
        else:
            a_out.append(ai)
    return tuple(sorted(a_out)), tuple(sorted(b_left))


def _sum_float(a, b, z, tol):
    """Double-precision series pass.

    Returns (sum, err_bound, terms, max_abs_term, converged); ``converged``
    is False when the term cap was hit or a value became non-finite.
    """
    s = 1.0
    term = 1.0
    max_term = 1.0
    small_run = 0
    for k in range(_MAX_TERMS):
        num = 1.0
        for ai in a:
            num *= ai + k
        den = 1.0
        for bj in b:
            den *= bj + k
        term = term * num / den * z / (k + 1.0)
        if term == 0.0:
            # a numerator parameter hit zero: the series terminates exactly
            return s, 0.0, k + 2, max_term, True
        s += term
        if not math.isfinite(s):
            return s, math.inf, k + 2, math.inf, False
        at = abs(term)
        if at > max_term:
            max_term = at
        if at < tol * abs(s):
            small_run += 1
            if small_run >= 3:
                num = 1.0
                for ai in a:
                    num *= ai + k + 1
                den = 1.0
                for bj in b:
                    den *= bj + k + 1
                nxt = abs(term * num / den * z / (k + 2.0))
                if 2.0 * nxt < tol * abs(s):
                    return s, 2.0 * nxt, k + 2, max_term, True
        else:
            small_run = 0
    return s, math.inf, _MAX_TERMS, max_term, False


def _sum_mp(a, b, z, tol, bits):
    """Big-float series pass at the given precision.

    Parameters are lifted to mpf once and all index shifts happen in mpf
    arithmetic, which is exact; see the module docstring for why.
    """
    with _MP_LOCK, mpmath.workprec(bits):
        am = [mpmath.mpf(x) for x in a]
        bm = [mpmath.mpf(x) for x in b]
        zm = mpmath.mpf(z)
        tolm = mpmath.mpf(tol)
        s = mpmath.mpf(1)
        term = mpmath.mpf(1)
        max_term = mpmath.mpf(1)
        small_run = 0
        for k in range(_MAX_TERMS):
            num = mpmath.mpf(1)
            for ai in am:
                num *= ai + k
            den = mpmath.mpf(1)
            for bj in bm:
                den *= bj + k
            term = term * num / den * zm / (k + 1)
            if term == 0:
                return s, mpmath.mpf(0), k + 2, max_term, True
            s += term
            at = abs(term)
            if at > max_term:
                max_term = at
            if at < tolm * abs(s):
                small_run += 1
                if small_run >= 3:
                    num = mpmath.mpf(1)
                    for ai in am:
                        num *= ai + k + 1
                    den = mpmath.mpf(1)
                    for bj in bm:
                        den *= bj + k + 1
                    nxt = abs(term * num / den * zm / (k + 2))
                    if 2 * nxt < tolm * abs(s):
                        return s, 2 * nxt, k + 2, max_term, True
            else:
                small_run = 0
    return s, mpmath.mpf(0), _MAX_TERMS, max_term, False


def _bits_first_guess(p, q, z):
    # generic magnitude bound for the largest term of a p<=q series:
    # log10 max|term| ~ (q+1-p) * |z|^(1/(q+1-p)) / ln 10
    depth = max(q + 1 - p, 1)
    log10_peak = depth * abs(z) ** (1.0 / depth) / math.log(10.0)
    return 64 + math.ceil(3.33 * max(log10_peak, 9.0))


@lru_cache(maxsize=200_000)
def _pfq_reduced(a, b, z, tol):
    """Evaluate the series for already-cancelled parameter tuples."""
    if len(a) == len(b) + 1 and abs(z) >= 1.0:
        raise NonConvergent(
            f"p = q + 1 series diverges for |z| >= 1 (z = {z})")
    if z == 0.0:
        return EvalResult(1.0, 0.0, 1, 53)

    s, err, terms, max_term, converged = _sum_float(a, b, z, tol)
    if converged and s != 0.0:
        ratio = max_term / abs(s)
        if ratio <= ESCALATION_RATIO:
            return EvalResult(s, err, terms, 53)
        bits = 64 + math.ceil(3.33 * math.log10(ratio))
    else:
        bits = _bits_first_guess(len(a), len(b), z)

    # the first bit-width estimate comes from a possibly corrupted float
    # sum; re-sum until the width implied by the accurate ratio is covered
    for _ in range(6):
        sm, errm, terms, max_term_m, converged = _sum_mp(a, b, z, tol, bits)
        if not converged:
            raise NonConvergent(
                f"series did not converge within {_MAX_TERMS} terms (z = {z})")
        if sm == 0:
            return EvalResult(0.0, float(errm), terms, bits)
        need = 64 + math.ceil(3.33 * float(mpmath.log(max_term_m / abs(sm), 10)))
        if need <= bits:
            return EvalResult(float(sm), float(errm), terms, bits)
        bits = need + 16
    raise NonConvergent(f"precision escalation failed to settle (z = {z})")


def _check_tol(tol):
    if not (_TOL_RANGE[0] <= tol <= _TOL_RANGE[1]):
        raise InvalidParams(f"target_rel_tol {tol} outside [1e-15, 1e-6]")


def pfq(params, z, target_rel_tol=DEFAULT_REL_TOL):
    """Evaluate pFq(a; b; z) for real z.

    Parameters
    ----------
    params : PfqParams
        Parameter vectors; common entries of a and b are cancelled before
        summation.
    z : float
        Argument.  For p = q + 1 only |z| < 1 is accepted.
    target_rel_tol : float
        Truncation target in [1e-15, 1e-6]; the stopping rule requires
        three consecutive terms below it and bounds the tail by twice the
        first neglected term.

    Returns
    -------
    EvalResult

    Raises
    ------
    NonConvergent
        If p = q + 1 and |z| >= 1, or the term cap is exhausted.
    InvalidParams
        From parameter validation.
    """
    _check_tol(target_rel_tol)
    a, b = _cancel_common(params.a, params.b)
    return _pfq_reduced(a, b, float(z), float(target_rel_tol))


def pfq_minus_one(params, z, target_rel_tol=DEFAULT_REL_TOL):
    """Evaluate pFq(a; b; z) - 1 without subtractive cancellation.

    Uses the identity

        pFq(a; b; z) - 1 = (prod a / prod b) * z
                           * p+1Fq+1(1, a+1; 2, b+1; z),

    which keeps full relative accuracy for z near 0 where the direct
    subtraction would lose it.
    """
    if z == 0.0:
        return EvalResult(0.0, 0.0, 1, 53)
    coeff = 1.0
    for ai in params.a:
        coeff *= ai
    for bj in params.b:
        coeff /= bj
    coeff *= z
    shifted = PfqParams((1.0,) + tuple(x + 1.0 for x in params.a),
                        (2.0,) + tuple(x + 1.0 for x in params.b))
    inner = pfq(shifted, z, target_rel_tol)
    return EvalResult(coeff * inner.value,
                      abs(coeff) * inner.abs_error_estimate,
                      inner.terms_used, inner.precision_bits)


def merge_linear_combination(c, d, params, z, target_rel_tol=DEFAULT_REL_TOL):
    """Evaluate c * p+1Fq+1(1, a; 2, b; z) + d * pFq(a; b; z) as one series.

    The combination collapses to

        (c + d) * p+2Fq+2(1, (c+2d)/d, a; 2, (c+d)/d, b; z).

    Requires d != 0 and (c+d)/d not a nonpositive integer (that entry
    lands in the denominator parameters).
    """
    if d == 0:
        raise InvalidParams("merge_linear_combination requires d != 0")
    top = (c + 2.0 * d) / d
    bottom = (c + d) / d
    if _is_nonpositive_integer(bottom):
        raise InvalidParams(
            f"(c+d)/d = {bottom} is a nonpositive integer; the merged "
            "series has a degenerate denominator parameter")
    merged = PfqParams((1.0, top) + params.a, (2.0, bottom) + params.b)
    inner = pfq(merged, z, target_rel_tol)
    scale = c + d
    return EvalResult(scale * inner.value,
                      abs(scale) * inner.abs_error_estimate,
                      inner.terms_used, inner.precision_bits)


def f_form_derivatives(params, z, target_rel_tol=DEFAULT_REL_TOL):
    """First and second derivatives of f(z) = z * pFq(a; b; z).

    Term-wise differentiation gives

        f'(z)  = p+1Fq+1(2, a; 1, b; z)
        f''(z) = (prod a' / prod b') * p+1Fq+1(a'+1; b'+1; z)

    with a' = (2, a) and b' = (1, b).

    Returns
    -------
    (f, f_prime, f_double_prime) : tuple of float
    """
    f = z * pfq(params, z, target_rel_tol).value
    a1 = (2.0,) + params.a
    b1 = (1.0,) + params.b
    fp = pfq(PfqParams(a1, b1), z, target_rel_tol).value
    coeff = 1.0
    for ai in a1:
        coeff *= ai
    for bj in b1:
        coeff /= bj
    fpp = coeff * pfq(PfqParams(tuple(x + 1.0 for x in a1),
                                tuple(x + 1.0 for x in b1)),
                      z, target_rel_tol).value
    return f, fp, fpp
