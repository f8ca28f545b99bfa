"""Window construction over the golden rotation and its coded sequences.

For a rational parameter s > 1 a Borel window W is approximated by stages
W_n built from shells of 2 q_{n-1} half-open arcs of width delta_n placed
at the rotation orbit points c_k = k*alpha mod 1, q_n <= k < q_{n+1}:

    W_1 = first shell's marked arcs,
    W_n = (W_{n-1} minus unmarked shell n) union (marked shell n),

where marking follows a fixed 0/1 word whose segments contain all short
binary blocks.  The arc half-width is delta_n = alpha^(ceil(s)+[sn]+1)/2,
an exact Q(sqrt5) value; the paper-style choice alpha^s*theta_[sn]/2
leaves the field for non-integer s, and the substitution only changes
multiplicative constants, not the s/(s-1) sublevel exponent.

The shift distance d_W(h) = measure(W delta (W+h)) is exact; its sublevel
measure g(eps) = measure{h : d_W(h) <= eps} is computed either exactly
(sweeping the piecewise-linear autocorrelation of the window, feasible
while the arc-pair count is small) or through an adaptive, certified
bisection whose floating-point evaluations carry an explicit error pad.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import (
    ALPHA,
    ONE,
    PHI,
    ZERO,
    CircleIntervalSet,
    CirclePoint,
    QSqrt5,
    alpha_power,
    rotation_point,
    window_shift_distance,
)
from .distance import d1_empirical
from .errors import ResourceCapError, ValidationError
from .intervals import RationalInterval
from .scaling import ScalingReport, _slope

#: exact sublevel mode runs while (circle arcs)^2 stays below this
SUBLEVEL_PAIR_CAP = 200_000
#: stage construction cap (arc count grows like 4 q_n)
STAGE_CAP = 24
#: certified slack (absolute) for float window evaluations
FLOAT_PAD = 2e-9

_SQRT5_F = math.sqrt(5.0)


def _float_fast(x: QSqrt5) -> float:
    """Cheap float approximation; only safe as a sort key for small coords."""
    return float(x.p) + float(x.q) * _SQRT5_F


def fibonacci_numbers(n_max: int) -> list[int]:
    """q_0 = q_1 = 1, q_{n+1} = q_n + q_{n-1}."""
    q = [1, 1]
    while len(q) <= n_max:
        q.append(q[-1] + q[-2])
    return q


@dataclass(frozen=True)
class FibonacciData:
    """Convergent data of the golden rotation at index n."""

    n: int
    q: int
    p: int
    #: theta_n = |q_n alpha - p_n| = alpha^{n+1}, the approximation error
    theta: QSqrt5
    #: the orbit point c_{q_n}
    c_q: CirclePoint
    #: endpoints of the renormalization arc around 0, in the stated order
    j_lo: QSqrt5
    j_hi: QSqrt5


def fibonacci_data(n: int) -> FibonacciData:
    if n < 0:
        raise ValidationError("fibonacci_data needs n >= 0")
    qs = fibonacci_numbers(n + 1)
    q = qs[n]
    p = 0 if n == 0 else qs[n - 1]
    theta = alpha_power(n + 1)
    c_q = CirclePoint(QSqrt5.of(q) * ALPHA - p)
    if n == 0:
        j_lo, j_hi = c_q.value, c_q.value
    else:
        qs_prev = qs[n - 1]
        p_prev = 0 if n == 1 else qs[n - 2]
        c_prev = CirclePoint(QSqrt5.of(qs_prev) * ALPHA - p_prev)
        if n % 2 == 0:
            j_lo, j_hi = c_prev.value, c_q.value
        else:
            j_lo, j_hi = c_q.value, c_prev.value
    return FibonacciData(n=n, q=q, p=p, theta=theta, c_q=c_q, j_lo=j_lo, j_hi=j_hi)


def omega_sequence(n_max: int) -> np.ndarray:
    """A 0/1 word whose segment [q_n, q_{n+1}) lists all blocks of length n//4.

    Within each segment the 2^(n//4) blocks are concatenated in
    lexicographic order and the remainder is zero-padded; the feasibility
    inequality (n//4) * 2^(n//4) <= q_{n-1} guarantees the room.
    """
    if n_max < 1:
        raise ValidationError("omega_sequence needs n_max >= 1")
    q = fibonacci_numbers(n_max + 1)
    bits = np.zeros(q[n_max + 1], dtype=np.uint8)
    for n in range(1, n_max + 1):
        length = n // 4
        if length == 0:
            continue
        seg = []
        for v in range(1 << length):
            seg.extend((v >> (length - 1 - j)) & 1 for j in range(length))
        room = q[n + 1] - q[n]
        if len(seg) > room:
            raise ValidationError(f"block budget exceeded in segment {n}")
        bits[q[n] : q[n] + len(seg)] = seg
    return bits


def segment_has_all_blocks(bits: np.ndarray, start: int, stop: int, length: int) -> bool:
    """Check the defining property of one omega segment."""
    if length == 0:
        return True
    seen = set()
    seg = bits[start:stop]
    for i in range(len(seg) - length + 1):
        seen.add(tuple(int(b) for b in seg[i : i + length]))
    return len(seen) == 1 << length


@dataclass(frozen=True)
class WindowStage:
    """Stage n of the window construction, with its certified tail bound."""

    s: Fraction
    stage: int
    window: CircleIntervalSet
    #: arc half-widths delta_1 .. delta_n
    deltas: tuple[QSqrt5, ...]
    omega: np.ndarray
    #: marked / unmarked shells added at this stage
    v1: CircleIntervalSet
    v0: CircleIntervalSet
    #: rational bound on measure(W delta W_n) for the limit window W
    tail_bound: Fraction
    q: tuple[int, ...]

    def delta(self, m: int) -> QSqrt5:
        return self.deltas[m - 1]


def _floor_mult(s: Fraction, m: int) -> int:
    return (s.numerator * m) // s.denominator


def _stage_delta(s: Fraction, m: int) -> QSqrt5:
    return alpha_power(math.ceil(s) + _floor_mult(s, m) + 1) * Fraction(1, 2)


def _tail_bound(s: Fraction, n: int, q: list[int]) -> Fraction:
    """Certified rational bound on sum_{m>n} 2 q_{m-1} delta_m.

    Blocks of v = denominator(s) consecutive terms decay by the exact
    ratio alpha^{u-v} (u = numerator), since [s(m+v)] = [sm] + u and
    q_{a+b} <= q_a phi^{b+1}; a few terms are summed explicitly first.
    """
    u, v = s.numerator, s.denominator
    k_explicit = 2 * v
    need = n + k_explicit + v + 2
    while len(q) <= need:
        q.append(q[-1] + q[-2])

    def g(m: int) -> QSqrt5:
        return alpha_power(math.ceil(s) + _floor_mult(s, m) + 1) * q[m - 1]

    total = ZERO
    for m in range(n + 1, n + k_explicit + 1):
        total = total + g(m)
    rho = alpha_power(u - v)
    block = ZERO
    for m in range(n + k_explicit + 1, n + k_explicit + v + 1):
        block = block + g(m)
    total = total + block * PHI / (ONE - rho)
    return total.enclosure().hi


def window_stages(s, n_max: int) -> list[WindowStage]:
    """Stages 1..n_max of the window construction for parameter s in (1, 8]."""
    s = Fraction(s)
    if not (1 < s <= 8):
        raise ValidationError("the window parameter must be a rational in (1, 8]")
    if n_max < 1 or n_max > STAGE_CAP:
        raise ResourceCapError(f"stage must lie in 1..{STAGE_CAP}")
    q = fibonacci_numbers(n_max + 1)
    omega = omega_sequence(n_max)
    c = [CirclePoint(ZERO)]
    for _ in range(q[n_max + 1]):
        c.append(c[-1] + ALPHA)
    stages = []
    window = CircleIntervalSet.empty()
    deltas = []
    for m in range(1, n_max + 1):
        delta = _stage_delta(s, m)
        deltas.append(delta)
        marked, unmarked = [], []
        for k in range(q[m], q[m + 1]):
            ck = c[k].value
            inner = (ck - delta, ck)  # the arc (c_k - delta, c_k]
            outer = (ck, ck + delta)  # the arc (c_k, c_k + delta]
            if omega[k - q[m]]:
                marked.append(inner)
                unmarked.append(outer)
            else:
                marked.append(outer)
                unmarked.append(inner)
        v1 = CircleIntervalSet.from_arcs(marked)
        v0 = CircleIntervalSet.from_arcs(unmarked)
        window = v1 if m == 1 else window.difference(v0).union(v1)
        stages.append(
            WindowStage(
                s=s,
                stage=m,
                window=window,
                deltas=tuple(deltas),
                omega=omega,
                v1=v1,
                v0=v0,
                tail_bound=_tail_bound(s, m, list(q)),
                q=tuple(q),
            )
        )
    return stages


def build_window(s, n: int) -> WindowStage:
    """The stage-n window for parameter s (stages below n are built too)."""
    return window_stages(s, n)[-1]


def overlap_index_count(s, n: int, n_prime: int) -> int:
    """Number of k in [0, q_{n'+1}) whose shifted arc meets the base arc.

    Counts k with (c_k + I_{n'}) intersecting I_n, i.e. c_k within the open
    interval (-delta_n - delta_{n'}, delta_n + delta_{n'}) around 0.
    """
    s = Fraction(s)
    if not 0 <= n <= n_prime:
        raise ValidationError("need 0 <= n <= n'")
    q = fibonacci_numbers(n_prime + 1)
    width = _stage_delta(s, n) + _stage_delta(s, n_prime)
    count = 0
    point = CirclePoint(ZERO)
    for _ in range(q[n_prime + 1]):
        v = point.value
        if v < width or (ONE - v) < width:
            count += 1
        point = point + ALPHA
    return count


# ---------------------------------------------------------------------------
# coding


def _window_float_arrays(w: CircleIntervalSet):
    if w._farrays is None:
        starts = np.array([float(a) for a, _ in w.pieces])
        ends = np.array([float(b) for _, b in w.pieces])
        flat = np.empty(2 * len(starts))
        flat[0::2] = starts
        flat[1::2] = ends
        w._farrays = (starts, ends, flat)
    return w._farrays


def code_orbit(w: CircleIntervalSet, h, k_min: int, k_max: int) -> np.ndarray:
    """Bits 1_W(h + k*alpha mod 1) for k_min <= k <= k_max.

    Positions are screened in floating point; any position within 1e-8 of
    an arc boundary (or of 0) is re-decided exactly in Q(sqrt5), so the
    output is boundary-exact despite the vectorized fast path.
    """
    if k_min > k_max:
        raise ValidationError("empty coding range")
    hv = h.value if isinstance(h, CirclePoint) else QSqrt5.of(h).mod1()
    _, _, flat = _window_float_arrays(w)
    ks = np.arange(k_min, k_max + 1, dtype=np.float64)
    pos = (float(hv) + ks * float(ALPHA)) % 1.0
    idx = np.searchsorted(flat, pos, side="left")
    bits = (idx % 2 == 1).astype(np.uint8)
    # positions too close to a boundary (or to the 0/1 seam) go exact
    gap_lo = np.abs(pos - np.concatenate([[-np.inf], flat])[idx])
    gap_hi = np.abs(np.concatenate([flat, [np.inf]])[idx] - pos)
    risky = (
        (np.minimum(gap_lo, gap_hi) < 1e-8) | (pos < 1e-8) | (pos > 1 - 1e-8)
    )
    for j in np.flatnonzero(risky):
        k = k_min + int(j)
        exact_pos = CirclePoint(hv + QSqrt5(Fraction(-k, 2), Fraction(k, 2)))
        bits[j] = 1 if w.contains(exact_pos) else 0
    return bits


def block_density_check(word, block) -> tuple[int, int | None]:
    """Occurrence count and first index of a block in a 0/1 word.

    The empty block occurs everywhere: (len(word), 0).
    """
    word = np.asarray(word, dtype=np.uint8)
    block = np.asarray(block, dtype=np.uint8)
    if len(block) == 0:
        return len(word), 0
    if len(block) > len(word):
        return 0, None
    hits = np.ones(len(word) - len(block) + 1, dtype=bool)
    for j, b in enumerate(block):
        hits &= word[j : j + len(hits)] == b
    idx = np.flatnonzero(hits)
    if len(idx) == 0:
        return 0, None
    return len(idx), int(idx[0])


def empirical_vs_exact(
    w: CircleIntervalSet, h1, h2, n_window: int
) -> tuple[float, QSqrt5, float]:
    """Finite-window coded distance against the exact window distance.

    Returns (empirical, exact, gap); the empirical average over [-n, n]
    approaches the exact value by unique ergodicity of the rotation.
    """
    if n_window < 10**3:
        raise ValidationError("empirical windows below 1e3 are meaningless here")
    h1 = h1 if isinstance(h1, CirclePoint) else CirclePoint(QSqrt5.of(h1))
    h2 = h2 if isinstance(h2, CirclePoint) else CirclePoint(QSqrt5.of(h2))
    x = code_orbit(w, h1, -n_window, n_window)
    y = code_orbit(w, h2, -n_window, n_window)
    emp = d1_empirical(x, y, n=n_window)
    exact = window_shift_distance(w, (h1 - h2).value)
    return emp, exact, abs(emp - float(exact))


# ---------------------------------------------------------------------------
# sublevel measure


def _circle_arcs(w: CircleIntervalSet) -> list[tuple[QSqrt5, QSqrt5]]:
    """Pieces as (start, length) arcs with the wrap pair joined."""
    pieces = list(w.pieces)
    if len(pieces) >= 2 and pieces[0][0].sign() == 0 and pieces[-1][1] == ONE:
        a0, b0 = pieces.pop(0)
        a_last, _ = pieces.pop()
        pieces.append((a_last, ONE + b0))  # runs through 0
    return [(a, b - a) for a, b in pieces]


def _sublevel_exact(
    w: CircleIntervalSet, eps_list: list[Fraction]
) -> list[RationalInterval]:
    """Exact sublevel measures of d_W by sweeping its breakpoint structure.

    f(h) = measure(W intersect (W+h)) is piecewise linear; each ordered arc
    pair contributes a trapezoid whose four slope events are accumulated,
    and the sweep is anchored by two direct evaluations inside the first
    event gap.  Everything stays in Q(sqrt5); the returned intervals are
    outward roundings of exact field elements.
    """
    arcs = _circle_arcs(w)
    m = len(arcs)
    if m == 0:
        return [RationalInterval.exact(1) for _ in eps_list]
    events: list[tuple[QSqrt5, int]] = []
    for ai, li in arcs:
        bi = ai + li
        for aj, lj in arcs:
            bj = aj + lj
            lmin = li if (li - lj).sign() <= 0 else lj
            k1 = (ai - bj).mod1()
            k4 = (bi - aj).mod1()
            events.append((k1, +1))
            events.append(((k1 + lmin).mod1(), -1))
            events.append(((k4 - lmin).mod1(), -1))
            events.append((k4, +1))
    # collapse to (0, 1]: slope changes at 0 act from 0+, i.e. at 1 cyclically
    events = [(p if p.sign() != 0 else ONE, d) for p, d in events]
    events.sort(key=lambda e: _float_fast(e[0]))
    # the float keys are provably order-exact at this coefficient scale,
    # but verify adjacents exactly and repair any residual misorder
    for i in range(1, len(events)):
        j = i
        while j > 0 and events[j][0] < events[j - 1][0]:
            events[j], events[j - 1] = events[j - 1], events[j]
            j -= 1
    merged: list[tuple[QSqrt5, int]] = []
    for p, d in events:
        if merged and (p - merged[-1][0]).sign() == 0:
            merged[-1] = (merged[-1][0], merged[-1][1] + d)
        else:
            merged.append((p, d))
    events = [(p, d) for p, d in merged if d != 0]
    if not events:
        events = [(ONE, 0)]
    total_w = w.measure()

    def f_direct(h: QSqrt5) -> QSqrt5:
        return w.intersection(w.translate(h)).measure()

    first = events[0][0]
    t1 = first * Fraction(1, 3)
    t2 = first * Fraction(2, 3)
    f1, f2 = f_direct(t1), f_direct(t2)
    slope = (f2 - f1) / (t2 - t1)
    f_at = f2 + slope * (first - t2)
    # sweep; segments are (pos_i, pos_{i+1}] with the slope after pos_i
    thresholds = [total_w - Fraction(e) / 2 for e in eps_list]
    order = sorted(range(len(eps_list)), key=lambda i: -float(thresholds[i]))
    thr_sorted = [thresholds[i] for i in order]
    thr_neg_f = [-float(t) for t in thr_sorted]  # ascending, for bisect
    n_thr = len(thr_sorted)
    full_bucket = [ZERO for _ in range(n_thr + 1)]
    partial = [ZERO for _ in eps_list]
    margin = 1e-5  # float-shadow error stays orders of magnitude below this

    def classify(x1, x2, fv1, fv2, flo_f, fhi_f):
        """Accumulate measure{h in (x1,x2]: f >= thr} for all thresholds."""
        # float screen: candidates needing exact checks sit in the band
        idx_above = bisect.bisect_left(thr_neg_f, -(fhi_f + margin))
        idx_full = bisect.bisect_left(thr_neg_f, -(flo_f - margin))
        lo_val, hi_val = (fv1, fv2) if (fv2 - fv1).sign() >= 0 else (fv2, fv1)
        full_from = idx_full
        for t in range(idx_above, idx_full):
            thr = thr_sorted[t]
            if thr > hi_val:
                continue
            if thr <= lo_val:
                full_from = t
                break
            # genuine crossing inside the segment; f is linear
            x_star = x1 + (thr - fv1) * (x2 - x1) / (fv2 - fv1)
            if (fv2 - fv1).sign() > 0:  # rising: mass beyond the crossing
                partial[t] = partial[t] + (x2 - x_star)
            else:
                partial[t] = partial[t] + (x_star - x1)
        full_bucket[full_from] = full_bucket[full_from] + (x2 - x1)

    pos = events[0][0]
    f_cur = f_at
    f_cur_f = _float_fast(f_cur)
    slope_cur = slope + events[0][1]
    n_ev = len(events)
    for i in range(1, n_ev + 1):
        nxt = events[i][0] if i < n_ev else events[0][0] + 1
        f_next = f_cur + slope_cur * (nxt - pos)
        f_next_f = _float_fast(f_next)
        flo_f, fhi_f = min(f_cur_f, f_next_f), max(f_cur_f, f_next_f)
        classify(pos, nxt, f_cur, f_next, flo_f, fhi_f)
        if i < n_ev:
            slope_cur = slope_cur + events[i][1]
        pos, f_cur, f_cur_f = nxt, f_next, f_next_f
    # wrap consistency: after a full cycle f must return to its start
    if (f_cur - f_at).sign() != 0:
        raise ValidationError("sublevel sweep failed its cyclic consistency check")
    out = [None] * len(eps_list)
    acc = ZERO
    for t in range(len(thr_sorted)):
        acc = acc + full_bucket[t]
        g = acc + partial[t]
        out[order[t]] = g
    acc = acc + full_bucket[len(thr_sorted)]
    for i, g in enumerate(out):
        iv = g.enclosure()
        out[i] = RationalInterval(max(Fraction(0), iv.lo), min(Fraction(1), iv.hi))
    return out


def _eval_d_float(w: CircleIntervalSet, hs: np.ndarray) -> np.ndarray:
    """Vectorized float d_W(h); model error stays far below FLOAT_PAD."""
    starts, ends, flat = _window_float_arrays(w)
    lengths = ends - starts
    lam = float(np.sum(lengths))
    # coverage cdf F(x) = measure(W intersect (0, x]) on [0, 1]
    cdf_vals = np.zeros(2 * len(starts))
    run = 0.0
    for i in range(len(starts)):
        cdf_vals[2 * i] = run
        run += lengths[i]
        cdf_vals[2 * i + 1] = run
    bps = np.concatenate([[0.0], flat, [1.0]])
    cdf = np.concatenate([[0.0], cdf_vals, [lam]])

    def f_ext(x):  # extended to [0, 2) by F(x+1) = F(x) + lam
        k = np.floor(x)
        return k * lam + np.interp(x - k, bps, cdf)

    hs = np.asarray(hs, dtype=np.float64)
    a_shift = starts[None, :] + hs[:, None]
    b_shift = ends[None, :] + hs[:, None]
    inter = np.sum(f_ext(b_shift) - f_ext(a_shift), axis=1)
    return 2.0 * (lam - inter)


def _sublevel_adaptive(
    w: CircleIntervalSet,
    eps_list: list[Fraction],
    pad: float = FLOAT_PAD,
) -> list[RationalInterval]:
    """Certified sublevel enclosures via adaptive bisection of (0, 1].

    Cells are dyadic; a cell is resolved against a level once the padded
    Lipschitz range of d_W over the cell clears the level.  Unresolved
    residue at the minimum width only ever widens the upper bounds.
    """
    n_arcs = len(_circle_arcs(w))
    if n_arcs == 0:
        return [RationalInterval.exact(1) for _ in eps_list]
    lip = 2.0 * len(w.pieces)
    eps_f = np.array([float(e) for e in eps_list])
    order = np.argsort(eps_f)
    eps_sorted = eps_f[order]
    ne = len(eps_sorted)
    hw_min = max(8 * pad / lip, 2.0**-50)
    centers = np.array([0.5])
    halfw = np.array([0.5])
    bucket_in = np.zeros(ne + 1)
    unresolved = np.zeros(ne + 1)
    while len(centers):
        d = _eval_d_float(w, centers)
        dlo = d - lip * halfw - pad
        dhi = d + lip * halfw + pad
        ii = np.searchsorted(eps_sorted, dhi, side="left")
        oo = np.searchsorted(eps_sorted, dlo, side="left")
        decided = ii <= oo
        done = decided | (halfw <= hw_min)
        for j in np.flatnonzero(done):
            widx = int(ii[j])
            bucket_in[widx] += 2 * halfw[j]
            if not decided[j]:
                unresolved[int(oo[j])] += 2 * halfw[j]
                unresolved[widx] -= 2 * halfw[j]
        todo = ~done
        c, h = centers[todo], halfw[todo] / 2
        centers = np.concatenate([c - h, c + h])
        halfw = np.concatenate([h, h])
    g_lo = np.cumsum(bucket_in[:-1])
    g_hi = g_lo + np.cumsum(unresolved[:-1])
    out = [None] * ne
    for rank, idx in enumerate(order):
        lo = Fraction(max(0.0, min(1.0, float(g_lo[rank]))))
        hi = Fraction(max(0.0, min(1.0, float(g_hi[rank]))))
        out[int(idx)] = RationalInterval(min(lo, hi), max(lo, hi))
    return out


def sublevel_masses(
    w: CircleIntervalSet,
    eps_list,
    mode: str = "auto",
    pair_cap: int = SUBLEVEL_PAIR_CAP,
) -> list[RationalInterval]:
    """Enclosures of g(eps) = measure{h : d_W(h) <= eps} for a grid."""
    eps_list = [Fraction(e) for e in eps_list]
    for e in eps_list:
        if e < 0:
            raise ValidationError("sublevel needs eps >= 0")
    arcs = len(_circle_arcs(w))
    if mode == "auto":
        mode = "exact" if arcs * arcs <= pair_cap else "adaptive"
    if mode == "exact":
        if arcs * arcs > pair_cap:
            raise ResourceCapError(
                f"{arcs * arcs} arc pairs exceed the exact sublevel cap {pair_cap}"
            )
        return _sublevel_exact(w, eps_list)
    if mode == "adaptive":
        return _sublevel_adaptive(w, eps_list)
    raise ValidationError(f"unknown sublevel mode {mode!r}")


def sublevel_mass(
    w: CircleIntervalSet,
    epsilon,
    mode: str = "auto",
    pair_cap: int = SUBLEVEL_PAIR_CAP,
) -> RationalInterval:
    return sublevel_masses(w, [epsilon], mode=mode, pair_cap=pair_cap)[0]


# ---------------------------------------------------------------------------
# the sublevel scaling exponent


def verify_p3_slope(
    s,
    stage: int,
    decades: float = 2.0,
    n_points: int = 12,
    eps_hi: Fraction | None = None,
    mode: str = "auto",
) -> ScalingReport:
    """Slope of log g(eps) against log eps over >= 2 decades at one stage.

    The expected exponent is s/(s-1).  The grid must stay inside the
    stage's resolved range: above ~10x the certified tail bound and below
    the window's gross scale; the report notes the range used.
    """
    s = Fraction(s)
    st = build_window(s, stage)
    w = st.window
    lam = float(w.measure())
    if eps_hi is None:
        eps_hi = Fraction(3 * lam / 4).limit_denominator(10**9)
    if decades < 1:
        raise ValidationError("need at least one decade of eps range")
    eps_lo_f = float(eps_hi) / 10.0**decades
    # below ~2x the tail bound the stage curve stops tracking the limit
    # window; the ceiling is the gross window scale handled by eps_hi
    floor = 2.0 * float(st.tail_bound)
    if eps_lo_f < floor:
        raise ValidationError(
            f"grid floor {eps_lo_f:.3g} is below the resolved range {floor:.3g} "
            f"at stage {stage}; raise eps or the stage"
        )
    grid = []
    for i in range(n_points):
        t = i / (n_points - 1)
        x = eps_lo_f * (float(eps_hi) / eps_lo_f) ** t
        grid.append(Fraction(x).limit_denominator(10**12))
    gs = sublevel_masses(w, grid, mode=mode)
    xs = [math.log2(float(e)) for e in grid]
    ys = [math.log2(float(g.mid)) for g in gs]
    slope, residuals = _slope(xs, ys)
    expected = float(s / (s - 1))
    return ScalingReport(
        points=list(zip(grid, gs)),
        exponent=slope,
        window=(0, len(grid)),
        residuals=residuals,
        expected=expected,
        scale_kind="sublevel",
        notes=(
            f"stage {stage}, s={s}, eps range [{eps_lo_f:.3g}, {float(eps_hi):.3g}]",
            f"resolved floor {floor:.3g} from the stage tail bound",
        ),
    )


# ---------------------------------------------------------------------------
# window export


def window_to_text(st: WindowStage) -> str:
    """Structured text export: exact (p, q) rational pairs per endpoint."""
    lines = [
        f"s {st.s}",
        f"stage {st.stage}",
        f"arcs {st.window.interval_count()}",
        f"tail-bound {st.tail_bound}",
    ]
    for a, b in st.window.pieces:
        lines.append(f"arc {a.p} {a.q} {b.p} {b.q}")
    return "\n".join(lines) + "\n"
