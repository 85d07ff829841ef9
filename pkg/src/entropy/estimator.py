"""
Separated-set entropy estimation over sampled metric systems
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..errors import PreconditionError
from ..hyperspace.metric import hausdorff_arrays, random_continua
from ..systems.circle import MorseSmaleCircleMap, circle_distance, normalize_array

logger = logging.getLogger(__name__)

ArrayMap = Callable[[np.ndarray], np.ndarray]


@dataclass
class MetricSystem:
    """A sampled compact metric system (X, d, f).

    Points are stored along axis 0 of numpy arrays; metric compares two such
    arrays elementwise (with broadcasting).

    Attributes:
        name: Identifier used in reports
        metric: (X, Y) -> distances
        forward: f on point arrays
        sampler: (size, rng) -> point array
        inverse: f^-1 on point arrays, when f is invertible
        exact_count: (n, epsilon) -> s(n, epsilon), when a combinatorial count is known
        diameter: Upper bound on the metric
    """
    name: str
    metric: Callable[[np.ndarray, np.ndarray], np.ndarray]
    forward: ArrayMap
    sampler: Callable[[int, np.random.Generator], np.ndarray]
    inverse: Optional[ArrayMap] = None
    exact_count: Optional[Callable[[int, float], int]] = None
    diameter: float = 1.0

    def sample(self, size: int, seed: int) -> np.ndarray:
        return self.sampler(size, np.random.default_rng(seed))


def circle_system(m: MorseSmaleCircleMap) -> MetricSystem:
    return MetricSystem(
        name=f"circle_ms(k={m.pairs},A={m.amplitude},{m.orientation.value})",
        metric=circle_distance,
        forward=m.map_eval_array,
        inverse=m.map_inverse_array,
        sampler=lambda size, rng: rng.uniform(0.0, 1.0, size),
        diameter=0.5,
    )


def rotation_system(alpha: float) -> MetricSystem:
    """Rigid rotation x -> x + alpha, an isometry"""
    return MetricSystem(
        name=f"rotation(alpha={alpha})",
        metric=circle_distance,
        forward=lambda x: normalize_array(x + alpha),
        inverse=lambda x: normalize_array(x - alpha),
        sampler=lambda size, rng: rng.uniform(0.0, 1.0, size),
        diameter=0.5,
    )


def arc_system(m: MorseSmaleCircleMap) -> MetricSystem:
    """C(f) on the continua of the circle with the Hausdorff metric.

    Continua are rows (start, length); length 0 is a point and 1 the full circle.
    """
    def push(start: np.ndarray, length: np.ndarray, lift: ArrayMap) -> np.ndarray:
        s_lift = lift(start)
        new_length = np.clip(lift(start + length) - s_lift, 0.0, 1.0)
        return np.stack([normalize_array(s_lift), new_length], axis=-1)

    def reflect(x: np.ndarray) -> np.ndarray:
        start, length = x[..., 0], x[..., 1]
        return np.stack([normalize_array(-(start + length)), length], axis=-1)

    def forward(x: np.ndarray) -> np.ndarray:
        image = push(x[..., 0], x[..., 1], m.lift)
        return reflect(image) if m.reversing else image

    def inverse(x: np.ndarray) -> np.ndarray:
        x = reflect(x) if m.reversing else x
        return push(x[..., 0], x[..., 1], m.lift_inverse)

    return MetricSystem(
        name=f"arcs(k={m.pairs},A={m.amplitude},{m.orientation.value})",
        metric=lambda x, y: hausdorff_arrays(x[..., 0], x[..., 1], y[..., 0], y[..., 1]),
        forward=forward,
        inverse=inverse,
        sampler=lambda size, rng: np.stack(random_continua(rng, size), axis=-1),
        diameter=0.5,
    )


def full_shift_system(symbols: int, window: int = 32) -> MetricSystem:
    """Two-sided full shift on `symbols` symbols, truncated to indices -window..window.

    d(x, y) = 2^-m where m is the smallest |i| with x_i != y_i. The shift
    reads new[i] = old[i + 1]; symbols entering the window are 0.
    """
    if symbols < 2:
        raise PreconditionError(f"A full shift needs at least 2 symbols, got {symbols}")
    offsets = np.abs(np.arange(-window, window + 1))

    def metric(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        differ = np.asarray(x) != np.asarray(y)
        first = np.where(differ, offsets, np.inf).min(axis=-1)
        return np.power(2.0, -first)

    def shift(x: np.ndarray, direction: int) -> np.ndarray:
        out = np.roll(x, -direction, axis=-1)
        if direction > 0:
            out[..., -direction:] = 0
        else:
            out[..., :-direction] = 0
        return out

    def exact_count(n: int, epsilon: float) -> int:
        # d > epsilon iff the points differ at some |i| <= reach
        if epsilon >= 1.0:
            return 1
        reach = math.ceil(math.log2(1.0 / epsilon)) - 1
        return symbols ** (n + 2 * reach)

    return MetricSystem(
        name=f"full_shift(r={symbols})",
        metric=metric,
        forward=lambda x: shift(x, 1),
        inverse=lambda x: shift(x, -1),
        sampler=lambda size, rng: rng.integers(0, symbols, (size, 2 * window + 1)),
        exact_count=exact_count,
        diameter=1.0,
    )


def cylinder_representatives(symbols: int, n: int, window: int = 32) -> np.ndarray:
    """One point of the truncated full shift per word on positions 0..n-1, zeros elsewhere"""
    if not 1 <= n <= window + 1:
        raise PreconditionError(f"Need 1 <= n <= window + 1, got n={n}, window={window}")
    words = np.array(list(itertools.product(range(symbols), repeat=n)), dtype=int)
    points = np.zeros((len(words), 2 * window + 1), dtype=int)
    points[:, window:window + n] = words
    return points


def full_shift_greedy_check(symbols: int, ns: Sequence[int], epsilon: float = 0.5,
                            window: int = 32) -> List[Dict[str, Any]]:
    """Greedy counts on cylinder representatives against the combinatorial s(n, epsilon)"""
    sys = full_shift_system(symbols, window)
    rows = []
    for n in ns:
        result = greedy_separated(sys, cylinder_representatives(symbols, n, window), n, epsilon)
        exact = sys.exact_count(n, epsilon)
        rows.append({'n': n, 'epsilon': epsilon, 'greedy': result.count, 'exact': exact,
                     'agrees': result.count == exact})
    return rows


def _orbit_table(sys: MetricSystem, x: np.ndarray, n: int, direction: str) -> List[np.ndarray]:
    if direction not in ('forward', 'backward'):
        raise PreconditionError(f"direction must be forward or backward, got {direction!r}")
    if direction == 'backward' and sys.inverse is None:
        raise PreconditionError(f"System {sys.name} has no inverse")
    step = sys.forward if direction == 'forward' else sys.inverse
    rows = [np.asarray(x)]
    for _ in range(n - 1):
        rows.append(step(rows[-1]))
    return rows


def dn_distance(sys: MetricSystem, x, y, n: int, direction: str = 'forward'):
    """Bowen distance max_{0 <= i < n} d(f^i x, f^i y)

    Args:
        sys: Metric system
        x: Point or point array
        y: Point or point array (broadcast against x)
        n: Number of iterates, n >= 1
        direction: 'forward' iterates f, 'backward' iterates f^-1

    Returns:
        Distance (array when x or y is an array of points)
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    xs = _orbit_table(sys, np.asarray(x), n, direction)
    ys = _orbit_table(sys, np.asarray(y), n, direction)
    out = sys.metric(xs[0], ys[0])
    for a, b in zip(xs[1:], ys[1:]):
        out = np.maximum(out, sys.metric(a, b))
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class GreedyResult:
    indices: List[int]
    evaluations: int
    exhausted: bool = False

    @property
    def count(self) -> int:
        return len(self.indices)


def greedy_separated(sys: MetricSystem, samples: np.ndarray, n: int, epsilon: float,
                     budget: Optional[int] = None) -> GreedyResult:
    """Maximal (n, epsilon)-separated subset of the samples, in sample order.

    Args:
        sys: Metric system
        samples: Point array; selection order is array order
        n: Bowen length
        epsilon: Separation, pairs must satisfy d_n > epsilon
        budget: Cap on d_n evaluations

    Returns:
        GreedyResult; exhausted is set when the budget stopped the scan
    """
    table = _orbit_table(sys, samples, n, 'forward')
    selected: List[int] = []
    evaluations = 0
    for j in range(len(samples)):
        if selected:
            if budget is not None and evaluations + len(selected) > budget:
                logger.warning(f"Evaluation budget {budget} exhausted at sample {j} (n={n}, eps={epsilon})")
                return GreedyResult(selected, evaluations, exhausted=True)
            idx = np.asarray(selected)
            dist = np.zeros(idx.size)
            for row in table:
                dist = np.maximum(dist, sys.metric(row[idx], row[j:j + 1]))
            evaluations += idx.size
            if not np.all(dist > epsilon):
                continue
        selected.append(j)
    return GreedyResult(selected, evaluations)


def verify_separated(sys: MetricSystem, points: np.ndarray, n: int, epsilon: float) -> bool:
    """Re-check every pair of a separated set"""
    for i in range(1, len(points)):
        if not np.all(dn_distance(sys, points[:i], points[i:i + 1], n) > epsilon):
            return False
    return True


@dataclass
class SeparatedReport:
    system: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    extrapolated_h: Optional[float] = None
    partial: bool = False
    polynomial_growth: Optional[bool] = None
    samples: int = 0
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'system': self.system,
            'rows': self.rows,
            'extrapolated_h': self.extrapolated_h,
            'partial': self.partial,
            'polynomial_growth': self.polynomial_growth,
            'samples': self.samples,
            'seed': self.seed,
            'note': 'greedy counts are lower bounds for s(n, epsilon); zero-entropy results are evidence',
        }


def tail_slope(ns: Sequence[int], counts: Sequence[int], tail: int = 3) -> float:
    """Least-squares slope of log(count) against n over the last `tail` points"""
    ns, counts = list(ns)[-tail:], list(counts)[-tail:]
    if len(ns) == 1:
        return math.log(counts[0]) / ns[0]
    slope, _ = np.polyfit(np.asarray(ns, dtype=float), np.log(np.asarray(counts, dtype=float)), 1)
    return float(slope)


def entropy_estimate(sys: MetricSystem, eps_schedule: Sequence[float], n_schedule: Sequence[int],
                     samples: int = 2000, budget: Optional[int] = None, seed: int = 0) -> SeparatedReport:
    """Table of log(count)/n over the schedules and the extrapolated entropy.

    Args:
        sys: Metric system
        eps_schedule: Strictly decreasing epsilons
        n_schedule: Strictly increasing Bowen lengths
        samples: Sample size drawn once from the seeded sampler
        budget: Total d_n evaluations allowed; later rows are skipped once spent
        seed: Sampler seed

    Returns:
        SeparatedReport
    """
    eps_schedule, n_schedule = list(eps_schedule), list(n_schedule)
    if not eps_schedule or not n_schedule:
        raise PreconditionError("Schedules must be nonempty")
    if any(b >= a for a, b in zip(eps_schedule, eps_schedule[1:])):
        raise PreconditionError(f"epsilon schedule must decrease: {eps_schedule}")
    if any(b <= a for a, b in zip(n_schedule, n_schedule[1:])) or n_schedule[0] < 1:
        raise PreconditionError(f"n schedule must be positive and increasing: {n_schedule}")

    logger.info(f"Estimating entropy of {sys.name}: eps={eps_schedule}, n={n_schedule}, samples={samples}")
    points = sys.sample(samples, seed) if sys.exact_count is None else None
    report = SeparatedReport(sys.name, samples=samples, seed=seed)
    spent = 0

    for epsilon in eps_schedule:
        for n in n_schedule:
            if sys.exact_count is not None:
                count, method = sys.exact_count(n, epsilon), 'exact'
            else:
                remaining = None if budget is None else budget - spent
                if remaining is not None and remaining <= 0:
                    report.partial = True
                    continue
                result = greedy_separated(sys, points, n, epsilon, remaining)
                spent += result.evaluations
                if result.exhausted:
                    report.partial = True
                    continue
                count, method = result.count, 'greedy'
            report.rows.append({'n': n, 'epsilon': epsilon, 'count': count, 'method': method,
                                'estimate': math.log(count) / n})

    slopes, growth_ok = [], True
    for epsilon in eps_schedule:
        rows = [row for row in report.rows if row['epsilon'] == epsilon]
        if not rows:
            continue
        slopes.append(tail_slope([row['n'] for row in rows], [row['count'] for row in rows]))
        base = rows[0]['count']
        growth_ok = growth_ok and all(row['count'] <= base * row['n'] ** 2 for row in rows)
    report.extrapolated_h = max(slopes) if slopes else None
    report.polynomial_growth = growth_ok if slopes else None

    logger.info(f"Entropy estimate for {sys.name}: h~{report.extrapolated_h} (partial={report.partial})")
    return report
