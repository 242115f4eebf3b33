"""H-sets on the section and rigorous covering verification.

An h-set is a parallelogram support on one side of the section,

    |N| = { c + a u + b s : a, b in [-1, 1] },

with a nominally expanding direction ``u`` and contracting direction
``s``.  ``N f-covers M`` when the image of ``|N|`` stretches across
``|M|`` "horizontally".  In M's local (a, b) coordinates the sufficient
conditions checked here are:

* every image point of ``|N|`` avoids the closed bars
  ``{|a| <= 1, |b| >= 1}`` above and below M — certified cell by cell,
  either because the cell image has ``b`` strictly inside ``(-1, 1)`` or
  because it lies strictly beyond one unstable edge (``a > 1`` or
  ``a < -1``, where the stable coordinate is unconstrained);
* the two ``a = +-1`` exit edges of N map strictly beyond M's unstable
  edges, on opposite sides (one consistent orientation, direct or
  swapped).

These imply the crossing property the chaining theorems use: any curve
through N from exit edge to exit edge maps to a curve that, between its
last crossing of one unstable edge and its next crossing of the other,
runs through M inside the stable strip.

:func:`check_cover` verifies this with interval arithmetic over an
adaptive grid of parallelogram cells.  Its verdicts are three-valued:

``verified``
    all covering conditions hold with certified clearances;
``falsified``
    a certificate that no horizontal crossing of M exists (every leaf
    cell image disjoint from M's closed unit square, or the certified
    hull of the image's unstable coordinate stops short of an exit
    edge);
``inconclusive``
    neither could be certified within the grid budget (including edge
    images that land beyond inconsistent sides, which this checker
    cannot certify either way).

The reported ``margin`` is the smallest certified unstable-edge clearance
when verified and the most negative certified clearance otherwise, so
``margin > 0`` exactly when ``outcome == "verified"``; the
``stable_clearance`` is the smallest certified distance from ``|b| = 1``
over the cells whose image can meet M's unstable range (the crossing
region).
"""

from __future__ import annotations

import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from typing import Callable, Iterable

import numpy as np

from .errors import PCR3BPError, StructureError
from .intervals import IMatrix, Interval, IVector, gauss_solve

__all__ = [
    "HSet",
    "swap_uv",
    "r_image",
    "is_r_symmetric",
    "fix_r_segment",
    "CoverReport",
    "MapEnclosure",
    "check_cover",
    "check_backcover",
    "check_cover_pointwise",
    "cone_condition",
    "cone_expansion",
    "load_bundled",
    "read_hset_file",
    "write_hset_file",
]


@dataclass(frozen=True, slots=True, eq=False)
class HSet:
    """Parallelogram h-set ``{c + a u + b s}`` on one section side."""

    name: str
    sign: int  # +1 on Theta_+, -1 on Theta_-
    center: np.ndarray  # (x, vx)
    u: np.ndarray  # expanding direction
    s: np.ndarray  # contracting direction

    def __post_init__(self):
        for field in ("center", "u", "s"):
            arr = np.asarray(getattr(self, field), dtype=np.float64)
            if arr.shape != (2,):
                raise StructureError(f"h-set {field} must be a 2-vector")
            object.__setattr__(self, field, arr)
        if self.sign not in (-1, 1):
            raise StructureError("h-set section sign must be +1 or -1")

    @property
    def frame(self) -> np.ndarray:
        """Direction matrix with columns ``u`` and ``s``."""
        return np.column_stack([self.u, self.s])

    def corner_point(self, a: float, b: float) -> np.ndarray:
        return self.center + a * self.u + b * self.s

    def local_coords(self, x: float, vx: float) -> tuple[float, float]:
        """(a, b) coordinates of a section point."""
        ab = np.linalg.solve(self.frame, np.array([x, vx]) - self.center)
        return float(ab[0]), float(ab[1])

    def local_coords_iv(self, x: Interval, vx: Interval) -> tuple[Interval, Interval]:
        """Rigorous (a, b) enclosure of a section box."""
        rhs = IVector.from_intervals([
            x - float(self.center[0]),
            vx - float(self.center[1]),
        ])
        ab = gauss_solve(self.frame, rhs)
        return ab[0], ab[1]

    def contains(self, x: float, vx: float, slack: float = 0.0) -> bool:
        a, b = self.local_coords(x, vx)
        return abs(a) <= 1.0 + slack and abs(b) <= 1.0 + slack

    def __repr__(self) -> str:
        side = "+" if self.sign > 0 else "-"
        return (
            f"HSet({self.name!r}, Theta_{side}, c={tuple(self.center)}, "
            f"u={tuple(self.u)}, s={tuple(self.s)})"
        )


def swap_uv(h: HSet) -> HSet:
    """The same support with the roles of ``u`` and ``s`` exchanged."""
    return replace(h, u=h.s.copy(), s=h.u.copy())


def r_image(h: HSet) -> HSet:
    """Image of an h-set under the reversal ``(x, vx) -> (x, -vx)``.

    The reversal exchanges expansion and contraction, so the image's
    expanding direction is the reflection of ``s`` and vice versa.
    """
    flip = np.array([1.0, -1.0])
    return HSet(
        name=f"R({h.name})",
        sign=h.sign,
        center=h.center * flip,
        u=h.s * flip,
        s=h.u * flip,
    )


def is_r_symmetric(h: HSet, rtol: float = 1e-9) -> bool:
    """Whether the reversal maps the h-set onto itself, exchanging u and s.

    Requires the center on the symmetry line and ``s = +-R(u)``.  A
    degenerate direction pair (``u`` parallel to ``s``) is never
    reversal-symmetric in this structured sense and reports False.
    """
    scale = max(np.max(np.abs(h.u)), np.max(np.abs(h.s)))
    if scale == 0.0:
        return False
    det = h.u[0] * h.s[1] - h.u[1] * h.s[0]
    if abs(det) <= rtol * scale * scale:
        return False  # degenerate parallelogram
    c_scale = max(np.max(np.abs(h.center)), scale)
    if abs(h.center[1]) > rtol * c_scale:
        return False
    r_u = h.u * np.array([1.0, -1.0])
    return bool(
        np.max(np.abs(r_u - h.s)) <= rtol * scale
        or np.max(np.abs(r_u + h.s)) <= rtol * scale
    )


def fix_r_segment(h: HSet) -> Callable[[float], tuple[np.ndarray, float]]:
    """Parameterization of ``Fix(R) = {vx = 0}`` inside the support.

    Returns ``gamma`` with ``gamma(a) = (point, b)`` where ``point`` is the
    section point ``c + a u + b s`` solving ``vx = 0``.  Requires a
    reversal-symmetric h-set (the segment then joins two opposite corners
    through the center).
    """
    if not is_r_symmetric(h):
        raise StructureError(f"{h.name} is not reversal-symmetric")
    if h.s[1] == 0.0:
        raise StructureError(
            f"{h.name} has a contracting direction tangent to the symmetry line"
        )
    ratio = -h.u[1] / h.s[1]

    def gamma(a: float) -> tuple[np.ndarray, float]:
        b = ratio * a
        return h.center + a * h.u + b * h.s, b

    return gamma


# ----------------------------------------------------------------------
# covering verification
# ----------------------------------------------------------------------

# A covering-check map evaluates the composite map on one parallelogram
# cell of the source h-set, given in the source's local (a, b)
# coordinates, and returns an enclosure of the image in the *target's
# local* (a', b') coordinates.  The adapter that wraps the actual section
# map owns the section-to-local conversion (see HSet.local_coords_iv), so
# it can exploit whatever structure its image representation has instead
# of losing correlations to an intermediate bounding box.
MapEnclosure = Callable[[Interval, Interval], tuple[Interval, Interval]]


@dataclass(slots=True)
class CoverReport:
    """Outcome of a covering check."""

    outcome: str  # "verified" | "falsified" | "inconclusive"
    margin: float
    stable_clearance: float
    grid: tuple[int, int]
    cells: int
    message: str

    @property
    def verified(self) -> bool:
        return self.outcome == "verified"

    def __str__(self) -> str:
        return (
            f"{self.outcome} (margin {self.margin:.3e}, "
            f"stable clearance {self.stable_clearance:.3e}, "
            f"grid {self.grid[0]}x{self.grid[1]}, {self.cells} cells): "
            f"{self.message}"
        )


@dataclass(slots=True)
class _Tally:
    """Clearance and certificate aggregation across cells and edge pieces.

    Besides the verification clearances, every *leaf* enclosure (cells
    and edge pieces alike) feeds the falsification certificates: the
    hull of the image's unstable coordinate and whether every leaf is
    certified disjoint from the target's closed unit square.
    """

    margin: float = math.inf
    stable: float = math.inf
    cells: int = 0
    hull_lo: float = math.inf
    hull_hi: float = -math.inf
    outside_min: float = math.inf
    all_outside: bool = True
    hull_ok: bool = True
    edge_mixed: bool = False

    def note_stable(self, clearance: float) -> None:
        self.stable = min(self.stable, clearance)

    def note_margin(self, clearance: float) -> None:
        self.margin = min(self.margin, clearance)

    def note_leaf(self, a_img: Interval, b_img: Interval) -> None:
        self.hull_lo = min(self.hull_lo, a_img.lo)
        self.hull_hi = max(self.hull_hi, a_img.hi)
        gap = max(a_img.lo - 1.0, -1.0 - a_img.hi,
                  b_img.lo - 1.0, -1.0 - b_img.hi)
        if gap > 0.0:
            self.outside_min = min(self.outside_min, gap)
        else:
            self.all_outside = False

    def note_failed(self) -> None:
        self.hull_ok = False
        self.all_outside = False

    def merge(self, other: "_Tally") -> None:
        self.margin = min(self.margin, other.margin)
        self.stable = min(self.stable, other.stable)
        self.cells += other.cells
        self.hull_lo = min(self.hull_lo, other.hull_lo)
        self.hull_hi = max(self.hull_hi, other.hull_hi)
        self.outside_min = min(self.outside_min, other.outside_min)
        self.all_outside = self.all_outside and other.all_outside
        self.hull_ok = self.hull_ok and other.hull_ok
        self.edge_mixed = self.edge_mixed or other.edge_mixed


def _split_interval(iv: Interval, allow: bool) -> list[Interval]:
    return iv.split(2) if allow and iv.width > 0.0 else [iv]


def _eval_cell(map_fn: MapEnclosure, a: Interval, b: Interval):
    """Classify one cell against the bar-avoidance condition.

    A cell is certified when its image avoids the closed bars
    ``{|a'| <= 1, |b'| >= 1}``: either ``b'`` lies strictly inside
    ``(-1, 1)`` or ``a'`` lies strictly beyond one unstable edge.
    Returns ``(verdict, a_img, b_img)`` with verdict ``ok`` or
    ``undecided``; the images are None when the map evaluation failed.
    """
    try:
        a_img, b_img = map_fn(a, b)
    except PCR3BPError:
        return "undecided", None, None
    strip = min(1.0 - b_img.hi, b_img.lo + 1.0)
    side = max(a_img.lo - 1.0, -1.0 - a_img.hi)
    if max(strip, side) > 0.0:
        return "ok", a_img, b_img
    return "undecided", a_img, b_img


def _eval_edge_piece(map_fn: MapEnclosure, a_edge: float, b: Interval):
    """Classify one exit-edge piece against the unstable edges.

    Returns ``(side, clearance, a_img, b_img)`` with side ``minus``
    (strictly beyond a' = -1), ``plus`` (strictly beyond a' = +1) or
    ``undecided``; the stable coordinate is unconstrained on exit edges.
    """
    try:
        a_img, b_img = map_fn(Interval.point(a_edge), b)
    except PCR3BPError:
        return "undecided", -math.inf, None, None
    if a_img.hi < -1.0:
        return "minus", -1.0 - a_img.hi, a_img, b_img
    if a_img.lo > 1.0:
        return "plus", a_img.lo - 1.0, a_img, b_img
    # the closer of the two exits, as a (non-positive) clearance
    return "undecided", max(a_img.lo - 1.0, -1.0 - a_img.hi), a_img, b_img


def _refine_cell(map_fn, a, b, tally, sa, sb):
    """Recursively certify bar-avoidance on one cell.

    ``sa``/``sb`` are the remaining per-axis subdivision budgets.
    Returns True (certified) or None (undecided); every leaf enclosure
    feeds the falsification certificates either way.
    """
    verdict, a_img, b_img = _eval_cell(map_fn, a, b)
    tally.cells += 1
    if verdict == "ok":
        tally.note_leaf(a_img, b_img)
        if a_img.lo <= 1.0 and a_img.hi >= -1.0:
            # crossing region: certification came from the stable strip
            tally.note_stable(min(1.0 - b_img.hi, b_img.lo + 1.0))
        return True
    if sa <= 0 and sb <= 0:
        if a_img is None:
            tally.note_failed()
        else:
            tally.note_leaf(a_img, b_img)
        return None
    result = True
    for aa in _split_interval(a, sa > 0):
        for bb in _split_interval(b, sb > 0):
            if _refine_cell(map_fn, aa, bb, tally, sa - 1, sb - 1) is None:
                result = None
    return result


def _refine_edge(map_fn, a_edge, b, tally, sb):
    """Recursively classify one exit-edge piece.

    Returns "minus"/"plus" (whole piece certified beyond that unstable
    edge) or None (undecided).  Pieces whose sub-pieces land beyond
    opposite edges are undecided too — these conditions cannot certify
    a covering for such a map, but they are no disproof either (the
    connecting image may legally pass around the target through
    ``|b'| > 1``).
    """
    side, clearance, a_img, b_img = _eval_edge_piece(map_fn, a_edge, b)
    tally.cells += 1
    if side in ("minus", "plus"):
        tally.note_margin(clearance)
        tally.note_leaf(a_img, b_img)
        return side
    if sb <= 0:
        if a_img is None:
            tally.note_failed()
        else:
            tally.note_leaf(a_img, b_img)
        return None
    sides = {
        _refine_edge(map_fn, a_edge, bb, tally, sb - 1)
        for bb in _split_interval(b, True)
    }
    if None in sides:
        return None
    if len(sides) == 1:
        return sides.pop()
    tally.edge_mixed = True
    return None


def check_cover(map_fn: MapEnclosure, source: HSet, target: HSet,
                grid: tuple[int, int] = (32, 2),
                max_grid: tuple[int, int] = (512, 16),
                workers: int = 1) -> CoverReport:
    """Verify that ``source`` f-covers ``target``.

    ``map_fn`` evaluates the map on cells of ``source`` given in
    source-local (a, b) coordinates and returns image enclosures in
    target-local (a', b') coordinates (see :data:`MapEnclosure`).  The
    grid is refined adaptively (undecided cells split in half per axis)
    from ``grid`` up to ``max_grid``.

    Certified for a ``verified`` verdict:

    * every cell image avoids the closed bars ``{|a'| <= 1, |b'| >= 1}``
      beside the target (``b'`` strictly inside ``(-1, 1)``, or ``a'``
      strictly beyond one unstable edge);
    * every piece of the two exit edges ``a = +-1`` maps strictly beyond
      an unstable edge of the target, one consistent side per edge and
      opposite sides for the two edges.

    Why that suffices: a curve through ``source`` from one exit edge to
    the other maps to a curve that starts and ends strictly beyond
    opposite unstable edges of ``target``; between its last crossing of
    the one edge and its first crossing of the other it runs through
    ``|a'| <= 1``, where bar avoidance forces ``|b'| < 1`` — a
    horizontal crossing of ``target``, which is what the covering
    composition and symmetric-orbit arguments consume.

    ``falsified`` is reported only on certificates that no horizontal
    crossing can exist: every leaf image disjoint from the target's
    closed unit square, or the certified hull of ``a'`` over all leaves
    short of an unstable edge.
    """
    na, nb = grid
    if na < 1 or nb < 1:
        raise StructureError("covering grid must be at least 1x1")
    sa = _log2_steps(na, max_grid[0])
    sb = _log2_steps(nb, max_grid[1])
    tally = _Tally()
    a_pieces = Interval(-1.0, 1.0).split(na)
    b_pieces = Interval(-1.0, 1.0).split(nb)

    cells_undecided = False

    def run_cell(ab):
        a, b = ab
        local = _Tally()
        result = _refine_cell(map_fn, a, b, local, sa, sb)
        return result, local

    cells = [(a, b) for a in a_pieces for b in b_pieces]
    for result, local in _map_maybe_parallel(run_cell, cells, workers):
        tally.merge(local)
        if result is None:
            cells_undecided = True

    edge_sides: dict[float, set] = {-1.0: set(), 1.0: set()}
    edges_undecided = False
    for a_edge in (-1.0, 1.0):
        def run_edge(b, a_edge=a_edge):
            local = _Tally()
            side = _refine_edge(map_fn, a_edge, b, local, sb)
            return side, local

        for side, local in _map_maybe_parallel(run_edge, b_pieces, workers):
            tally.merge(local)
            if side is None:
                edges_undecided = True
            else:
                edge_sides[a_edge].add(side)

    if tally.all_outside and tally.outside_min < math.inf:
        return _report(
            tally, grid, "falsified", -tally.outside_min,
            f"the image of {source.name} is certified disjoint from "
            f"{target.name}; it cannot stretch across it",
        )
    if tally.hull_ok and tally.hull_hi < 1.0:
        return _report(
            tally, grid, "falsified", tally.hull_hi - 1.0,
            f"the image of {source.name} certifiably stops short of the "
            f"a' = +1 edge of {target.name} (sup a' <= {tally.hull_hi:.6g})",
        )
    if tally.hull_ok and tally.hull_lo > -1.0:
        return _report(
            tally, grid, "falsified", -1.0 - tally.hull_lo,
            f"the image of {source.name} certifiably stops short of the "
            f"a' = -1 edge of {target.name} (inf a' >= {tally.hull_lo:.6g})",
        )
    if tally.edge_mixed or any(len(s) > 1 for s in edge_sides.values()):
        return _report(
            tally, grid, "inconclusive", 0.0,
            f"pieces of one exit edge of {source.name} land beyond opposite "
            f"edges of {target.name}; not certifiable in these frames",
        )
    if not edges_undecided and edge_sides[-1.0] == edge_sides[1.0]:
        return _report(
            tally, grid, "inconclusive", 0.0,
            f"both exit edges of {source.name} map beyond the same unstable "
            f"edge of {target.name}; not certifiable in these frames",
        )
    if cells_undecided or edges_undecided:
        return _report(
            tally, grid, "inconclusive", 0.0,
            f"{source.name} covering {target.name} undecided at the finest grid",
        )
    return _report(
        tally, grid, "verified", tally.margin,
        f"{source.name} covers {target.name}: all conditions certified",
    )


def _log2_steps(start: int, stop: int) -> int:
    steps = 0
    while start < stop:
        start *= 2
        steps += 1
    return steps


def _map_maybe_parallel(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(fn, items)
    else:
        yield from map(fn, items)


def _report(tally: _Tally, grid, outcome, margin, message) -> CoverReport:
    if not math.isfinite(margin):
        margin = 0.0
    stable = tally.stable if tally.stable != math.inf else 0.0
    return CoverReport(
        outcome=outcome,
        margin=margin,
        stable_clearance=stable,
        grid=grid,
        cells=tally.cells,
        message=message,
    )


def check_backcover(inverse_map_fn: MapEnclosure, source: HSet, target: HSet,
                    grid: tuple[int, int] = (32, 2),
                    max_grid: tuple[int, int] = (512, 16),
                    workers: int = 1) -> CoverReport:
    """Verify that ``source`` f-backcovers ``target``.

    Backcovering under ``f`` is covering under ``f^{-1}`` with the roles
    of the expanding and contracting directions exchanged on both sets:
    ``inverse_map_fn`` must evaluate ``f^{-1}`` on cells of ``target``
    given in ``swap_uv(target)``-local coordinates and return image
    enclosures in ``swap_uv(source)``-local coordinates.
    """
    return check_cover(
        inverse_map_fn, swap_uv(target), swap_uv(source), grid, max_grid, workers
    )


def check_cover_pointwise(point_map, source: HSet, target: HSet,
                          samples: int = 10_000,
                          seed: int = 0) -> CoverReport:
    """Non-rigorous covering screen by dense point sampling (degraded mode).

    ``point_map`` maps a source-local point ``(a, b)`` to a target-local
    image point, mirroring the :data:`MapEnclosure` contract with floats.
    The covering conditions of :func:`check_cover` are tested on sampled
    points only, so a positive outcome is reported as ``inconclusive`` —
    it certifies nothing — while a violated sample still reports
    ``falsified`` honestly: the sufficient conditions provably fail on
    this pair of frames (the screen makes no claim about other frames).
    Useful as a fast screen before the interval check.
    """
    rng = np.random.default_rng(seed)
    n_edge = max(16, int(math.sqrt(samples)))
    n_inner = max(samples - 2 * n_edge, 16)
    margin = math.inf
    stable = math.inf
    sides = {-1.0: set(), 1.0: set()}
    count = 0
    for _ in range(n_inner):
        a, b = rng.uniform(-1.0, 1.0, size=2)
        try:
            a_img, b_img = point_map(float(a), float(b))
        except PCR3BPError:
            continue
        count += 1
        if abs(a_img) <= 1.0:
            stable = min(stable, 1.0 - abs(b_img))
        clearance = max(1.0 - abs(b_img), abs(a_img) - 1.0)
        if clearance < 0.0:
            return CoverReport(
                "falsified", clearance,
                stable if stable != math.inf else 0.0, (0, 0), count,
                f"sampled point a={a:.3f} b={b:.3f} maps into a bar beside "
                f"{target.name} (|a'| <= 1 with |b'| >= 1)",
            )
    for a_edge in (-1.0, 1.0):
        for b in np.linspace(-1.0, 1.0, n_edge):
            try:
                a_img, _ = point_map(a_edge, float(b))
            except PCR3BPError:
                continue
            count += 1
            clearance = abs(a_img) - 1.0
            margin = min(margin, clearance)
            if clearance < 0.0:
                return CoverReport(
                    "falsified", clearance,
                    stable if stable != math.inf else 0.0, (0, 0), count,
                    "sampled exit-edge point falls short of the unstable "
                    "edges",
                )
            sides[a_edge].add(1.0 if a_img > 0 else -1.0)
    if any(len(v) > 1 for v in sides.values()) or (
        sides[-1.0] and sides[-1.0] == sides[1.0]
    ):
        return CoverReport(
            "falsified", -0.0, stable, (0, 0), count,
            "sampled exit edges do not separate consistently",
        )
    return CoverReport(
        "inconclusive", 0.0, stable if stable != math.inf else 0.0, (0, 0),
        count,
        f"{source.name} covering {target.name}: all {count} samples satisfy "
        f"the covering inequalities (pointwise screen certifies nothing)",
    )


# ----------------------------------------------------------------------
# cone conditions
# ----------------------------------------------------------------------


def cone_condition(dp_local: IMatrix, lam: float = 1.0) -> bool:
    """Check the cone condition for a local-coordinate derivative enclosure.

    With the indefinite form ``Q(a, b) = a^2 - b^2``, the condition holds
    when ``Q(Dp z) > lam Q(z)`` for all nonzero ``z``, i.e. when the
    symmetric interval matrix ``S = Dp^T J Dp - lam J`` (``J = diag(1,-1)``)
    is positive definite.  Checked by Sylvester's criterion evaluated in
    interval arithmetic, so True is a certificate.
    """
    if dp_local.shape != (2, 2):
        raise StructureError("cone condition needs a 2x2 derivative")
    m11 = dp_local.entry(0, 0)
    m12 = dp_local.entry(0, 1)
    m21 = dp_local.entry(1, 0)
    m22 = dp_local.entry(1, 1)
    s11 = m11.sqr() - m21.sqr() - lam
    s22 = m12.sqr() - m22.sqr() + lam
    s12 = m11 * m12 - m21 * m22
    if not s11.lo > 0.0:
        return False
    det = s11 * s22 - s12.sqr()
    return det.lo > 0.0


def cone_expansion(dp_local: IMatrix, lam_max: float = 1e16) -> float:
    """Certified expansion factor ``sqrt(max lam)`` of the cone condition.

    Returns 0.0 when the condition already fails at ``lam = 1``.
    """
    if not cone_condition(dp_local, 1.0):
        return 0.0
    lo, hi = 1.0, 2.0
    while hi < lam_max and cone_condition(dp_local, hi):
        lo, hi = hi, hi * hi
    for _ in range(80):
        mid = math.sqrt(lo * hi)
        if cone_condition(dp_local, mid):
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-12:
            break
    return math.sqrt(lo)


# ----------------------------------------------------------------------
# file exchange
# ----------------------------------------------------------------------


def _format_pair(v: np.ndarray) -> str:
    return f"{float(v[0])!r} {float(v[1])!r}"


def _parse_pair(text: str) -> np.ndarray:
    parts = text.split()
    if len(parts) != 2:
        raise StructureError(f"expected two floats, got {text!r}")
    return np.array([float(parts[0]), float(parts[1])])


def write_hset_file(path, hsets: Iterable[HSet]) -> None:
    """Write h-sets to the INI exchange format."""
    cp = configparser.ConfigParser()
    for h in hsets:
        cp[h.name] = {
            "section": "plus" if h.sign > 0 else "minus",
            "center": _format_pair(h.center),
            "u": _format_pair(h.u),
            "s": _format_pair(h.s),
        }
    with open(path, "w") as fh:
        fh.write("# h-set exchange file: one section per set\n")
        fh.write("# center/u/s are 'x vx' pairs on the y=0 section\n")
        cp.write(fh)


def load_bundled(name: str) -> dict[str, HSet]:
    """Load one of the h-set families shipped with the package.

    ``name`` is the file stem, e.g. ``"g_chain"`` or ``"v_chain"``.
    """
    root = resources.files("pcr3bp") / "data" / f"{name}.hset"
    with resources.as_file(root) as path:
        return read_hset_file(path)


def read_hset_file(path) -> dict[str, HSet]:
    """Read h-sets from the INI exchange format (see :func:`write_hset_file`)."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise StructureError(f"cannot read h-set file {path}")
    out: dict[str, HSet] = {}
    for name in cp.sections():
        sec = cp[name]
        side = sec.get("section", "").strip().lower()
        if side not in ("plus", "minus"):
            raise StructureError(
                f"h-set {name}: section must be 'plus' or 'minus', got {side!r}"
            )
        out[name] = HSet(
            name=name,
            sign=1 if side == "plus" else -1,
            center=_parse_pair(sec.get("center", "")),
            u=_parse_pair(sec.get("u", "")),
            s=_parse_pair(sec.get("s", "")),
        )
    return out
