"""Morse model of the wrapped strip count for a local 2-braid.

The two strands of ``s^k`` become, in the 1-jet space of the cylinder
R_a x S^1_theta, the zero section and the 1-jet of

    h(a, theta) = -eps1 G(a) cos(theta + eta_k(a)) - Htilde(|a| - U)

where ``Htilde`` only contributes for |a| > U.  Strips between the strands are
gradient lines of h, so the wrapped differential is read off from

* its three positive critical points: c0 (index 1) near a = 0 and c+- (index 2)
  at a = +-(U + x*), with H'(x*) = eps1;
* the rigid flow lines c+- -> c0 and the winding of theta along them.

Profiles
--------
``G(a) = exp(eps0 q(|a|))`` where q blends sqrt(r^2 + m^2) - sqrt(U^2 + m^2)
into r - U over [U - w, U] with a quintic smoothstep; on |a| >= U this is
exactly exp(eps0 (|a| - U)).  ``eta_k(a) = 2 pi k s((a - 3U/5)/(U/5))``.
``H'(x) = ramp(x - x1)^2`` with a C^1 ramp of width ``kink_width``.

Metric
------
Flow lines are computed for the metric ``"adapted"`` (default): the flat
metric pulled back by (a, theta) -> (a, theta + eta(a)).  The flat metric on
(a, theta) (``"euclidean"``) gives the same counts but is stiff inside the
twist region; its drift speed there scales like 1/(1 + eta'^2), so it is only
practical for |k| <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .group_algebra import LaurentBimonomial

__all__ = [
    "MorseProblem",
    "CriticalPoint",
    "Trajectory",
    "MorseError",
    "eval_h",
    "eval_grad",
    "find_critical_points",
    "count_rigid_trajectories",
    "winding_to_coefficient",
    "morse_differential",
]

TWO_PI = 2.0 * math.pi


class MorseError(RuntimeError):
    """Numerical failure of the Morse pipeline (non-convergence, degeneracy...)."""


@dataclass(frozen=True)
class MorseProblem:
    k: int = 0
    U: float = 5.0
    eps0: float = 0.1
    eps1: float = 0.5
    softening: float = 1.0
    x1: float = 1.0
    kink_width: float = 0.05
    blend_width: float = 1.0
    metric: str = "adapted"

    def __post_init__(self):
        for name in ("U", "eps0", "eps1", "softening", "x1", "kink_width", "blend_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.metric not in ("adapted", "euclidean"):
            raise ValueError(f"metric must be 'adapted' or 'euclidean', got {self.metric!r}")
        if self.kink_width >= self.x1:
            raise ValueError("kink_width must be smaller than x1")
        object.__setattr__(self, "k", int(self.k))
        a = np.linspace(1e-3, self.U + self.x_max, 4001)
        _, dG, _ = self._g(a)
        _, dGm, _ = self._g(-a)
        if not (np.all(dG > 0) and np.all(dGm < 0)):
            raise ValueError("G is not monotone on each side of 0; decrease eps0 or the blend")

    def _g(self, a):
        P = self.packed()
        out = np.array([K.g_profile(float(x), P) for x in np.atleast_1d(a)])
        return out[:, 0], out[:, 1], out[:, 2]

    def packed(self) -> np.ndarray:
        return np.array([
            float(self.k), self.U, self.eps0, self.eps1, self.softening, self.x1,
            0.5 * self.kink_width, min(self.blend_width, 0.5 * self.U),
            1.0 if self.metric == "adapted" else 0.0,
        ])

    def with_k(self, k: int) -> "MorseProblem":
        return replace(self, k=k)

    @property
    def x_star(self) -> float:
        """Root of H'(x) = eps1, found by Newton on the 1-D equation."""
        P = self.packed()
        x = self.x1 + math.sqrt(self.eps1)
        for _ in range(100):
            hp, hpp = K.h_prime(x, P)
            step = (hp - self.eps1) / hpp
            x -= step
            if abs(step) < 1e-15:
                break
        return x

    @property
    def x_max(self) -> float:
        return 2.0 * (self.x1 + math.sqrt(self.eps1))

    @property
    def window(self) -> float:
        return self.U + 3.0 * self.x_max

    def predicted_points(self) -> dict[str, tuple[float, float]]:
        xs = self.x_star
        return {
            "c0": (0.0, math.pi),
            "c-": (-(self.U + xs), math.pi),
            "c+": (self.U + xs, math.pi),
        }

    def to_dict(self) -> dict:
        return {
            "k": self.k, "U": self.U, "eps0": self.eps0, "eps1": self.eps1,
            "softening": self.softening, "x1": self.x1, "kink_width": self.kink_width,
            "blend_width": self.blend_width, "metric": self.metric,
        }


@dataclass(frozen=True)
class CriticalPoint:
    a: float
    theta: float
    value: float
    index: int
    eigenvalues: tuple[float, float]
    tier: str

    def to_dict(self) -> dict:
        return {
            "tier": self.tier, "a": _r(self.a), "theta": _r(self.theta),
            "value": _r(self.value), "index": self.index,
            "eigenvalues": [_r(e) for e in self.eigenvalues],
        }


@dataclass(frozen=True)
class Trajectory:
    """Negative gradient line from ``source`` to ``sink``.

    ``samples`` holds (a, theta) with theta lifted continuously; ``fan_size``
    is the number of fan rays in the cluster this line was picked from.
    """

    source: CriticalPoint
    sink: CriticalPoint
    samples: np.ndarray = field(repr=False)
    delta_theta: float
    fan_size: int

    @property
    def winding(self) -> int:
        return int(round(self.delta_theta / TWO_PI))

    def to_dict(self, n_samples: int = 0) -> dict:
        out = {
            "source": self.source.tier, "sink": self.sink.tier,
            "delta_theta": _r(self.delta_theta), "winding": self.winding,
            "fan_size": self.fan_size,
        }
        if n_samples:
            idx = np.unique(np.linspace(0, len(self.samples) - 1, n_samples).round().astype(int))
            out["samples"] = [[_r(a), _r(t)] for a, t in self.samples[idx]]
        return out


def _r(x: float) -> float:
    # fixed precision keeps reports byte-stable
    return float(f"{x:.10g}")


# ---------------------------------------------------------------------------
# evaluation


def eval_h(p: MorseProblem, a, theta):
    """h = h2 - h1 = -h1 at arrays of points."""
    a = np.asarray(a, dtype=float)
    theta = np.broadcast_to(np.asarray(theta, dtype=float), a.shape)
    v, _, _ = K.eval_many(a.ravel().copy(), theta.ravel().copy(), p.packed())
    return v.reshape(a.shape) if a.shape else float(v[0])


def eval_grad(p: MorseProblem, a, theta):
    """Analytic (dh/da, dh/dtheta)."""
    a = np.asarray(a, dtype=float)
    theta = np.broadcast_to(np.asarray(theta, dtype=float), a.shape)
    _, ga, gt = K.eval_many(a.ravel().copy(), theta.ravel().copy(), p.packed())
    if not a.shape:
        return float(ga[0]), float(gt[0])
    return ga.reshape(a.shape), gt.reshape(a.shape)


def fd_hessian(p: MorseProblem, a: float, theta: float, step: float = 1e-4) -> np.ndarray:
    """Hessian of h by central differences of the analytic gradient."""
    P = p.packed()
    gap = np.array(K.h_grad(a + step, theta, P))
    gam = np.array(K.h_grad(a - step, theta, P))
    gtp = np.array(K.h_grad(a, theta + step, P))
    gtm = np.array(K.h_grad(a, theta - step, P))
    H = np.column_stack([(gap - gam) / (2 * step), (gtp - gtm) / (2 * step)])
    return 0.5 * (H + H.T)


def flow_matrix(p: MorseProblem, a: float, theta: float) -> np.ndarray:
    """Linearization of the ascending flow g^-1 grad h at a critical point."""
    g11, g12, g22 = K.inverse_metric(a, p.packed())
    return np.array([[g11, g12], [g12, g22]]) @ fd_hessian(p, a, theta)


# ---------------------------------------------------------------------------
# critical points


def _cyl_dist(p1, p2) -> float:
    return math.hypot(p1[0] - p2[0], K.wrap_angle(p1[1] - p2[1]))


def _tier(p: MorseProblem, a: float) -> str:
    if a > p.U:
        return "c+"
    if a < -p.U:
        return "c-"
    return "c0"


def find_critical_points(p: MorseProblem, seed_grid: tuple[int, int] = (200, 64),
                         tol_grad: float = 1e-10, tol_degenerate: float = 1e-6,
                         merge_radius: float = 1e-4, positive_only: bool = True
                         ) -> list[CriticalPoint]:
    """Multistart damped Newton on grad h.

    Seeds form a regular grid over [-U - X_max, U + X_max] x S^1.  Converged
    points are merged within ``merge_radius``, filtered to positive values and
    classified by the eigenvalues of a central-difference Hessian.
    """
    na, nt = seed_grid
    span = p.U + p.x_max
    A, T = np.meshgrid(np.linspace(-span, span, na),
                       (np.arange(nt) + 0.5) * TWO_PI / nt, indexing="ij")
    P = p.packed()
    a_f, t_f, _, ok = K.newton_many(A.ravel().copy(), T.ravel().copy(), P,
                                    tol_grad, 200, 0.5)
    found: list[tuple[float, float]] = []
    for a, t in zip(a_f[ok], t_f[ok]):
        if abs(a) > p.window:
            continue
        t = K.wrap_angle(t) % TWO_PI
        if not any(_cyl_dist((a, t), q) < merge_radius for q in found):
            found.append((a, t))

    points = []
    for a, t in found:
        v = K.h_value(a, t, P)
        if positive_only and v <= 0:
            continue
        eig = np.linalg.eigvalsh(fd_hessian(p, a, t))
        if np.min(np.abs(eig)) < tol_degenerate:
            raise MorseError(
                f"degenerate critical point at a={a:.6g}, theta={t:.6g} (eigenvalues {eig}); "
                "take eps0 smaller or G closer to 1")
        points.append(CriticalPoint(float(a), float(t), float(v), int(np.sum(eig < 0)),
                                    (float(eig[0]), float(eig[1])), _tier(p, a)))

    if positive_only:
        for name, q in p.predicted_points().items():
            if not any(_cyl_dist((c.a, c.theta), q) < 1e-3 for c in points):
                raise MorseError(f"Newton did not converge to the predicted {name} at {q}")
    points.sort(key=lambda c: ("c-", "c0", "c+").index(c.tier) * 1e6 + c.a)
    return points


def _pick(points: list[CriticalPoint], tier: str) -> CriticalPoint:
    hits = [c for c in points if c.tier == tier]
    if len(hits) != 1:
        raise MorseError(f"expected exactly one {tier} critical point, found {len(hits)}")
    return hits[0]


# ---------------------------------------------------------------------------
# trajectories


def count_rigid_trajectories(p: MorseProblem, src: CriticalPoint, dst: CriticalPoint,
                             others: list[CriticalPoint] | None = None, n_fan: int = 720,
                             fan_radius: float = 1e-3, tol_endpoint: float = 1e-3,
                             rtol: float = 1e-9, atol: float = 1e-9,
                             t_max: float = 1e6, max_steps: int = 5_000_000
                             ) -> list[Trajectory]:
    """Rigid negative gradient lines from ``src`` (index i+1) to ``dst`` (index i).

    A fan of ``n_fan`` points on a circle of radius ``fan_radius`` around
    ``dst`` is flowed *upward* (reverse time).  Going up, the flow contracts
    onto the two branches of the stable manifold of ``dst``, so the rays
    landing within ``tol_endpoint`` of ``src`` form runs of consecutive fan
    angles that lie on one side of the stable direction.  Each such run is one
    rigid trajectory; its middle ray is re-integrated with samples and
    reversed.  Rays landing on ``others`` or leaving the window are counted as
    not arriving.
    """
    if src.index != dst.index + 1:
        raise ValueError(f"index({src.tier}) = {src.index} must be index({dst.tier}) + 1")
    P = p.packed()
    targets = [src] + [c for c in (others or []) if c is not src and c is not dst]
    tgt = np.array([[c.a, c.theta] for c in targets])
    phases = TWO_PI * (np.arange(n_fan) + 0.5) / n_fan
    a0 = dst.a + fan_radius * np.cos(phases)
    t0 = dst.theta + fan_radius * np.sin(phases)
    status, hit, _, _ = K.integrate_fan(a0, t0, P, 1.0, tgt, tol_endpoint, p.window,
                                        rtol, atol, t_max, max_steps)
    if np.any(status == K.STEP_FAILURE):
        bad = int(np.argmax(status == K.STEP_FAILURE))
        raise MorseError(f"flow step failure for fan ray {bad} around {dst.tier}")

    # side of each ray relative to the stable direction of the ascending flow at dst
    w, V = np.linalg.eig(flow_matrix(p, dst.a, dst.theta))
    order = np.argsort(w.real)
    unstable = V[:, order[-1]].real
    stable = V[:, order[0]].real
    coords = np.linalg.solve(np.column_stack([stable, unstable]),
                             np.vstack([a0 - dst.a, t0 - dst.theta]))
    side = np.sign(coords[1])
    good = (status == K.LANDED) & (hit == 0)

    runs = _cyclic_runs(good, side)
    out = []
    for run in runs:
        j = run[len(run) // 2]
        st, _, _, _, _, _, path = K.integrate_ray(a0[j], t0[j], P, 1.0, tgt, tol_endpoint,
                                                  p.window, rtol, atol, t_max, max_steps, True)
        if st != K.LANDED:
            raise MorseError("representative ray did not land on re-integration")
        path = path[::-1].copy()
        out.append(Trajectory(src, dst, path, float(path[-1, 1] - path[0, 1]), len(run)))
    return out


def _cyclic_runs(mask: np.ndarray, side: np.ndarray) -> list[list[int]]:
    """Maximal cyclic runs of consecutive indices with ``mask`` set and constant side."""
    label = np.where(mask, side, 0).astype(int)
    n = len(label)
    breaks = [i for i in range(n) if label[i] != label[i - 1]]
    if not breaks:
        return [list(range(n))] if label[0] else []
    runs = []
    for b, e in zip(breaks, breaks[1:] + [breaks[0] + n]):
        if label[b]:
            runs.append([i % n for i in range(b, e)])
    return runs


def winding_to_coefficient(t: Trajectory) -> LaurentBimonomial:
    """Winding w of theta along the line gives x^(-w) y^w."""
    frac = t.delta_theta / TWO_PI
    if abs(frac - t.winding) >= 0.25:
        raise MorseError(f"winding {frac:.3f} is not close to an integer")
    return LaurentBimonomial(-t.winding, t.winding)


@dataclass
class MorseReport:
    problem: MorseProblem
    critical_points: list[CriticalPoint]
    trajectories: dict[str, list[Trajectory]]

    def coefficients(self) -> dict[str, dict[LaurentBimonomial, int]]:
        """``{"c-": {mono: count}, "c+": {...}}`` for the differential into c0."""
        out = {}
        for tier, trajs in self.trajectories.items():
            acc: dict[LaurentBimonomial, int] = {}
            for t in trajs:
                m = winding_to_coefficient(t)
                acc[m] = acc.get(m, 0) + 1
            out[tier] = acc
        return out

    def to_dict(self, n_samples: int = 0) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "critical_points": [c.to_dict() for c in self.critical_points],
            "trajectories": [t.to_dict(n_samples) for tier in ("c-", "c+")
                             for t in self.trajectories[tier]],
        }


def morse_differential(p: MorseProblem, seed_grid=(200, 64), n_fan: int = 720,
                       tol_grad: float = 1e-10) -> MorseReport:
    """Run the full pipeline: critical points, then c- -> c0 and c+ -> c0 lines."""
    cps = find_critical_points(p, seed_grid=seed_grid, tol_grad=tol_grad)
    if len(cps) != 3:
        raise MorseError(f"expected 3 positive critical points, found {len(cps)}")
    c0, cm, cp = _pick(cps, "c0"), _pick(cps, "c-"), _pick(cps, "c+")
    if (c0.index, cm.index, cp.index) != (1, 2, 2):
        raise MorseError(f"unexpected indices c0={c0.index}, c-={cm.index}, c+={cp.index}")
    trajs = {
        "c-": count_rigid_trajectories(p, cm, c0, others=cps, n_fan=n_fan),
        "c+": count_rigid_trajectories(p, cp, c0, others=cps, n_fan=n_fan),
    }
    return MorseReport(p, cps, trajs)
