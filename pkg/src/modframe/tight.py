"""Closest-tight-frame machinery for frames of complex Hilbert spaces.

Vectors are rows of a k x n array. The analysis map T sends x to the
coefficient sequence (<x, x_j>)_j, so T = conj(vectors) as a matrix, the
synthesis map is its adjoint, and T* T = sum_j x_j x_j^* is the usual
positive frame operator with the frame bounds as its extreme nonzero
eigenvalues. Following the source convention for this family of results,
``S`` below always denotes the INVERSE, S = pinv(T* T) on the span.

Two closeness measures are computed in closed form:

* quadratic closeness c(y, x): the smallest constant C with
  ``||sum c_i (x_i - y_i)|| <= C ||sum c_i y_i||`` for every coefficient
  vector; finite exactly when ker of y's synthesis is contained in ker of
  the difference synthesis, in which case it is the operator norm of the
  difference synthesis composed with the pseudoinverse of y's synthesis;
* nearness d(x, y) = log(max(c(x,y), c(y,x)) + 1), finite iff the frames
  are similar.

The minimizers over tight frames are the multiples of the normalized tight
frame {S^(1/2) x_i} by the arithmetic, harmonic and geometric means of
sqrt(C) and sqrt(D) (for c(y,x), c(x,y) and d respectively); the
symmetric approximation {S^(1/2) x_i} itself is the unique closest
normalized tight frame in the summed-square sense, with optimal value
certified by the Hilbert-Schmidt norm of P - |T*|; for a linearly
independent family it is the symmetric (Loewdin) orthogonalization. The
operator-norm distance between analysis maps is minimized among positive
multiples at the arithmetic mean, which is where the condition
D < (9/4) C enters as a same-span diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .errors import DimensionMismatch, NotABasis, NotAFrame

__all__ = [
    "HilbertFrame",
    "DistanceReport",
    "BalanMinimizers",
    "SymmetricApproximation",
    "TightMultiple",
    "quadratic_closeness",
    "nearness",
    "balan_minimizers",
    "symmetric_approximation",
    "loewdin_orthogonalization",
    "closest_tight_multiple",
    "example_56_family",
    "example_56_frame",
    "sampled_closeness",
]

KERNEL_TOL = 1e-8


class HilbertFrame:
    """Finite frame of (a subspace of) C^n given by k row vectors."""

    __slots__ = ("vectors",)

    def __init__(self, vectors):
        v = np.asarray(vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise DimensionMismatch("vectors must form a k x n array")
        v = np.array(v)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    def __setattr__(self, name, value):
        raise AttributeError("HilbertFrame is immutable")

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def analysis(self) -> np.ndarray:
        """The k x n matrix of x -> (<x, x_j>)_j."""
        return self.vectors.conj()

    def synthesis(self) -> np.ndarray:
        """Adjoint of the analysis map: c -> sum_j c_j x_j, an n x k matrix."""
        return self.vectors.T

    def gram_operator(self) -> np.ndarray:
        """T* T = sum_j x_j x_j^*, the positive frame operator."""
        t = self.analysis()
        g = t.conj().T @ t
        return (g + g.conj().T) / 2.0

    def bounds(self, tol: float = 1e-12):
        """Optimal frame bounds: extreme nonzero eigenvalues of T* T."""
        w, _ = mc.eig_hermitian(self.gram_operator())
        top = max(w[-1], 0.0) if len(w) else 0.0
        keep = w > tol * max(top, 1.0)
        if not keep.any():
            raise NotAFrame("all vectors vanish")
        nz = w[keep]
        return float(nz[0]), float(nz[-1])

    def rank(self, tol: float = 1e-12) -> int:
        w, _ = mc.eig_hermitian(self.gram_operator())
        top = max(w[-1], 0.0) if len(w) else 0.0
        return int((w > tol * max(top, 1.0)).sum())

    def inverse_frame_operator_root(self):
        """S^(1/2) with S = pinv(T* T): the tightening map on the span."""
        w, u = mc.eig_hermitian(self.gram_operator())
        top = max(w[-1], 0.0) if len(w) else 0.0
        inv = np.where(w > 1e-12 * max(top, 1.0), 1.0 / np.sqrt(np.clip(w, 1e-300, None)), 0.0)
        m = (u * inv) @ u.conj().T
        return (m + m.conj().T) / 2.0

    def apply_to_vectors(self, m) -> "HilbertFrame":
        """Frame {M x_i} for a linear map M on C^dim."""
        return HilbertFrame(self.vectors @ np.asarray(m, dtype=np.complex128).T)

    def __repr__(self):
        return f"HilbertFrame(k={self.count}, dim={self.dim})"


def _check_pair(x: HilbertFrame, y: HilbertFrame):
    if x.count != y.count or x.dim != y.dim:
        raise DimensionMismatch("frames must share the element count and the dimension")


def quadratic_closeness(x: HilbertFrame, y: HilbertFrame, kernel_tol: float = KERNEL_TOL):
    """The closeness c(y, x) of x to y; +inf when no finite constant works.

    Closed form: with Z the synthesis of the difference and W the synthesis
    of y, the value is ||Z pinv(W)|| provided ker W is contained in ker Z;
    a coefficient vector annihilating y but not the difference certifies
    +inf.
    """
    _check_pair(x, y)
    z = x.synthesis() - y.synthesis()
    w = y.synthesis()
    w_pinv = mc.pinv(w, rank_tol=1e-12)
    # kernel containment: Z restricted to ker(W) must vanish
    leak = mc.op_norm(z - (z @ w_pinv) @ w)
    scale = 1.0 + mc.op_norm(z)
    if leak > kernel_tol * scale:
        return math.inf
    return float(mc.op_norm(z @ w_pinv))


@dataclass(frozen=True)
class DistanceReport:
    c_yx: float
    c_xy: float
    d: float

    def to_dict(self):
        return {"c_yx": self.c_yx, "c_xy": self.c_xy, "d": self.d}


def nearness(x: HilbertFrame, y: HilbertFrame) -> DistanceReport:
    """Both closeness values and d(x, y) = log(max(c(x,y), c(y,x)) + 1)."""
    c_yx = quadratic_closeness(x, y)
    c_xy = quadratic_closeness(y, x)
    m = max(c_yx, c_xy)
    d = math.inf if math.isinf(m) else math.log(m + 1.0)
    return DistanceReport(c_yx=c_yx, c_xy=c_xy, d=d)


@dataclass(frozen=True)
class BalanMinimizers:
    """The three closest tight frames and the minima they achieve."""

    arithmetic: HilbertFrame     # minimizes c(y, x)
    harmonic: HilbertFrame       # minimizes c(x, y)
    geometric: HilbertFrame      # minimizes d(x, y)
    min_closeness: float         # (sqrt D - sqrt C) / (sqrt D + sqrt C)
    min_nearness: float          # (log D - log C) / 4
    multipliers: tuple[float, float, float]
    bounds: tuple[float, float]


def balan_minimizers(x: HilbertFrame) -> BalanMinimizers:
    """Tight frames at minimal distance from x, one per measure.

    All three are multiples of the normalized tight frame {S^(1/2) x_i}; the
    multipliers are the arithmetic, harmonic and geometric means of sqrt(C)
    and sqrt(D).
    """
    c, d = x.bounds()
    root = x.inverse_frame_operator_root()
    base = x.apply_to_vectors(root)
    sc, sd = math.sqrt(c), math.sqrt(d)
    arith = (sc + sd) / 2.0
    harm = 2.0 * sc * sd / (sc + sd)
    geom = math.sqrt(sc * sd)
    return BalanMinimizers(
        arithmetic=HilbertFrame(arith * base.vectors),
        harmonic=HilbertFrame(harm * base.vectors),
        geometric=HilbertFrame(geom * base.vectors),
        min_closeness=(sd - sc) / (sd + sc),
        min_nearness=(math.log(d) - math.log(c)) / 4.0,
        multipliers=(arith, harm, geom),
        bounds=(c, d),
    )


@dataclass(frozen=True)
class SymmetricApproximation:
    frame: HilbertFrame
    certificate: float           # ||P - |T*|||_HS, the optimal summed-square root
    summed_square: float         # sum_j ||S^(1/2) x_j - x_j||^2
    tight_defect: float
    same_span_guaranteed: bool   # D < (9/4) C diagnostic, no further claim


def symmetric_approximation(x: HilbertFrame) -> SymmetricApproximation:
    """The closest normalized tight frame {S^(1/2) x_i} in summed squares.

    The optimum is certified by the Hilbert-Schmidt identity
    ``sum_j ||S^(1/2) x_j - x_j||^2 = ||P - |T*|||_HS^2`` with P the
    orthogonal projection onto the range of the analysis map.
    """
    c, d = x.bounds()
    root = x.inverse_frame_operator_root()
    out = x.apply_to_vectors(root)

    t = x.analysis()
    u, s, v = mc.svd(t)
    cut = 1e-12 * s.max(initial=0.0)
    keep = s > cut
    p = u[:, keep] @ u[:, keep].conj().T
    mod_t_star = (u * s) @ u.conj().T         # |T*| = (T T*)^(1/2)
    certificate = mc.hs_norm(p - mod_t_star)

    summed = float(np.sum(np.abs(out.vectors - x.vectors) ** 2))
    tg = out.gram_operator()
    span = v[:, keep] @ v[:, keep].conj().T   # projection onto the span of x
    tight_defect = float(mc.op_norm(tg - span))
    return SymmetricApproximation(
        frame=out,
        certificate=float(certificate),
        summed_square=summed,
        tight_defect=tight_defect,
        same_span_guaranteed=bool(d < 2.25 * c),
    )


def loewdin_orthogonalization(x: HilbertFrame) -> HilbertFrame:
    """Symmetric orthogonalization of a linearly independent family.

    For a basis of its span the symmetric approximation is orthonormal and
    coincides with the unitary polar factor of the basis matrix.
    """
    if x.rank() < x.count:
        raise NotABasis("vectors are linearly dependent")
    return symmetric_approximation(x).frame


@dataclass(frozen=True)
class TightMultiple:
    multiplier: float
    frame: HilbertFrame
    distance: float              # ||T_lambda - T_x|| at the optimum
    eigenvalue_form: float       # max_j |lambda - mu_j| over the spectrum of S^(-1/2)
    same_span_guaranteed: bool


def closest_tight_multiple(x: HilbertFrame) -> TightMultiple:
    """Best positive multiple of {S^(1/2) x_i} in analysis-map operator norm.

    The distance to the multiple by lambda is ``max_j |lambda - mu_j|`` over
    the eigenvalues mu_j of S^(-1/2) (the singular values of the analysis
    map), minimized by the arithmetic mean of sqrt(C) and sqrt(D).
    """
    c, d = x.bounds()
    lam = (math.sqrt(c) + math.sqrt(d)) / 2.0
    root = x.inverse_frame_operator_root()
    frame = HilbertFrame(lam * (x.vectors @ root.T))
    distance = float(mc.op_norm(frame.analysis() - x.analysis()))
    w, _ = mc.eig_hermitian(x.gram_operator())
    top = max(w[-1], 0.0) if len(w) else 0.0
    mu = np.sqrt(w[w > 1e-12 * max(top, 1.0)])
    eig_form = float(np.abs(lam - mu).max())
    return TightMultiple(
        multiplier=lam,
        frame=frame,
        distance=distance,
        eigenvalue_form=eig_form,
        same_span_guaranteed=bool(d < 2.25 * c),
    )


def example_56_frame(n: int = 4) -> HilbertFrame:
    """x_1 = e_1, x_2 = 3 e_2, x_i = 2 e_i (i >= 3): bounds are (1, 9) for
    every truncation size n >= 2."""
    if n < 2:
        raise DimensionMismatch("the family needs n >= 2")
    scales = np.full(n, 2.0)
    scales[0] = 1.0
    scales[1] = 3.0
    return HilbertFrame(np.diag(scales).astype(np.complex128))


def example_56_family(phi: float, n: int = 4):
    """Phase-twisted tight competitor y(phi) and its analysis-map distance.

    y_i = 2 e_i except y_3 = 2 e^(i phi) e_3; the operator-norm distance
    ||T_x - T_y|| equals 1 on the whole phase window
    |phi| < 2 arcsin(1/4) and grows with |2 e^(i phi) - 2| = 4 |sin(phi/2)|
    outside it.
    """
    if n < 3:
        raise DimensionMismatch("the phase family needs n >= 3")
    x = example_56_frame(n)
    scales = np.full(n, 2.0 + 0.0j)
    scales[2] = 2.0 * np.exp(1j * phi)
    y = HilbertFrame(np.diag(scales))
    distance = float(mc.op_norm(x.analysis() - y.analysis()))
    return y, distance


def sampled_closeness(x: HilbertFrame, y: HilbertFrame, budget: int = 100_000,
                      rng=None, population: int = 128):
    """Stochastic maximization of the defining ratio of c(y, x).

    Test oracle: evaluates ``||sum c_i (x_i - y_i)|| / ||sum c_i y_i||`` on
    random coefficient vectors refined by an adaptive random hill climb,
    never touching the closed form. The budget counts ratio evaluations.
    """
    _check_pair(x, y)
    if rng is None:
        rng = np.random.default_rng(0)
    k = x.count
    diff = x.vectors - y.vectors            # row j = x_j - y_j
    base = y.vectors
    stacked = np.hstack([diff, base])       # one product evaluates both norms

    def ratios(cs):
        prod = cs @ stacked
        num = np.linalg.norm(prod[:, : x.dim], axis=1)
        den = np.linalg.norm(prod[:, x.dim:], axis=1)
        safe = den > 1e-14
        out = np.zeros(len(cs))
        out[safe] = num[safe] / den[safe]
        return out

    def gaussians(rows):
        g = rng.standard_normal((rows, 2 * k))
        return g[:, :k] + 1j * g[:, k:]

    evals = 0
    pop = population
    cs = gaussians(pop)
    cs /= np.linalg.norm(cs, axis=1, keepdims=True)
    best_val = ratios(cs)
    evals += pop
    step = np.full(pop, 0.5)
    while evals + pop <= budget:
        trial = cs + step[:, None] * gaussians(pop)
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        val = ratios(trial)
        evals += pop
        improved = val > best_val
        np.copyto(cs, trial, where=improved[:, None])
        np.copyto(best_val, val, where=improved)
        np.multiply(step, np.where(improved, 1.4, 0.82), out=step)
        np.clip(step, 1e-9, 2.0, out=step)
    return float(best_val.max())
