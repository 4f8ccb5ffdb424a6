"""Synthetic best-subset-selection instances and their reduction to CCQO.

Rows of ``X`` are drawn from ``N(0, Sigma)`` with equicorrelation ``rho``,
then every column is centred and scaled to unit l2-norm. The noise variance is
set from the signal-to-noise ratio ``SNR = ||X beta0||^2 / sigma^2`` using the
normalized ``X``. Three coefficient patterns are available:

1. ones at ``k0`` equally spaced indices,
2. ones at the first ``k0`` indices,
3. a random ``k0``-subset carrying random integers in 1..5.

Each of X, the example-3 draw and the noise uses its own child stream of
``numpy.random.SeedSequence(seed)``, so instances are reproducible bit-for-bit
on one platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import qp
from .errors import DegenerateBox, InvalidShape
from .qp import QuadraticObjective, SearchBox

SCHEMA_VERSION = 1

# type -> (p, n for OD, n for UD)
SHAPES = {
    "small-1": (20, 100, 10),
    "small-2": (40, 200, 20),
    "small-3": (60, 300, 30),
    "small-4": (80, 400, 40),
    "medium-1": (200, 1000, 100),
    "medium-2": (300, 1000, 100),
    "medium-3": (400, 2000, 100),
    "medium-4": (500, 2000, 100),
    "large-1": (800, 4000, 200),
    "large-2": (1000, 4000, 200),
    "large-3": (1500, 8000, 300),
    "large-4": (2000, 8000, 300),
}
SUITES = {s: [t for t in SHAPES if t.startswith(s)] for s in ("small", "medium", "large")}
SNR_VALUES = (0.05, 0.5, 1.0, 5.0)
OLS_BOUND = 1e8


@dataclass(frozen=True)
class CovarianceSpec:
    p: int
    rho: float = 0.8

    def matrix(self) -> np.ndarray:
        if not 0 <= self.rho < 1:
            raise ValueError("rho must lie in [0, 1)")
        S = np.full((self.p, self.p), self.rho)
        np.fill_diagonal(S, 1.0)
        return S


@dataclass
class RegressionInstance:
    X: np.ndarray
    y: np.ndarray
    k: int
    k0: int
    beta0: np.ndarray
    snr: float
    sigma2: float
    seed: int
    label: str
    box_lower: Optional[np.ndarray] = None
    box_upper: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def objective(self) -> QuadraticObjective:
        return build_ccqo(self.X, self.y)

    def box(self) -> SearchBox:
        if self.box_lower is None:
            lo, hi = _box_for(self.X, self.y)
            self.box_lower, self.box_upper = lo, hi
        return SearchBox(self.box_lower, self.box_upper)

    def to_dict(self) -> dict:
        box = self.box()
        return {
            "schema_version": SCHEMA_VERSION,
            "label": self.label,
            "n": self.n,
            "p": self.p,
            "k": self.k,
            "k0": self.k0,
            "snr": self.snr,
            "sigma2": self.sigma2,
            "seed": self.seed,
            "X": self.X.ravel().tolist(),
            "y": self.y.tolist(),
            "beta0": self.beta0.tolist(),
            "box_lower": box.lower.tolist(),
            "box_upper": box.upper.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionInstance":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        n, p = int(d["n"]), int(d["p"])
        X = np.asarray(d["X"], dtype=float)
        if X.size != n * p:
            raise ValueError(f"X has {X.size} entries, expected n*p = {n * p}")
        return cls(
            X=X.reshape(n, p), y=np.asarray(d["y"], dtype=float), k=int(d["k"]),
            k0=int(d["k0"]), beta0=np.asarray(d["beta0"], dtype=float), snr=float(d["snr"]),
            sigma2=float(d["sigma2"]), seed=int(d["seed"]), label=str(d["label"]),
            box_lower=np.asarray(d["box_lower"], dtype=float),
            box_upper=np.asarray(d["box_upper"], dtype=float),
        )

    def save(self, path: Union[str, Path]) -> None:
        # float repr is the shortest string that round-trips exactly
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RegressionInstance":
        return cls.from_dict(json.loads(Path(path).read_text()))


def true_coefficients(example_id: int, p: int, k0: int, rng: np.random.Generator) -> np.ndarray:
    if not 1 <= k0 <= p:
        raise InvalidShape(f"need 1 <= k0 <= p, got k0={k0}, p={p}")
    beta = np.zeros(p)
    if example_id == 1:
        beta[(np.arange(k0) * p) // k0] = 1.0
    elif example_id == 2:
        beta[:k0] = 1.0
    elif example_id == 3:
        idx = rng.choice(p, size=k0, replace=False)
        beta[idx] = rng.integers(1, 6, size=k0)
    else:
        raise InvalidShape(f"example_id must be 1, 2 or 3, got {example_id}")
    return beta


def normalize_columns(X: np.ndarray) -> np.ndarray:
    X = X - X.mean(axis=0)
    return X / np.linalg.norm(X, axis=0)


def generate_custom(n: int, p: int, example_id: int, snr: float, seed: int, k0: int = 10,
                    k: int = 5, rho: float = 0.8, label: Optional[str] = None,
                    with_box: bool = True) -> RegressionInstance:
    """Instance of arbitrary size ``n x p``."""
    if n < 2 or p < 1:
        raise InvalidShape(f"need n >= 2 and p >= 1, got n={n}, p={p}")
    if snr <= 0:
        raise ValueError("snr must be positive")
    ss_x, ss_beta, ss_eps = np.random.SeedSequence(seed).spawn(3)
    L = np.linalg.cholesky(CovarianceSpec(p, rho).matrix())
    Z = np.random.default_rng(ss_x).standard_normal((n, p))
    X = normalize_columns(Z @ L.T)
    beta0 = true_coefficients(example_id, p, k0, np.random.default_rng(ss_beta))
    signal = X @ beta0
    sigma2 = float(signal @ signal) / snr
    eps = np.random.default_rng(ss_eps).normal(0.0, np.sqrt(sigma2), size=n)
    y = signal + eps
    if label is None:
        label = f"n{n}p{p}/ex{example_id}/snr{snr:g}/s{seed}"
    inst = RegressionInstance(X, y, k, k0, beta0, float(snr), sigma2, int(seed), label)
    if with_box:
        inst.box()
    return inst


def generate(shape: str, case: str, example_id: int, snr: float, seed: int, k0: int = 10,
             k: int = 5, rho: float = 0.8) -> RegressionInstance:
    """Instance of one of the tabulated shapes (e.g. ``"small-1"``, case ``"od"``/``"ud"``)."""
    if shape not in SHAPES:
        raise InvalidShape(f"unknown shape {shape!r}; known: {', '.join(SHAPES)}")
    case = case.lower()
    if case not in ("od", "ud"):
        raise InvalidShape(f"case must be 'od' or 'ud', got {case!r}")
    p, n_od, n_ud = SHAPES[shape]
    n = n_od if case == "od" else n_ud
    label = f"{shape}/{case.upper()}/ex{example_id}/snr{snr:g}/s{seed}"
    return generate_custom(n, p, example_id, snr, seed, k0=k0, k=k, rho=rho, label=label)


def build_ccqo(X, y) -> QuadraticObjective:
    """``f(b) = ||y - X b||^2`` written as ``0.5 b'Qb + q'b + c``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be n x p and y of length n")
    Q = 2.0 * (X.T @ X)
    Q = 0.5 * (Q + Q.T)
    return QuadraticObjective(Q, -2.0 * (X.T @ y), float(y @ y), check=X.shape[1] <= 500)


def initial_box(beta_hat, tau: float = 1.0) -> SearchBox:
    """``[-tau*m - |b_i|, |b_i| + tau*m]`` with ``m = max |b_i|``."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    a = np.abs(np.asarray(beta_hat, dtype=float))
    m = float(a.max()) if a.size else 0.0
    if m == 0.0:
        raise DegenerateBox("all-zero least-squares solution; use a unit box instead")
    return SearchBox(-tau * m - a, a + tau * m)


def ols_fit(X, y, box: Optional[SearchBox] = None, tol: float = qp.DEFAULT_TOL) -> np.ndarray:
    """Least-squares coefficients over ``box`` (default: a very large box).

    Started from 0, the QP solver returns the minimum-norm solution when ``X``
    is rank deficient, provided the large box does not bind.
    """
    obj = build_ccqo(X, y)
    if box is None:
        p = obj.p
        box = SearchBox(np.full(p, -OLS_BOUND), np.full(p, OLS_BOUND))
    # relative tolerance: the gradient scale grows with ||y||
    scale = max(1.0, float(np.max(np.abs(obj.q))))
    return qp.minimize_box_qp(obj, box, tol * scale).point


def _box_for(X, y, tau: float = 1.0):
    try:
        box = initial_box(ols_fit(X, y), tau)
    except DegenerateBox:
        p = np.asarray(X).shape[1]
        box = SearchBox(-np.ones(p), np.ones(p))
    return box.lower, box.upper
