"""Builders for the operator pairs under study.

A pair is two Hermitian M-by-M matrices (A, B) obtained by truncating selfadjoint
operators to the span of the first M basis vectors.  Truncation corrupts a boundary
collar of the basis; every pair therefore carries a ``boundary_window`` marking the
trailing indices that norm measurements must mask.

Available builders:

* :func:`build_harmonic` -- position/momentum in the oscillator (Hermite) basis,
  scaled so the interior commutator is exactly ``i * lam``.
* :func:`build_commuting_grid` -- commuting multiplication operators on a square
  lattice, ordered radially.
* :func:`load_pair` -- user-supplied matrices from ``dense-complex-v1`` JSON files.

plus the 2x2 point projection :func:`bott_point`, the analytic corner matrix
:func:`build_oscillator_analytic_q` used for cross-checks, stereographic sphere
coordinates :func:`sphere_map`, and :func:`perturb` for stability experiments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import linalg
from .errors import (
    ConfigParse,
    DimensionMismatch,
    InvalidParameter,
    NonHermitianInput,
)

MATRIX_FORMAT = "dense-complex-v1"

PERTURB_KINDS = ("scalar_shift", "diagonal_decay", "random_hermitian")
PERTURB_TARGETS = ("a", "b")


@dataclass(frozen=True)
class OperatorPair:
    """Two Hermitian matrices plus truncation metadata.

    Attributes
    ----------
    a, b : ndarray
        Hermitian M-by-M matrices.
    dim : int
        M.
    basis_label : str
        Human-readable name of the basis the truncation was taken in.
    known_commutator_norm : float or None
        Analytic interior value of ``norm(AB - BA)`` when the builder knows it;
        ``None`` means downstream code must measure it (with boundary masking).
    boundary_window : int
        Number of trailing truncation-corrupted indices; all norm measurements
        mask indices ``>= dim - boundary_window``.
    """

    a: np.ndarray
    b: np.ndarray
    dim: int
    basis_label: str
    known_commutator_norm: float | None
    boundary_window: int

    def __post_init__(self):
        a = linalg.require_square(linalg.as_matrix(self.a))
        b = linalg.require_square(linalg.as_matrix(self.b))
        if a.shape != b.shape or a.shape[0] != self.dim:
            raise DimensionMismatch(
                f"pair shapes {a.shape} and {b.shape} do not match dim {self.dim}"
            )
        for name, m in (("a", a), ("b", b)):
            if linalg.hermiticity_defect(m) > linalg.HERMITIAN_TOL:
                raise NonHermitianInput(f"matrix {name} is not Hermitian to tolerance")
        if not 0 <= self.boundary_window < self.dim / 2:
            raise InvalidParameter(
                f"boundary_window {self.boundary_window} must satisfy 0 <= W < dim/2"
            )
        if self.known_commutator_norm is not None and not (
            np.isfinite(self.known_commutator_norm) and self.known_commutator_norm >= 0
        ):
            raise InvalidParameter("known_commutator_norm must be finite and >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def interior(self) -> int:
        """Number of trustworthy leading indices, ``dim - boundary_window``."""
        return self.dim - self.boundary_window


@dataclass(frozen=True)
class PerturbationSpec:
    target: str
    kind: str
    magnitude: float
    seed: int = 0

    def __post_init__(self):
        if self.target not in PERTURB_TARGETS:
            raise InvalidParameter(f"perturbation target must be one of {PERTURB_TARGETS}")
        if self.kind not in PERTURB_KINDS:
            raise InvalidParameter(f"perturbation kind must be one of {PERTURB_KINDS}")
        if not (np.isfinite(self.magnitude) and self.magnitude >= 0):
            raise InvalidParameter("perturbation magnitude must be finite and >= 0")


@dataclass(frozen=True)
class PairSpec:
    """Declarative description of a pair, as assembled from CLI flags."""

    builder: str
    lam: float = 0.01
    dim: int = 400
    grid_radius: int = 10
    scale: float = 1.0
    path_a: str | None = None
    path_b: str | None = None
    perturbations: tuple[PerturbationSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.builder not in ("harmonic", "commuting_grid", "file"):
            raise InvalidParameter(f"unknown builder {self.builder!r}")
        if self.builder == "file" and (self.path_a is None or self.path_b is None):
            raise InvalidParameter("file builder requires both matrix paths")


def build_pair(spec: PairSpec) -> OperatorPair:
    """Materialize a :class:`PairSpec`, applying its perturbations in order."""
    if spec.builder == "harmonic":
        pair = build_harmonic(spec.lam, spec.dim)
    elif spec.builder == "commuting_grid":
        pair = build_commuting_grid(spec.grid_radius, spec.scale)
    else:
        pair = load_pair(spec.path_a, spec.path_b)
    for p in spec.perturbations:
        pair = perturb(pair, p.target, p.kind, p.magnitude, p.seed)
    return pair


def _ladder(dim: int) -> np.ndarray:
    """Truncated annihilation operator: a[n, n+1] = sqrt(n+1)."""
    a = np.zeros((dim, dim), dtype=np.complex128)
    n = np.arange(dim - 1)
    a[n, n + 1] = np.sqrt(n + 1.0)
    return a


def build_harmonic(lam: float, dim: int) -> OperatorPair:
    """Oscillator pair A = sqrt(lam) * X, B = sqrt(lam) * P.

    X = (a + a*)/sqrt(2) and P = i(a* - a)/sqrt(2) are the standard tridiagonal
    position/momentum truncations with [X, P] = iI away from the last basis state,
    so the interior commutator is [A, B] = i*lam*I exactly and
    ``known_commutator_norm = lam``.  The truncation artifact lives entirely in the
    final row/column; ``boundary_window = max(1, dim // 8)``.
    """
    if not (np.isfinite(lam) and lam > 0):
        raise InvalidParameter(f"lam must be positive, got {lam}")
    if dim < 8:
        raise InvalidParameter(f"dim must be at least 8, got {dim}")
    a = _ladder(dim)
    x = (a + linalg.adjoint(a)) / np.sqrt(2.0)
    p = 1j * (linalg.adjoint(a) - a) / np.sqrt(2.0)
    s = np.sqrt(lam)
    return OperatorPair(
        a=s * x,
        b=s * p,
        dim=dim,
        basis_label="oscillator",
        known_commutator_norm=float(lam),
        boundary_window=max(1, dim // 8),
    )


def grid_points(radius: int) -> list[tuple[int, int]]:
    """Lattice points of the (2r+1)^2 square, sorted by radius then lexicographically."""
    pts = [
        (n, m)
        for n in range(-radius, radius + 1)
        for m in range(-radius, radius + 1)
    ]
    pts.sort(key=lambda nm: (nm[0] ** 2 + nm[1] ** 2, nm))
    return pts


def build_commuting_grid(radius: int, scale: float = 1.0) -> OperatorPair:
    """Commuting diagonal pair A = diag(scale*n), B = diag(scale*m) over grid points.

    Points are ordered by n^2 + m^2 ascending (lexicographic tie-break) so that a
    leading cut is radially monotone.  Shells with n^2 + m^2 > radius^2 are clipped
    by the square and form the boundary collar; every complete shell is interior.
    """
    if radius < 1:
        raise InvalidParameter(f"radius must be at least 1, got {radius}")
    if not np.isfinite(scale):
        raise InvalidParameter("scale must be finite")
    pts = grid_points(radius)
    dim = len(pts)
    a = np.diag(np.array([scale * n for n, _ in pts], dtype=np.complex128))
    b = np.diag(np.array([scale * m for _, m in pts], dtype=np.complex128))
    r2 = radius * radius
    window = sum(1 for n, m in pts if n * n + m * m > r2)
    return OperatorPair(
        a=a,
        b=b,
        dim=dim,
        basis_label=f"grid-radius-{radius}",
        known_commutator_norm=0.0,
        boundary_window=window,
    )


def build_oscillator_analytic_q(lam: float, cut: int) -> np.ndarray:
    """Closed-form corner matrix for the oscillator pair, for cross-checks.

    Returns the (2*cut)-by-(2*cut) leading principal block of the analytic
    two-by-two block decomposition: a leading scalar 1, blocks with off-diagonal
    ``sqrt(n*lam) / (2*n*lam + 1)`` and diagonals
    ``{2*(n-1)*lam / (2*(n-1)*lam + 1), 1 / (2*n*lam + 1)}`` for n = 1..cut-1, and a
    trailing scalar ``2*cut*lam / (2*cut*lam + 1)``.

    The entries follow a coupling convention that differs from
    :func:`build_harmonic`'s by a factor of 2 in ``lam``; the eigenvalue *counts*
    are convention-independent and that is what this matrix is used to cross-check.
    """
    if not (np.isfinite(lam) and lam > 0):
        raise InvalidParameter(f"lam must be positive, got {lam}")
    if cut < 2:
        raise InvalidParameter(f"cut must be at least 2, got {cut}")
    size = 2 * cut
    q = np.zeros((size, size), dtype=np.complex128)
    q[0, 0] = 1.0
    for n in range(1, cut):
        i, j = 2 * n - 1, 2 * n
        q[i, i] = 2 * (n - 1) * lam / (2 * (n - 1) * lam + 1)
        q[j, j] = 1.0 / (2 * n * lam + 1)
        coupling = np.sqrt(n * lam) / (2 * n * lam + 1)
        q[i, j] = coupling
        q[j, i] = coupling
    q[size - 1, size - 1] = 2 * cut * lam / (2 * cut * lam + 1)
    return q


def _random_unit_hermitian(dim: int, seed: int) -> np.ndarray:
    """Seeded Hermitian matrix with operator norm 1 (counter-based generator)."""
    rng = np.random.Generator(np.random.Philox([seed]))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    r = (g + linalg.adjoint(g)) / 2.0
    norm = linalg.operator_norm(r)
    if norm == 0.0:  # pragma: no cover - measure-zero event
        r = np.eye(dim, dtype=np.complex128)
        norm = 1.0
    return r / norm


def perturb(
    pair: OperatorPair,
    target: str,
    kind: str,
    magnitude: float,
    seed: int = 0,
) -> OperatorPair:
    """Additively perturb one matrix of the pair.

    ``scalar_shift`` adds ``magnitude * I`` (commutes with everything, so the known
    commutator norm survives); ``diagonal_decay`` adds ``magnitude * diag(1/(k+1))``;
    ``random_hermitian`` adds ``magnitude * R`` with R a seeded random Hermitian
    matrix of unit norm.  Randomness uses a counter-based generator keyed only by
    ``seed``, so results do not depend on thread scheduling.  For the two
    non-scalar kinds the analytic commutator value no longer applies and
    ``known_commutator_norm`` is dropped.
    """
    spec = PerturbationSpec(target=target, kind=kind, magnitude=magnitude, seed=seed)
    if spec.magnitude == 0.0:
        return pair
    dim = pair.dim
    if spec.kind == "scalar_shift":
        delta = spec.magnitude * np.eye(dim, dtype=np.complex128)
        known = pair.known_commutator_norm
    elif spec.kind == "diagonal_decay":
        delta = spec.magnitude * np.diag(1.0 / (np.arange(dim) + 1.0)).astype(np.complex128)
        known = None
    else:
        delta = spec.magnitude * _random_unit_hermitian(dim, spec.seed)
        known = None
    if spec.target == "a":
        return replace(pair, a=pair.a + delta, known_commutator_norm=known)
    return replace(pair, b=pair.b + delta, known_commutator_norm=known)


def bott_point(z: complex) -> np.ndarray:
    """The rank-one 2x2 projection attached to a point of the plane."""
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise InvalidParameter("z must be finite")
    d = 1.0 + abs(z) ** 2
    return np.array(
        [[1.0 / d, z / d], [np.conj(z) / d, 1.0 - 1.0 / d]], dtype=np.complex128
    )


@dataclass(frozen=True)
class SphereMap:
    """Stereographic coordinates of a pair, with measured relation defects.

    ``relation_defect`` is ``norm(h1^2 + h2^2 + h3^2 - h1)`` and
    ``nonhermitian_defect`` is ``max_i norm(h_i - h_i*)``.  Both are reported as
    data; no bound is asserted.
    """

    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray
    relation_defect: float
    nonhermitian_defect: float


def sphere_map(pair: OperatorPair) -> SphereMap:
    """Map the pair to sphere coordinates h1, h2, h3 and measure the relation defect."""
    c = pair.a + 1j * pair.b
    eye = np.eye(pair.dim, dtype=np.complex128)
    delta = eye + c @ linalg.adjoint(c)
    h1 = linalg.hpd_inverse(eye + delta)
    h2 = pair.a @ h1
    h3 = pair.b @ h1
    relation = linalg.operator_norm(h1 @ h1 + h2 @ h2 + h3 @ h3 - h1)
    nonherm = max(
        linalg.operator_norm(h - linalg.adjoint(h)) for h in (h1, h2, h3)
    )
    return SphereMap(
        h1=h1,
        h2=h2,
        h3=h3,
        relation_defect=float(relation),
        nonhermitian_defect=float(nonherm),
    )


def matrix_to_payload(m: np.ndarray) -> dict:
    """JSON-serializable document for a matrix in ``dense-complex-v1`` form."""
    m = linalg.as_matrix(m)
    entries = [
        [[float(v.real), float(v.imag)] for v in row]
        for row in m
    ]
    return {"format": MATRIX_FORMAT, "entries": entries}


def save_matrix(m: np.ndarray, path) -> None:
    """Write a matrix as ``dense-complex-v1`` JSON with round-trip precision."""
    Path(path).write_text(json.dumps(matrix_to_payload(m)) + "\n")


def load_matrix(path) -> np.ndarray:
    """Read a ``dense-complex-v1`` JSON matrix file."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigParse(f"cannot read matrix file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"matrix file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MATRIX_FORMAT:
        raise ConfigParse(
            f"matrix file {path} must be a JSON object with format={MATRIX_FORMAT!r}"
        )
    entries = doc.get("entries")
    try:
        raw = np.asarray(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"matrix file {path} has malformed entries: {exc}") from exc
    if raw.ndim != 3 or raw.shape[2] != 2:
        raise ConfigParse(
            f"matrix file {path} entries must be a nested [rows][cols][re, im] array"
        )
    m = raw[..., 0] + 1j * raw[..., 1]
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix in {path} is not square: shape {m.shape}")
    return m


def load_pair(path_a, path_b, boundary_window: int | None = None) -> OperatorPair:
    """Load a pair of Hermitian matrices from two ``dense-complex-v1`` files.

    The analytic commutator norm is unknown for user-supplied pairs and is left
    unset; the boundary window defaults to ``dim // 8``.
    """
    a = load_matrix(path_a)
    b = load_matrix(path_b)
    if a.shape != b.shape:
        raise DimensionMismatch(
            f"pair dimensions differ: {a.shape} vs {b.shape}"
        )
    dim = a.shape[0]
    window = dim // 8 if boundary_window is None else boundary_window
    return OperatorPair(
        a=a,
        b=b,
        dim=dim,
        basis_label="file",
        known_commutator_norm=None,
        boundary_window=window,
    )
