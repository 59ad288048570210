"""Matrix tuples and the symmetrized calculus ``p -> symm(p)(T)``.

``symm`` sends a monomial ``z^a`` to the average of all distinct words
containing ``a_j`` copies of ``T_j`` and extends linearly.  The words are
never enumerated: the word sum ``W(a) = sum_i T_i W(a - e_i)`` is built on
the lattice of sub-indices (see ``_backend.symm_table``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _backend
from .multipoly import MAX_TRANSFORM_DEGREE, Poly, factorial_ratio
from .polynorm import NormEstimate

MAX_DIM = 64


class TupleConstraint(enum.Enum):
    SUM_NORM = "sum"              # sum ||T_i|| <= 1
    DIAMOND = "diamond"           # ||sum z_i T_i|| <= 1 on the closed polydisk
    CONTRACTION = "contraction"   # max ||T_i|| <= 1
    COMMUTING = "commuting"       # commuting contractions


@dataclass(frozen=True)
class MatrixTuple:
    mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.mats:
            raise ValueError("a matrix tuple needs at least one matrix")
        fixed = []
        for m in self.mats:
            a = np.array(m, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
                raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
            a.setflags(write=False)
            fixed.append(a)
        dims = {a.shape[0] for a in fixed}
        if len(dims) != 1:
            raise ValueError(f"matrices have different dimensions {sorted(dims)}")
        object.__setattr__(self, "mats", tuple(fixed))

    @classmethod
    def of(cls, *mats) -> MatrixTuple:
        return cls(tuple(mats))

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def dim(self) -> int:
        return self.mats[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack(self.mats)

    def scaled(self, factor: float) -> MatrixTuple:
        return MatrixTuple(tuple(factor * m for m in self.mats))

    def __getitem__(self, i: int) -> np.ndarray:
        return self.mats[i]

    def __len__(self) -> int:
        return len(self.mats)


def _check_alpha(alpha: Sequence[int], T: MatrixTuple) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != T.n:
        raise ValueError(f"multi-index of length {len(alpha)} for a {T.n}-tuple")
    if any(a < 0 for a in alpha):
        raise ValueError("negative exponent")
    if sum(alpha) > MAX_TRANSFORM_DEGREE:
        raise ValueError(f"degree {sum(alpha)} exceeds the cap {MAX_TRANSFORM_DEGREE}")
    return alpha


def word_sum_table(T: MatrixTuple, top: Sequence[int]) -> tuple[np.ndarray, tuple[int, ...]]:
    shape = tuple(int(t) + 1 for t in top)
    return _backend.symm_table(T.stacked(), tuple(top)), shape


def symm_monomial(alpha: Sequence[int], T: MatrixTuple) -> np.ndarray:
    alpha = _check_alpha(alpha, T)
    table, shape = word_sum_table(T, alpha)
    return table[-1] * factorial_ratio(alpha)


def symm_apply(p: Poly, T: MatrixTuple) -> np.ndarray:
    if p.nvars != T.n:
        raise ValueError(f"{p.nvars}-variable polynomial applied to a {T.n}-tuple")
    out = np.zeros((T.dim, T.dim), dtype=complex)
    if len(p) == 0:
        return out
    for alpha, _ in p.items():
        _check_alpha(alpha, T)
    table, shape = word_sum_table(T, p.max_exponents())
    for alpha, c in p.items():
        out += c * factorial_ratio(alpha) * table[np.ravel_multi_index(alpha, shape)]
    return out


def commuting_apply(p: Poly, T: MatrixTuple) -> np.ndarray:
    """Ordinary functional calculus ``sum c_a T_1^a1 ... T_n^an`` (product in index order)."""
    if p.nvars != T.n:
        raise ValueError(f"{p.nvars}-variable polynomial applied to a {T.n}-tuple")
    out = np.zeros((T.dim, T.dim), dtype=complex)
    for alpha, c in p.items():
        term = np.eye(T.dim, dtype=complex)
        for m, a in zip(T.mats, alpha):
            term = term @ np.linalg.matrix_power(m, a)
        out += c * term
    return out


def op_norm(M: np.ndarray) -> float:
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0
    try:
        return float(np.linalg.norm(M, 2))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"singular value computation did not converge: {exc}") from exc


def spectral_radius(M: np.ndarray) -> float:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("spectral radius needs a square matrix")
    try:
        return float(np.max(np.abs(np.linalg.eigvals(M))))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue computation did not converge: {exc}") from exc


def cayley_real_part(S: np.ndarray) -> np.ndarray:
    """Hermitian part of ``(I + S)(I - S)^-1``, which is positive semidefinite for ``||S|| < 1``."""
    S = np.asarray(S, dtype=complex)
    if op_norm(S) >= 1:
        raise ValueError("cayley_real_part requires ||S|| < 1")
    eye = np.eye(S.shape[0])
    F = (eye + S) @ np.linalg.inv(eye - S)
    return (F + F.conj().T) / 2


def zeta_dot(zeta: Sequence[complex], T: MatrixTuple) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.shape != (T.n,):
        raise ValueError(f"{zeta.size} coefficients for a {T.n}-tuple")
    return np.tensordot(zeta, T.stacked(), axes=1)


def diamond_norm(T: MatrixTuple, grid_per_angle: int = 64) -> NormEstimate:
    """Bracket ``sup ||sum z_i T_i||`` over the closed polydisk.

    The sup sits on the torus and a common phase does not change the norm,
    so ``z_1 = 1`` and only the remaining ``n - 1`` angles are gridded.
    Moving an angle by ``t`` moves ``z_i`` by at most ``|t|``, hence the
    Lipschitz slack ``sum_{i>=2} ||T_i|| * h`` with ``h`` half the spacing.
    """
    if grid_per_angle < 8:
        raise ValueError("grid_per_angle must be at least 8")
    norms = [op_norm(m) for m in T.mats]
    safe = float(sum(norms))
    stack = T.stacked()
    if T.n == 1:
        lower = norms[0]
        return NormEstimate(lower, lower, {"grid": grid_per_angle, "safe_bound": safe, "domain": "diamond"})
    theta = 2 * np.pi * np.arange(grid_per_angle) / grid_per_angle
    grids = np.meshgrid(*([theta] * (T.n - 1)), indexing="ij")
    phases = np.stack([np.ones(grids[0].size)] + [np.exp(1j * g.ravel()) for g in grids], axis=1)
    lower = 0.0
    for start in range(0, phases.shape[0], 4096):
        combos = np.tensordot(phases[start:start + 4096], stack, axes=1)
        lower = max(lower, float(np.linalg.norm(combos, ord=2, axis=(1, 2)).max()))
    h = np.pi / grid_per_angle
    upper = min(lower + sum(norms[1:]) * h, safe)
    return NormEstimate(lower, max(upper, lower), {"grid": grid_per_angle, "safe_bound": safe, "domain": "diamond"})


def _safe_bound(T: MatrixTuple, c: TupleConstraint) -> float:
    norms = [op_norm(m) for m in T.mats]
    if c in (TupleConstraint.SUM_NORM, TupleConstraint.DIAMOND):
        return float(sum(norms))
    return float(max(norms))


def check_constraint(T: MatrixTuple, c: TupleConstraint, tol: float = 1e-9, grid_per_angle: int = 64) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    norms = [op_norm(m) for m in T.mats]
    if c is TupleConstraint.SUM_NORM:
        return sum(norms) <= 1 + tol
    if c is TupleConstraint.DIAMOND:
        return diamond_norm(T, grid_per_angle).upper <= 1 + tol
    if max(norms) > 1 + tol:
        return False
    if c is TupleConstraint.COMMUTING:
        for i in range(T.n):
            for j in range(i + 1, T.n):
                if op_norm(T[i] @ T[j] - T[j] @ T[i]) > tol:
                    return False
    return True


def normalize_to(T: MatrixTuple, c: TupleConstraint, unsafe: bool = False, grid_per_angle: int = 64) -> MatrixTuple:
    """Rescale by one positive factor so the conservative bound for ``c`` equals 1.

    With ``unsafe=True`` and the diamond constraint the grid lower bound is
    used instead, which can leave the true diamond norm slightly above 1.
    """
    if c is TupleConstraint.DIAMOND and unsafe:
        bound = diamond_norm(T, grid_per_angle).lower
    else:
        bound = _safe_bound(T, c)
    if bound == 0:
        raise ValueError("cannot normalize the zero tuple")
    return T.scaled(1.0 / bound)


# -- JSON interchange ---------------------------------------------------------


def matrix_to_dict(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"dim": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_dict(d: Mapping) -> np.ndarray:
    try:
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
        dim = int(d.get("dim", re.shape[0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"matrix JSON does not match dim {dim}")
    return re + 1j * im


def tuple_to_list(T: MatrixTuple) -> list[dict]:
    return [matrix_to_dict(m) for m in T.mats]


def tuple_from_list(items: Sequence[Mapping]) -> MatrixTuple:
    return MatrixTuple(tuple(matrix_from_dict(d) for d in items))


def example7_tuple() -> MatrixTuple:
    """The two real reflections at angles ``+-pi/3``."""
    c, s = math.cos(math.pi / 3), math.sin(math.pi / 3)
    return MatrixTuple.of(np.array([[c, s], [s, -c]]), np.array([[c, -s], [-s, -c]]))
