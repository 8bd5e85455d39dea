"""
Seeded random matrix ensembles for every hypothesis class the checkers use.

Constrained classes live in "factor space": each kind draws Gaussian
factors and builds its matrices from them, so constraints such as
A >= B >= 0 hold by construction. Perturbations move the factors, never
the matrices, and rebuild.

RNG: numpy's Philox (counter-based, 64-bit words) keyed by a SeedSequence
over (seed, stream indices...). Gaussians come from the Box-Muller
transform below applied to ``Generator.random`` draws, not from numpy's
ziggurat, so the transform itself is pinned in this file.
"""

import logging
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from .errors import BadSpec
from .linalg_core import abs_matrix, adjoint, matrix_power, psd

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64
PERTURB_STREAM = 1


class EnsembleKind(str, Enum):
    """Hypothesis classes."""
    GENERAL_COMPLEX = "general_complex"
    HERMITIAN = "hermitian"
    PSD = "psd"
    ORDERED_PAIR = "ordered_pair"
    DOMINATED_PAIR = "dominated_pair"
    DIAGONAL_PSD = "diagonal_psd"
    UNITARY = "unitary"
    PSD_SUM_PAIR = "psd_sum_pair"
    POSITIVE_DEFINITE = "positive_definite"
    DEGENERATE_PSD = "degenerate_psd"
    COMPLEX_VECTOR = "complex_vector"

    @property
    def is_pair(self) -> bool:
        return self in (EnsembleKind.ORDERED_PAIR, EnsembleKind.DOMINATED_PAIR,
                        EnsembleKind.PSD_SUM_PAIR)


def parse_kind(value: Union[str, EnsembleKind]) -> EnsembleKind:
    try:
        return EnsembleKind(value)
    except ValueError as e:
        raise BadSpec(f"kind: unknown ensemble kind {value!r}") from e


@dataclass(frozen=True)
class EnsembleSpec:
    """Ensemble kind, dimension, 64-bit seed, entry scale and stream index."""
    kind: EnsembleKind
    dim: int
    seed: int
    scale: float = 1.0
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_kind(self.kind))
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise BadSpec(f"dim: must be a positive integer, got {self.dim!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < MAX_SEED:
            raise BadSpec(f"seed: must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.stream, (int, np.integer)) or self.stream < 0:
            raise BadSpec(f"stream: must be a nonnegative integer, got {self.stream!r}")
        if not math.isfinite(float(self.scale)) or float(self.scale) <= 0:
            raise BadSpec(f"scale: must be positive, got {self.scale!r}")

    def with_stream(self, stream: int) -> "EnsembleSpec":
        return replace(self, stream=stream)

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["kind"] = self.kind.value
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EnsembleSpec":
        try:
            return cls(kind=data["kind"], dim=int(data["dim"]), seed=int(data["seed"]),
                       scale=float(data.get("scale", 1.0)), stream=int(data.get("stream", 0)))
        except KeyError as e:
            raise BadSpec(f"{e.args[0]}: missing from ensemble spec") from e


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Independent, reproducible generator for (seed, index, ...)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, indices)])))


def _box_muller(rng: np.random.Generator, count: int) -> Tuple[np.ndarray, np.ndarray]:
    u1 = rng.random(count)
    u2 = rng.random(count)
    # 1 - u1 lies in (0, 1], so the log is finite
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    theta = 2.0 * np.pi * u2
    return radius * np.cos(theta), radius * np.sin(theta)


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """Real standard normals, pairs interleaved (cos, sin)."""
    half = (size + 1) // 2
    x, y = _box_muller(rng, half)
    out = np.empty(2 * half, dtype=np.float64)
    out[0::2] = x
    out[1::2] = y
    return out[:size]


def complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """(x + iy)/sqrt(2) with x, y standard normal."""
    count = int(np.prod(shape))
    x, y = _box_muller(rng, count)
    return ((x + 1j * y) / math.sqrt(2.0)).reshape(shape)


def _gram(G: np.ndarray) -> np.ndarray:
    return adjoint(G) @ G


def _root(M: np.ndarray) -> np.ndarray:
    return matrix_power(psd(M), 0.5).matrix


def _unitary_from(G: np.ndarray) -> np.ndarray:
    Q, _ = linalg.qr(G)
    # phase convention: first nonzero entry of each column real positive
    for j in range(Q.shape[1]):
        nonzero = np.flatnonzero(np.abs(Q[:, j]) > 0)
        if nonzero.size:
            z = Q[nonzero[0], j]
            Q[:, j] = Q[:, j] * (np.conj(z) / abs(z))
    return Q


def _hermitize(G: np.ndarray) -> np.ndarray:
    return (G + adjoint(G)) / 2


@dataclass(frozen=True)
class _KindRule:
    """How a kind draws factors, builds matrices, and recovers factors."""
    draw: Callable[[np.random.Generator, int, float], Tuple[np.ndarray, ...]]
    build: Callable[[Tuple[np.ndarray, ...], float], Tuple[np.ndarray, ...]]
    factorize: Callable[[Tuple[np.ndarray, ...], float], Tuple[np.ndarray, ...]]
    real_factors: bool = False


def _draw_complex(count: int):
    def draw(rng, n, scale):
        return tuple(scale * complex_gaussian(rng, (n, n)) for _ in range(count))
    return draw


def _draw_degenerate(rng, n, scale):
    levels = np.sort(np.abs(scale * standard_normal(rng, max(1, (n + 1) // 2))))[::-1]
    values = np.array([levels[i % levels.size] for i in range(n)])
    U = _unitary_from(complex_gaussian(rng, (n, n)))
    # PSD root with repeated eigenvalues; its Gram matrix keeps the degeneracy
    return ((U * np.sqrt(values)) @ adjoint(U),)


def _draw_diagonal(rng, n, scale):
    return (scale * standard_normal(rng, n),)


def _draw_vector(rng, n, scale):
    return (scale * complex_gaussian(rng, (n,)),)


def _build_dominated(f, scale):
    B = _hermitize(f[0])
    return (abs_matrix(B).matrix + _gram(f[1]), B)


def _factor_dominated(m, scale):
    A, B = m
    return (B, _root(A - abs_matrix(_hermitize(B)).matrix))


def _build_psd_sum(f, scale):
    P, Q = _gram(f[0]), _gram(f[1])
    return ((P + Q) / 2, (P - Q) / 2)


def _factor_psd_sum(m, scale):
    A, B = m
    return (_root(A + B), _root(A - B))


_RULES: Dict[EnsembleKind, _KindRule] = {
    EnsembleKind.GENERAL_COMPLEX: _KindRule(
        draw=_draw_complex(1), build=lambda f, s: (f[0],), factorize=lambda m, s: (m[0],)),
    EnsembleKind.HERMITIAN: _KindRule(
        draw=_draw_complex(1), build=lambda f, s: (_hermitize(f[0]),), factorize=lambda m, s: (m[0],)),
    EnsembleKind.PSD: _KindRule(
        draw=_draw_complex(1), build=lambda f, s: (_gram(f[0]),), factorize=lambda m, s: (_root(m[0]),)),
    EnsembleKind.POSITIVE_DEFINITE: _KindRule(
        draw=_draw_complex(1),
        build=lambda f, s: (_gram(f[0]) + (s * s) * np.eye(f[0].shape[0]),),
        factorize=lambda m, s: (_root(m[0] - (s * s) * np.eye(m[0].shape[0])),)),
    EnsembleKind.DEGENERATE_PSD: _KindRule(
        draw=_draw_degenerate, build=lambda f, s: (_gram(f[0]),), factorize=lambda m, s: (_root(m[0]),)),
    EnsembleKind.UNITARY: _KindRule(
        draw=_draw_complex(1), build=lambda f, s: (_unitary_from(f[0]),), factorize=lambda m, s: (m[0],)),
    EnsembleKind.DIAGONAL_PSD: _KindRule(
        draw=_draw_diagonal,
        build=lambda f, s: (np.diag(np.sort(np.abs(f[0]))[::-1]).astype(np.complex128),),
        factorize=lambda m, s: (np.real(np.diag(m[0])).copy(),),
        real_factors=True),
    EnsembleKind.COMPLEX_VECTOR: _KindRule(
        draw=_draw_vector, build=lambda f, s: (f[0],), factorize=lambda m, s: (m[0],)),
    EnsembleKind.ORDERED_PAIR: _KindRule(
        draw=_draw_complex(2),
        build=lambda f, s: (_gram(f[0]) + _gram(f[1]), _gram(f[0])),
        factorize=lambda m, s: (_root(m[1]), _root(m[0] - m[1]))),
    EnsembleKind.DOMINATED_PAIR: _KindRule(
        draw=_draw_complex(2), build=_build_dominated, factorize=_factor_dominated),
    EnsembleKind.PSD_SUM_PAIR: _KindRule(
        draw=_draw_complex(2), build=_build_psd_sum, factorize=_factor_psd_sum),
}


def sample(spec: EnsembleSpec, count: int = 1) -> Tuple[np.ndarray, ...]:
    """
    Draw matrices for an ensemble spec.

    Pair kinds return (A, B). Single kinds return ``count`` independent
    draws from the same stream. Identical (spec, count) gives bit-identical
    output.

    Raises:
        BadSpec: invalid count for the kind
    """
    if count < 1 or (spec.kind.is_pair and count != 1):
        raise BadSpec(f"count: {count} not valid for kind {spec.kind.value}")
    rule = _RULES[spec.kind]
    rng = substream(spec.seed, spec.stream)
    out = []
    for _ in range(count):
        out.extend(rule.build(rule.draw(rng, spec.dim, spec.scale), spec.scale))
    return tuple(out)


def draw_inputs(spec: EnsembleSpec, arity: int) -> Tuple[np.ndarray, ...]:
    """Draw exactly ``arity`` inputs: one pair for pair kinds, else independent draws."""
    if spec.kind.is_pair:
        if arity != 2:
            raise BadSpec(f"kind {spec.kind.value} yields a pair, checker needs {arity} inputs")
        return sample(spec)
    return sample(spec, count=arity)


def perturb(M: Union[np.ndarray, Sequence[np.ndarray]], spec: EnsembleSpec, magnitude: float,
            rng: Optional[np.random.Generator] = None):
    """
    Move an ensemble member within its hypothesis class.

    Factors are recovered from the matrices, displaced by Gaussian noise of
    size ``magnitude * spec.scale``, and rebuilt, so the output satisfies the
    kind's constraints by construction.

    Args:
        M: One matrix, or a tuple (pair kinds / multiple single-kind inputs)
        spec: Ensemble spec the input was drawn from
        magnitude: Step size; 0 returns the input unchanged
        rng: Generator for the noise (defaults to a dedicated substream)

    Returns:
        Same structure as ``M``

    Raises:
        BadSpec: negative or non-finite magnitude
    """
    magnitude = float(magnitude)
    if not math.isfinite(magnitude) or magnitude < 0:
        raise BadSpec(f"magnitude: must be finite and >= 0, got {magnitude}")

    single = isinstance(M, np.ndarray)
    matrices = (M,) if single else tuple(M)
    if magnitude == 0.0:
        out = tuple(np.array(m, copy=True) for m in matrices)
        return out[0] if single else out

    rng = rng or substream(spec.seed, spec.stream, PERTURB_STREAM)
    rule = _RULES[spec.kind]
    group = 2 if spec.kind.is_pair else 1
    if len(matrices) % group:
        raise BadSpec(f"kind {spec.kind.value} expects inputs in groups of {group}")

    out = []
    for start in range(0, len(matrices), group):
        factors = rule.factorize(matrices[start:start + group], spec.scale)
        moved = []
        for F in factors:
            if rule.real_factors:
                noise = standard_normal(rng, F.size).reshape(F.shape)
            else:
                noise = complex_gaussian(rng, F.shape)
            moved.append(F + magnitude * spec.scale * noise)
        out.extend(rule.build(tuple(moved), spec.scale))
    out = tuple(out)
    return out[0] if single else out
