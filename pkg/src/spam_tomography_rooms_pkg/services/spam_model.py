"""State and measurement models of the three reconstruction methods.

Every effect shares the z-readout noise (ε₀, ε₁)::

    E_j = ½(1 + ε₁ − ε₀) I + ½(1 − ε₀ − ε₁) R_j·σ

so that E₊z = (1 − ε₀)|0⟩⟨0| + ε₁|1⟩⟨1| and p_{j|i} = α + β R_j·r_i.

Packed vector layouts (frozen, tagged by ``PACK_VERSION``):

    A (12): b, r3(3), r4(3), eps0, eps1, a, theta3, phi3
            ρ₂ = (cos b, 0, sin b), R₂ = (cos a, 0, sin a),
            R₃ = (sin θ cos φ, sin θ sin φ, cos θ)
    B (18): r2x, r2z, r3(3), r4(3), eps0, eps1, R2(3), R3(3), omega, t2
    C (25): r2x, r2z, r3(3), r4(3), r5(3), eps0, eps1, R2(3), R3(3), R4(3), R5(3)

ρ₁ = |0⟩⟨0| and E₁ = E₊z carry no parameters in any method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from ..utils.errors import InvalidParameterError, ShapeMismatchError
from ..utils.methods import Method
from ..utils.qubit import ATOL, DensityMatrix, Effect, EvolutionParams, evolve_state

PACK_VERSION = "1"
EPS_UPPER = 0.5 - 1e-9
T2_LOWER = 1e-6

IDEAL_STATE_AXES = (
    (0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, -1.0),
    tuple(np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)),
)
IDEAL_MEASUREMENT_AXES = (
    (0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    tuple(np.array([-1.0, 1.0, 1.0]) / math.sqrt(3.0)),
    tuple(np.array([1.0, 1.0, -1.0]) / math.sqrt(3.0)),
)


class StateKind(str, Enum):
    FIXED_PLUS_Z = "fixed_plus_z"
    PLANAR_X = "planar_x"
    GENERAL = "general"


class MeasurementKind(str, Enum):
    FIXED_PLUS_Z = "fixed_plus_z"
    GENERAL = "general"


METHOD_SHAPES = {
    Method.A: (4, 3),
    Method.B: (4, 3),
    Method.C: (5, 5),
}
PARAMETER_COUNTS = {Method.A: 12, Method.B: 18, Method.C: 25}


@dataclass(frozen=True)
class ZMeasurementNoise:
    eps0: float = 0.0
    eps1: float = 0.0

    @property
    def alpha(self) -> float:
        return 0.5 * (1.0 + self.eps1 - self.eps0)

    @property
    def beta(self) -> float:
        return 0.5 * (1.0 - self.eps0 - self.eps1)


@dataclass(frozen=True)
class StateParams:
    kind: StateKind
    bloch: tuple[float, float, float]

    @classmethod
    def fixed_plus_z(cls) -> "StateParams":
        return cls(StateKind.FIXED_PLUS_Z, (0.0, 0.0, 1.0))

    @classmethod
    def planar_x(cls, rx: float, rz: float) -> "StateParams":
        return cls(StateKind.PLANAR_X, (float(rx), 0.0, float(rz)))

    @classmethod
    def general(cls, rx: float, ry: float, rz: float) -> "StateParams":
        return cls(StateKind.GENERAL, (float(rx), float(ry), float(rz)))


@dataclass(frozen=True)
class MeasurementParams:
    kind: MeasurementKind
    direction: tuple[float, float, float]

    @classmethod
    def fixed_plus_z(cls) -> "MeasurementParams":
        return cls(MeasurementKind.FIXED_PLUS_Z, (0.0, 0.0, 1.0))

    @classmethod
    def general(cls, rx: float, ry: float, rz: float) -> "MeasurementParams":
        return cls(MeasurementKind.GENERAL, (float(rx), float(ry), float(rz)))


def _expected_state_kinds(n_states: int) -> list[StateKind]:
    return [StateKind.FIXED_PLUS_Z, StateKind.PLANAR_X] + [StateKind.GENERAL] * (n_states - 2)


def _expected_measurement_kinds(n_measurements: int) -> list[MeasurementKind]:
    return [MeasurementKind.FIXED_PLUS_Z] + [MeasurementKind.GENERAL] * (n_measurements - 1)


@dataclass(frozen=True)
class SpamParameterSet:
    """Free parameters of one method's state/measurement model.

    ``evolution`` is present exactly for Method B. Method A's unit-norm
    constraints are checked here; physicality (norms ≤ 1, ε in [0, 0.5)) is
    checked by ``realize``.
    """

    method: Method
    states: tuple[StateParams, ...]
    measurements: tuple[MeasurementParams, ...]
    noise: ZMeasurementNoise = field(default_factory=ZMeasurementNoise)
    evolution: EvolutionParams | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "measurements", tuple(self.measurements))
        expected = METHOD_SHAPES[self.method]
        if (len(self.states), len(self.measurements)) != expected:
            raise ShapeMismatchError(
                f"Method {self.method} needs {expected[0]} states and {expected[1]} measurements, "
                f"got {len(self.states)} and {len(self.measurements)}"
            )
        if [s.kind for s in self.states] != _expected_state_kinds(len(self.states)):
            raise InvalidParameterError(f"state variants {[s.kind.value for s in self.states]} do not fit Method {self.method}")
        if [m.kind for m in self.measurements] != _expected_measurement_kinds(len(self.measurements)):
            raise InvalidParameterError(
                f"measurement variants {[m.kind.value for m in self.measurements]} do not fit Method {self.method}"
            )
        if (self.evolution is not None) != (self.method is Method.B):
            raise InvalidParameterError("evolution parameters are required for Method B and only for Method B")
        if self.method is Method.A:
            self._check_method_a()

    def _check_method_a(self):
        r2 = np.array(self.states[1].bloch)
        r_meas = [np.array(m.direction) for m in self.measurements[1:]]
        tol = 1e-9
        if abs(np.linalg.norm(r2) - 1.0) > tol:
            raise InvalidParameterError("Method A requires a pure second state")
        if any(abs(np.linalg.norm(r) - 1.0) > tol for r in r_meas):
            raise InvalidParameterError("Method A requires unit-norm measurement directions")
        if abs(r_meas[0][1]) > tol:
            raise InvalidParameterError("Method A requires the second measurement in the x-z plane")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.states), len(self.measurements)

    def state_vectors(self) -> np.ndarray:
        return np.array([s.bloch for s in self.states], dtype=float)

    def measurement_vectors(self) -> np.ndarray:
        return np.array([m.direction for m in self.measurements], dtype=float)


def parameter_count(method: Method | str) -> int:
    return PARAMETER_COUNTS[Method(method)]


def parameter_names(method: Method | str) -> list[str]:
    method = Method(method)
    if method is Method.A:
        return ["b2", "r3x", "r3y", "r3z", "r4x", "r4y", "r4z", "eps0", "eps1", "a2", "theta3", "phi3"]
    n_states, n_meas = METHOD_SHAPES[method]
    names = ["r2x", "r2z"]
    for i in range(3, n_states + 1):
        names += [f"r{i}x", f"r{i}y", f"r{i}z"]
    names += ["eps0", "eps1"]
    for j in range(2, n_meas + 1):
        names += [f"R{j}x", f"R{j}y", f"R{j}z"]
    if method is Method.B:
        names += ["omega", "t2"]
    return names


def from_arrays(
    method: Method,
    r: np.ndarray,
    big_r: np.ndarray,
    eps0: float,
    eps1: float,
    evolution: EvolutionParams | None,
) -> SpamParameterSet:
    states = [StateParams.fixed_plus_z(), StateParams.planar_x(r[1, 0], r[1, 2])]
    states += [StateParams.general(*row) for row in r[2:]]
    measurements = [MeasurementParams.fixed_plus_z()]
    measurements += [MeasurementParams.general(*row) for row in big_r[1:]]
    return SpamParameterSet(
        method=method,
        states=tuple(states),
        measurements=tuple(measurements),
        noise=ZMeasurementNoise(float(eps0), float(eps1)),
        evolution=evolution,
    )


def vector_arrays(method: Method | str, vector: Sequence[float]) -> tuple[np.ndarray, np.ndarray, float, float, tuple[float, float] | None]:
    """Decode a packed vector into state/measurement Bloch arrays.

    Returns (r, R, eps0, eps1, evolution) with r of shape (n_states, 3) and R of
    shape (n_measurements, 3), ρ₁ and E₁ included. No validation of norms.
    """
    method = Method(method)
    x = np.asarray(vector, dtype=float)
    if x.shape != (PARAMETER_COUNTS[method],):
        raise ShapeMismatchError(f"Method {method} vector needs {PARAMETER_COUNTS[method]} entries, got {x.size}")
    n_states, n_meas = METHOD_SHAPES[method]
    r = np.zeros((n_states, 3))
    big_r = np.zeros((n_meas, 3))
    r[0, 2] = 1.0
    big_r[0, 2] = 1.0
    if method is Method.A:
        b, a, theta, phi = x[0], x[9], x[10], x[11]
        r[1] = (math.cos(b), 0.0, math.sin(b))
        r[2:4] = x[1:7].reshape(2, 3)
        big_r[1] = (math.cos(a), 0.0, math.sin(a))
        big_r[2] = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
        return r, big_r, x[7], x[8], None
    r[1] = (x[0], 0.0, x[1])
    k = 2 + 3 * (n_states - 2)
    r[2:] = x[2:k].reshape(n_states - 2, 3)
    eps0, eps1 = x[k], x[k + 1]
    big_r[1:] = x[k + 2 : k + 2 + 3 * (n_meas - 1)].reshape(n_meas - 1, 3)
    evolution = (x[-2], x[-1]) if method is Method.B else None
    return r, big_r, eps0, eps1, evolution


def unpack(method: Method | str, vector: Sequence[float]) -> SpamParameterSet:
    method = Method(method)
    r, big_r, eps0, eps1, evolution = vector_arrays(method, vector)
    ev = None
    if evolution is not None:
        ev = EvolutionParams(omega_rot=float(evolution[0]), t2=float(evolution[1]))
    return from_arrays(method, r, big_r, eps0, eps1, ev)


def pack(params: SpamParameterSet) -> np.ndarray:
    r = params.state_vectors()
    big_r = params.measurement_vectors()
    eps = [params.noise.eps0, params.noise.eps1]
    if params.method is Method.A:
        r2, m2, m3 = r[1], big_r[1], big_r[2]
        theta = math.acos(min(max(m3[2] / np.linalg.norm(m3), -1.0), 1.0))
        return np.array(
            [math.atan2(r2[2], r2[0]), *r[2:4].reshape(6), *eps,
             math.atan2(m2[2], m2[0]), theta, math.atan2(m3[1], m3[0])]
        )
    parts = [r[1, [0, 2]], r[2:].reshape(-1), eps, big_r[1:].reshape(-1)]
    if params.method is Method.B:
        parts.append([params.evolution.omega_rot, params.evolution.t2])
    return np.concatenate([np.asarray(p, dtype=float) for p in parts])


def bounds(method: Method | str) -> tuple[np.ndarray, np.ndarray]:
    """Box bounds for the packed vector. ρ₂ has r_x ≥ 0 as a sign convention."""
    method = Method(method)
    if method is Method.A:
        half = math.pi / 2
        lower = [-half] + [-1.0] * 6 + [0.0, 0.0, -half, 0.0, -math.pi]
        upper = [half] + [1.0] * 6 + [EPS_UPPER, EPS_UPPER, half, math.pi, math.pi]
        return np.array(lower), np.array(upper)
    n_states, n_meas = METHOD_SHAPES[method]
    lower = [0.0, -1.0] + [-1.0] * 3 * (n_states - 2) + [0.0, 0.0] + [-1.0] * 3 * (n_meas - 1)
    upper = [1.0, 1.0] + [1.0] * 3 * (n_states - 2) + [EPS_UPPER, EPS_UPPER] + [1.0] * 3 * (n_meas - 1)
    if method is Method.B:
        lower += [0.0, T2_LOWER]
        upper += [np.inf, np.inf]
    return np.array(lower), np.array(upper)


def check_physical(params: SpamParameterSet) -> None:
    for i, row in enumerate(params.state_vectors(), start=1):
        if np.linalg.norm(row) > 1.0 + ATOL:
            raise InvalidParameterError(f"state {i} Bloch norm {np.linalg.norm(row):.15g} exceeds 1")
    for j, row in enumerate(params.measurement_vectors(), start=1):
        if np.linalg.norm(row) > 1.0 + ATOL:
            raise InvalidParameterError(f"measurement {j} direction norm {np.linalg.norm(row):.15g} exceeds 1")
    for name, value in (("eps0", params.noise.eps0), ("eps1", params.noise.eps1)):
        if not 0.0 <= value < 0.5:
            raise InvalidParameterError(f"{name}={value} outside [0, 0.5)")


def realize(params: SpamParameterSet) -> tuple[list[DensityMatrix], list[Effect]]:
    check_physical(params)
    states = [DensityMatrix.from_bloch(row) for row in params.state_vectors()]
    alpha, beta = params.noise.alpha, params.noise.beta
    effects = [Effect.from_bloch(alpha, beta, row) for row in params.measurement_vectors()]
    return states, effects


def born_arrays(r: np.ndarray, big_r: np.ndarray, eps0: float, eps1: float) -> np.ndarray:
    alpha = 0.5 * (1.0 + eps1 - eps0)
    beta = 0.5 * (1.0 - eps0 - eps1)
    return alpha + beta * (r @ big_r.T)


def born_table(params: SpamParameterSet) -> np.ndarray:
    """Static probabilities p[i, j] = Tr(E_j ρ_i) for any method shape."""
    return born_arrays(params.state_vectors(), params.measurement_vectors(), params.noise.eps0, params.noise.eps1)


def predict_static(params: SpamParameterSet) -> np.ndarray:
    if params.method is Method.B:
        raise InvalidParameterError("predict_static needs Method A or C parameters, got Method B")
    return born_table(params)


def timeseries_arrays(
    r: np.ndarray,
    big_r: np.ndarray,
    eps0: float,
    eps1: float,
    omega: float,
    t2: float,
    times: np.ndarray,
) -> np.ndarray:
    """p[i, j, k] = a_ij + e^{−t_k/T₂}(b_ij cos Ωt_k − c_ij sin Ωt_k)."""
    beta = 0.5 * (1.0 - eps0 - eps1)
    alpha = 0.5 * (1.0 + eps1 - eps0)
    a = alpha + beta * np.outer(r[:, 2], big_r[:, 2])
    b = beta * (np.outer(r[:, 0], big_r[:, 0]) + np.outer(r[:, 1], big_r[:, 1]))
    c = beta * (np.outer(r[:, 0], big_r[:, 1]) - np.outer(r[:, 1], big_r[:, 0]))
    envelope = np.exp(-times / t2)
    cos_term = envelope * np.cos(omega * times)
    sin_term = envelope * np.sin(omega * times)
    return a[:, :, None] + b[:, :, None] * cos_term - c[:, :, None] * sin_term


def predict_timeseries(params: SpamParameterSet, times: Sequence[float]) -> np.ndarray:
    if params.method is not Method.B:
        raise InvalidParameterError(f"predict_timeseries needs Method B parameters, got Method {params.method}")
    t = np.asarray(times, dtype=float).reshape(-1)
    if np.any(t < 0):
        raise InvalidParameterError("times must be non-negative")
    ev = params.evolution
    return timeseries_arrays(
        params.state_vectors(), params.measurement_vectors(),
        params.noise.eps0, params.noise.eps1, ev.omega_rot, ev.t2, t,
    )


def timeseries_by_evolution(params: SpamParameterSet, times: Sequence[float]) -> np.ndarray:
    """Time series from evolve_state and the Born rule, cell by cell."""
    states, effects = realize(params)
    out = np.zeros((len(states), len(effects), len(times)))
    for k, t in enumerate(times):
        for i, rho in enumerate(states):
            m = evolve_state(rho, float(t), params.evolution).m
            for j, e in enumerate(effects):
                out[i, j, k] = np.trace(e.m @ m).real
    return out


def _clip_norm(row: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(row)
    return row / norm if norm > 1.0 else row


def project_physical(params: SpamParameterSet) -> SpamParameterSet:
    r = np.array([_clip_norm(row) for row in params.state_vectors()])
    big_r = np.array([_clip_norm(row) for row in params.measurement_vectors()])
    eps0 = min(max(params.noise.eps0, 0.0), EPS_UPPER)
    eps1 = min(max(params.noise.eps1, 0.0), EPS_UPPER)
    evolution = params.evolution
    if evolution is not None:
        evolution = EvolutionParams(omega_rot=max(evolution.omega_rot, 0.0), t2=max(evolution.t2, T2_LOWER))
    if params.method is Method.A:
        r[1] /= np.linalg.norm(r[1])
        big_r[1:] /= np.linalg.norm(big_r[1:], axis=1, keepdims=True)
    return from_arrays(params.method, r, big_r, eps0, eps1, evolution)


def restrict(params: SpamParameterSet, method: Method | str) -> SpamParameterSet:
    """Coerce a parameter set into the shape of another method.

    Truths are generated in the general shape; this maps them onto what a
    method can represent (Method A drops the y component of R₂ and
    normalizes ρ₂, R₂, R₃). Method B needs evolution parameters on the input.
    """
    method = Method(method)
    n_states, n_meas = METHOD_SHAPES[method]
    if len(params.states) < n_states or len(params.measurements) < n_meas:
        raise ShapeMismatchError(f"cannot restrict a {params.shape} set to Method {method}")
    r = params.state_vectors()[:n_states].copy()
    big_r = params.measurement_vectors()[:n_meas].copy()
    evolution = None
    if method is Method.A:
        r[1] /= np.linalg.norm(r[1])
        big_r[1, 1] = 0.0
        big_r[1:] /= np.linalg.norm(big_r[1:], axis=1, keepdims=True)
    elif method is Method.B:
        if params.evolution is None:
            raise InvalidParameterError("Method B restriction needs evolution parameters")
        evolution = params.evolution
    return from_arrays(method, r, big_r, params.noise.eps0, params.noise.eps1, evolution)


def ideal_parameter_set(
    method: Method | str,
    eps: float = 0.0,
    norm: float = 1.0,
    evolution: EvolutionParams | None = None,
) -> SpamParameterSet:
    """Ideal axes with uniform readout noise ``eps`` and Bloch norm ``norm``.

    Method A keeps its pure/unit constraints regardless of ``norm``.
    """
    method = Method(method)
    n_states, n_meas = METHOD_SHAPES[method]
    r = norm * np.array(IDEAL_STATE_AXES[:n_states])
    r[0] = (0.0, 0.0, 1.0)
    big_r = norm * np.array(IDEAL_MEASUREMENT_AXES[:n_meas])
    big_r[0] = (0.0, 0.0, 1.0)
    if method is Method.A:
        r[1] = (1.0, 0.0, 0.0)
        big_r[1:] /= np.linalg.norm(big_r[1:], axis=1, keepdims=True)
    if method is Method.B and evolution is None:
        raise InvalidParameterError("Method B ideal set needs evolution parameters")
    return from_arrays(method, r, big_r, eps, eps, evolution if method is Method.B else None)
