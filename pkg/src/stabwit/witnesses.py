"""Two-setting entanglement witnesses built from stabilizer projectors.

Both families share the shape

    W = 3*1 - 2*(P_1 + P_2)

where P_1 and P_2 project onto the +1 eigenspaces of two commuting subsets
of the stabilizer generators: {S_1} and {S_2..S_n} for the GHZ family, the
even-k and odd-k chain generators for the cluster family.  Expanding each
projector as 2^-m * sum over generator subsets gives an explicit Pauli
decomposition whose every term is measurable within one of two local
settings.  A negative expectation value certifies entanglement; the value
on the target state itself is -1.

The noise tolerance is the largest white-noise fraction at which the
expectation on the noisy target is still negative.  Because the noisy
expectation is affine in the noise fraction, the threshold has the closed
forms

    ghz:      1 / (3 - 4/2^n)
    cluster:  1 / (4 - 2*(2^-floor(n/2) + 2^-ceil(n/2)))

which are cross-checked here against a numerical root find on the affine
expectation itself.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from scipy.optimize import brentq

from .errors import DomainError, NumericError
from .measurement import MeasurementSetting, settings_for
from .pauli import (
    FAMILIES,
    FAMILY_CLUSTER,
    FAMILY_GHZ,
    GeneratorSet,
    PauliString,
    generators_for,
    subgroup_product,
)
from .states import (
    MAX_QUBITS_DEFAULT,
    State,
    StateVector,
    expectation,
    make_cluster,
    make_ghz,
    stabilizer_projector_expectation,
    white_noise_mix,
)

THRESHOLD_AGREEMENT_ATOL = 1e-9
# above this size the pure target expectation is evaluated through the
# projector structure instead of the 2^(n-1)-term Pauli sum
_TERM_PATH_MAX_QUBITS = 12


@dataclass(frozen=True)
class Witness:
    """Real linear combination of phase-free Pauli strings, plus metadata."""

    n: int
    family: str
    terms: Mapping[PauliString, float]
    settings: tuple[MeasurementSetting, MeasurementSetting]

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        for term in self.terms:
            if term.n != self.n:
                raise DomainError("term qubit count differs from witness")
            if term.phase != 1:
                raise DomainError(f"term {term} must carry phase +1; fold signs "
                                  "into the coefficient")

    @property
    def identity_coefficient(self) -> float:
        """Coefficient of the identity term, i.e. tr(W)/2^n."""
        return float(self.terms.get(PauliString.identity(self.n), 0.0))

    def negated(self) -> "Witness":
        """Sign-flipped operator; used as a should-fail certification control."""
        return Witness(self.n, self.family,
                       {t: -c for t, c in self.terms.items()}, self.settings)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "terms": [{"string": str(t), "coeff": float(c)}
                      for t, c in sorted(self.terms.items(), key=lambda tc: str(tc[0]))],
            "settings": [s.axes for s in self.settings],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Witness":
        n = int(d["n"])
        terms = {PauliString.parse(t["string"]): float(t["coeff"]) for t in d["terms"]}
        settings = tuple(MeasurementSetting(n, axes) for axes in d["settings"])
        return cls(n, str(d["family"]), terms, settings)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Witness":
        return cls.from_dict(json.loads(text))


def _add_term(terms: dict[PauliString, float], p: PauliString, coeff: float) -> None:
    """Accumulate coeff * p with the sign folded so the stored key has phase +1."""
    phase = p.phase
    if phase == -1:
        p = PauliString(p.n, p.x_bits, p.z_bits, (p.phase_exp + 2) % 4)
        coeff = -coeff
    elif phase != 1:
        raise NumericError(f"imaginary-phase term {p} in a Hermitian expansion")
    terms[p] = terms.get(p, 0.0) + coeff


def _expand_projector(terms: dict[PauliString, float], gens: GeneratorSet,
                      indices: list[int], weight: float) -> None:
    """Add weight * prod_{k in indices} (1 + S_k)/2 expanded over subsets."""
    scale = weight / (1 << len(indices))
    for picks in range(1 << len(indices)):
        mask = 0
        for j, k in enumerate(indices):
            if (picks >> j) & 1:
                mask |= 1 << (k - 1)
        _add_term(terms, subgroup_product(gens, mask), scale)


def _projector_index_sets(family: str, n: int) -> tuple[list[int], list[int]]:
    """1-based generator indices behind the two projectors."""
    if family == FAMILY_GHZ:
        return [1], list(range(2, n + 1))
    if family == FAMILY_CLUSTER:
        return list(range(2, n + 1, 2)), list(range(1, n + 1, 2))
    raise DomainError(f"unknown family {family!r}")


def _build(family: str, n: int) -> Witness:
    gens = generators_for(family, n)
    first, second = _projector_index_sets(family, n)
    terms: dict[PauliString, float] = {PauliString.identity(n): 3.0}
    _expand_projector(terms, gens, first, -2.0)
    _expand_projector(terms, gens, second, -2.0)
    return Witness(n, family, terms, settings_for(family, n))


def build_ghz_witness(n: int) -> Witness:
    """3*1 - 2[(S_1 + 1)/2 + prod_{k=2..n} (S_k + 1)/2] as Pauli terms."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    return _build(FAMILY_GHZ, n)


def build_cluster_witness(n: int) -> Witness:
    """3*1 - 2[prod_{even k} (S_k + 1)/2 + prod_{odd k} (S_k + 1)/2]."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    return _build(FAMILY_CLUSTER, n)


def build_witness(family: str, n: int) -> Witness:
    if family == FAMILY_GHZ:
        return build_ghz_witness(n)
    if family == FAMILY_CLUSTER:
        return build_cluster_witness(n)
    raise DomainError(f"unknown family {family!r}")


def target_state(family: str, n: int, max_qubits: int = MAX_QUBITS_DEFAULT) -> StateVector:
    """The pure state the family's witness is built around."""
    if family == FAMILY_GHZ:
        return make_ghz(n, max_qubits)
    if family == FAMILY_CLUSTER:
        return make_cluster(n, max_qubits)
    raise DomainError(f"unknown family {family!r}")


def witness_expectation(w: Witness, state: State) -> float:
    """Sum of coeff * <string>; on a noisy state only the identity term
    survives the noise part."""
    return expectation(w, state)


def _projector_traces(family: str, n: int) -> tuple[float, float]:
    first, second = _projector_index_sets(family, n)
    return float(2 ** (n - len(first))), float(2 ** (n - len(second)))


def _structural_target_values(family: str, n: int,
                              max_qubits: int) -> tuple[float, float]:
    """(identity coefficient of W, pure <W> on the target) without expanding
    the 2^(n-1) Pauli terms; exact by the projector identity W = 3 - 2(P1+P2)."""
    target = target_state(family, n, max_qubits)
    gens = generators_for(family, n)
    first, second = _projector_index_sets(family, n)
    tr1, tr2 = _projector_traces(family, n)
    dim = float(1 << n)
    identity_coeff = 3.0 - 2.0 * (tr1 + tr2) / dim
    pure = 3.0 - 2.0 * (
        stabilizer_projector_expectation(target, [gens.generators[k - 1] for k in first])
        + stabilizer_projector_expectation(target, [gens.generators[k - 1] for k in second]))
    return identity_coeff, pure


def noisy_target_expectation(family: str, n: int, p_noise: float,
                             max_qubits: int = MAX_QUBITS_DEFAULT) -> float:
    """Exact <W> on the family target mixed with white noise at fraction p.

    For n up to 12 this evaluates the full Pauli decomposition; beyond that
    it uses the algebraically identical projector form (the two routes are
    pinned against each other in the test suite).
    """
    if not 0.0 <= p_noise <= 1.0:
        raise DomainError(f"noise fraction must lie in [0, 1], got {p_noise}")
    if n <= _TERM_PATH_MAX_QUBITS:
        w = build_witness(family, n)
        return witness_expectation(w, white_noise_mix(p_noise, target_state(family, n, max_qubits)))
    identity_coeff, pure = _structural_target_values(family, n, max_qubits)
    return p_noise * identity_coeff + (1.0 - p_noise) * pure


@dataclass(frozen=True)
class ThresholdReport:
    """Noise tolerance of one witness, from both computation routes."""

    family: str
    n: int
    p_threshold: float
    method: str
    trace_p1: float
    trace_p2: float
    p_closed_form: float
    p_root_find: float

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "p_threshold": self.p_threshold,
            "method": self.method,
            "trace_p1": self.trace_p1,
            "trace_p2": self.trace_p2,
            "p_closed_form": self.p_closed_form,
            "p_root_find": self.p_root_find,
        }


def _closed_form_threshold(family: str, n: int) -> float:
    if family == FAMILY_GHZ:
        return 1.0 / (3.0 - 4.0 / 2 ** n)
    if family == FAMILY_CLUSTER:
        return 1.0 / (4.0 - 2.0 * (2.0 ** -(n // 2) + 2.0 ** -((n + 1) // 2)))
    raise DomainError(f"unknown family {family!r}")


def noise_threshold(family: str, n: int, method: str = "closed_form",
                    max_qubits: int = MAX_QUBITS_DEFAULT) -> ThresholdReport:
    """Largest noise fraction at which the witness still detects the target.

    Computes the closed form and, independently, the root of the noisy
    target expectation over p in [0, 1]; the two must agree to 1e-9.
    The expectation is affine in p, so its value at the endpoints pins the
    root for the bracketing solver.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if method not in ("closed_form", "root_find"):
        raise DomainError(f"unknown method {method!r}")
    closed = _closed_form_threshold(family, n)

    if n <= _TERM_PATH_MAX_QUBITS:
        w = build_witness(family, n)
        target = target_state(family, n, max_qubits)
        identity_coeff = w.identity_coefficient
        pure = witness_expectation(w, target)
    else:
        identity_coeff, pure = _structural_target_values(family, n, max_qubits)
    if pure >= 0.0:
        raise NumericError(f"target expectation {pure} is not negative; no threshold")
    root = float(brentq(lambda p: p * identity_coeff + (1.0 - p) * pure,
                        0.0, 1.0, xtol=1e-14))

    if abs(closed - root) > THRESHOLD_AGREEMENT_ATOL:
        raise NumericError(
            f"threshold routes disagree for {family} n={n}: "
            f"closed {closed!r} vs root {root!r}")
    tr1, tr2 = _projector_traces(family, n)
    return ThresholdReport(
        family=family, n=n,
        p_threshold=closed if method == "closed_form" else root,
        method=method, trace_p1=tr1, trace_p2=tr2,
        p_closed_form=closed, p_root_find=root)


def settings_count(method: str, n: int) -> int:
    """Local measurement settings needed: 2 for the witnesses, 2^n for a
    GHZ Bell-inequality test."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if method == "witness":
        return 2
    if method == "bell_ghz":
        return 2 ** n
    raise DomainError(f"unknown method {method!r}")
