"""
Pauli algebra for the braiding simulator.
Contains exact n-qubit Pauli strings, real-weighted Pauli sums and expectation values.

Letters are stored per qubit with character q acting on qubit q; the dense
matrix form is little-endian (qubit 0 is the least significant basis bit).
"""

import logging
import re
from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from .errors import DimensionError

logger = logging.getLogger(__name__)

LETTERS = "IXYZ"

# Phase is stored as a power of i: 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i
PHASE_VALUES = (1, 1j, -1, -1j)
PHASE_PREFIXES = ("+", "+i", "-", "-i")

# (a, b) -> (letter, power of i) for the single-qubit product a·b
_PRODUCT_TABLE: Dict[Tuple[str, str], Tuple[str, int]] = {
    ("X", "Y"): ("Z", 1), ("Y", "X"): ("Z", 3),
    ("Y", "Z"): ("X", 1), ("Z", "Y"): ("X", 3),
    ("Z", "X"): ("Y", 1), ("X", "Z"): ("Y", 3),
}

PAULI_MATRICES: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_LABEL_PATTERN = re.compile(r"^\s*([+\-−]?)\s*(i?)\s*([IXYZ]+)\s*$")
_TERM_PATTERN = re.compile(r"([+-]?)(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)\*)?([^+\-*]+)")


def _letter_product(a: str, b: str) -> Tuple[str, int]:
    if a == "I":
        return b, 0
    if b == "I" or a == b:
        return ("I", 0) if a == b else (a, 0)
    return _PRODUCT_TABLE[(a, b)]


def _parity(values: np.ndarray) -> np.ndarray:
    """Parity of the set bits of each entry."""
    parity = np.zeros_like(values)
    work = values.copy()
    while np.any(work):
        parity ^= work & 1
        work >>= 1
    return parity


@dataclass(frozen=True)
class PauliString:
    """
    An n-qubit Pauli operator with a phase in {+1, -1, +i, -i}.

    Attributes:
        letters: One character from "IXYZ" per qubit, character q acting on qubit q
        phase: Power of i multiplying the tensor product (0..3)
    """

    letters: str
    phase: int = 0

    def __post_init__(self):
        if not self.letters or any(c not in LETTERS for c in self.letters):
            raise ValueError(f"Invalid Pauli letters: {self.letters!r}")
        object.__setattr__(self, "phase", self.phase % 4)

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse text such as "+ZZII", "-iXY" or "YIXI" (unicode minus accepted)."""
        match = _LABEL_PATTERN.match(label)
        if not match:
            raise ValueError(f"Cannot parse Pauli string: {label!r}")
        sign, imag, letters = match.groups()
        phase = (2 if sign in ("-", "−") else 0) + (1 if imag else 0)
        return cls(letters, phase)

    @classmethod
    def from_sparse(cls, n: int, ops: Dict[int, str], sign: int = 1) -> "PauliString":
        """Build a string from {qubit: letter}, e.g. from_sparse(4, {0: "Z", 1: "Z"})."""
        letters = ["I"] * n
        for qubit, letter in ops.items():
            if not 0 <= qubit < n:
                raise DimensionError(f"Qubit {qubit} out of range for {n} qubits")
            letters[qubit] = letter
        return cls("".join(letters), 0 if sign > 0 else 2)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @property
    def coefficient(self) -> complex:
        return PHASE_VALUES[self.phase]

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        """Real sign of a Hermitian string."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(q for q, c in enumerate(self.letters) if c != "I")

    @property
    def weight(self) -> int:
        return len(self.support)

    def stripped(self) -> "PauliString":
        """Same letters with phase +1."""
        return PauliString(self.letters)

    def __str__(self) -> str:
        return PHASE_PREFIXES[self.phase] + self.letters

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, self.phase + 2)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return mul(self, other)

    def commutes_with(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def masks(self) -> Tuple[int, int, int]:
        """Return (x_mask, z_mask, y_count) for bitwise application."""
        x_mask = z_mask = 0
        y_count = 0
        for q, c in enumerate(self.letters):
            if c in "XY":
                x_mask |= 1 << q
            if c in "ZY":
                z_mask |= 1 << q
            if c == "Y":
                y_count += 1
        return x_mask, z_mask, y_count

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """Return P|psi> for an amplitude vector of length 2^n."""
        if amps.shape[0] != 1 << self.n:
            raise DimensionError(f"{self} acts on {self.n} qubits, vector has {amps.shape[0]} amplitudes")
        x_mask, z_mask, y_count = self.masks()
        # Y = iXZ, so P = phase * i^{#Y} * X^x Z^z
        coefficient = PHASE_VALUES[(self.phase + y_count) % 4]
        index = np.arange(amps.shape[0])
        signs = 1 - 2 * _parity(index & z_mask)
        out = np.empty_like(amps, dtype=complex)
        out[index ^ x_mask] = coefficient * signs * amps
        return out

    def to_matrix(self) -> np.ndarray:
        # Little-endian: qubit n-1 is the leftmost Kronecker factor
        mats = [PAULI_MATRICES[c] for c in reversed(self.letters)]
        return self.coefficient * reduce(np.kron, mats)


def mul(a: PauliString, b: PauliString) -> PauliString:
    """Product a·b with the accumulated phase."""
    if a.n != b.n:
        raise DimensionError(f"Length mismatch: {a.n} vs {b.n}")
    phase = a.phase + b.phase
    letters = []
    for x, y in zip(a.letters, b.letters):
        letter, power = _letter_product(x, y)
        letters.append(letter)
        phase += power
    return PauliString("".join(letters), phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the number of positions with distinct non-identity letters is even."""
    if a.n != b.n:
        raise DimensionError(f"Length mismatch: {a.n} vs {b.n}")
    clashes = sum(1 for x, y in zip(a.letters, b.letters) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


@dataclass(frozen=True)
class PauliSum:
    """
    Real-weighted sum of Hermitian Pauli strings.

    Attributes:
        terms: Tuple of (coefficient, PauliString) with phase-normalized strings
    """

    terms: Tuple[Tuple[float, PauliString], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("PauliSum needs at least one term")
        normalized = []
        n = self.terms[0][1].n
        for coefficient, string in self.terms:
            if isinstance(coefficient, complex):
                if abs(coefficient.imag) > 0:
                    raise ValueError(f"Complex coefficient {coefficient} rejected")
                coefficient = coefficient.real
            if not string.is_hermitian:
                raise ValueError(f"Non-Hermitian term {string}")
            if string.n != n:
                raise DimensionError("All terms must act on the same number of qubits")
            normalized.append((float(coefficient) * string.sign, string.stripped()))
        object.__setattr__(self, "terms", tuple(normalized))

    @classmethod
    def of(cls, string: Union[PauliString, str], coefficient: float = 1.0) -> "PauliSum":
        if isinstance(string, str):
            string = PauliString.from_label(string)
        return cls(((coefficient, string),))

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[float, PauliString]], tol: float = 1e-15) -> "PauliSum":
        """Build a sum dropping coefficients below tol."""
        kept = tuple((c, s) for c, s in terms if abs(c) > tol)
        return cls(kept)

    @classmethod
    def parse(cls, text: str) -> "PauliSum":
        """Parse "-1.0*YIYI + 0.707*XIIX" style text. Coefficients may use exponents ("1e-3*XX")."""
        normalized = text.replace("−", "-").replace(" ", "")
        terms = []
        position = 0
        while position < len(normalized):
            match = _TERM_PATTERN.match(normalized, position)
            if match is None or (position and not match.group(1)):
                raise ValueError(f"Malformed Pauli sum at offset {position}: {text!r}")
            sign, coefficient, label = match.groups()
            if coefficient is None:
                terms.append((1.0, PauliString.from_label(sign + label)))
            else:
                terms.append((float(sign + coefficient), PauliString.from_label(label)))
            position = match.end()
        if not terms:
            raise ValueError(f"Empty Pauli sum: {text!r}")
        return cls(tuple(terms))

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    @property
    def is_single_string(self) -> bool:
        return len(self.terms) == 1

    def __str__(self) -> str:
        parts = []
        for coefficient, string in self.terms:
            parts.append(f"{coefficient:+.6g}*{string.letters}")
        return " ".join(parts)

    def apply(self, amps: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amps, dtype=complex)
        for coefficient, string in self.terms:
            out += coefficient * string.apply(amps)
        return out

    def to_matrix(self) -> np.ndarray:
        return sum(c * s.to_matrix() for c, s in self.terms)

    def square(self) -> Dict[str, complex]:
        """Algebraic square as {letters: coefficient}, zero entries dropped."""
        accumulated: Dict[str, complex] = {}
        for ca, sa in self.terms:
            for cb, sb in self.terms:
                product = sa * sb
                accumulated[product.letters] = accumulated.get(product.letters, 0) + ca * cb * product.coefficient
        return {k: v for k, v in accumulated.items() if abs(v) > 1e-12}

    def squares_to_identity(self, tol: float = 1e-12) -> bool:
        square = self.square()
        identity = "I" * self.n
        return set(square) <= {identity} and abs(square.get(identity, 0) - 1) < tol


Observable = Union[PauliString, PauliSum]


def as_sum(obs: Observable) -> PauliSum:
    if isinstance(obs, PauliSum):
        return obs
    if not obs.is_hermitian:
        raise ValueError(f"Observable {obs} is not Hermitian")
    return PauliSum(((1.0, obs),))


def expectation(state, obs: Observable) -> float:
    """
    Real expectation value <psi|obs|psi>.

    Args:
        state: StateVector (anything with an `amps` attribute) or a raw amplitude array
        obs: Hermitian PauliString or PauliSum

    Returns:
        The expectation value as a float
    """
    amps = getattr(state, "amps", state)
    value = np.vdot(amps, as_sum(obs).apply(amps))
    if abs(value.imag) > 1e-10:
        logger.warning(f"Expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def pauli_strings(n: int, include_identity: bool = False) -> List[PauliString]:
    """All 4^n strings in lexicographic IXYZ order."""
    out: List[PauliString] = []
    for index in range(4 ** n):
        letters = []
        for _ in range(n):
            letters.append(LETTERS[index % 4])
            index //= 4
        string = PauliString("".join(letters))
        if include_identity or string.weight:
            out.append(string)
    return out


def random_pauli(n: int, rng: np.random.Generator, allow_phase: bool = True) -> PauliString:
    letters = "".join(rng.choice(list(LETTERS), size=n))
    phase = int(rng.integers(4)) if allow_phase else 0
    return PauliString(letters, phase)
