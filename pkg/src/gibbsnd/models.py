"""Model Hamiltonians and Pauli-string observables for experiments."""

import json
from functools import reduce

import numpy as np

from .errors import ConfigError

__all__ = [
    "PAULIS",
    "pauli_string_operator",
    "tfim_hamiltonian",
    "heisenberg_hamiltonian",
    "random_2local_hamiltonian",
    "build_model",
    "load_matrix_file",
]

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_string_operator(s, n_qubits=None):
    """Operator for a Pauli string like "XIZ" (one letter per qubit)."""
    s = s.strip().upper()
    if n_qubits is not None and len(s) != n_qubits:
        raise ConfigError(f"Pauli string {s!r} does not have {n_qubits} letters")
    try:
        mats = [PAULIS[ch] for ch in s]
    except KeyError as exc:
        raise ConfigError(f"unknown Pauli letter in {s!r}") from exc
    return reduce(np.kron, mats)


def _site_op(op, site, n):
    mats = [PAULIS["I"]] * n
    mats[site] = op
    return reduce(np.kron, mats)


def tfim_hamiltonian(n, g=1.0):
    """Open-chain transverse-field Ising model -sum Z_i Z_{i+1} - g sum X_i."""
    d = 2**n
    h = np.zeros((d, d), dtype=complex)
    for i in range(n - 1):
        h -= _site_op(PAULIS["Z"], i, n) @ _site_op(PAULIS["Z"], i + 1, n)
    for i in range(n):
        h -= g * _site_op(PAULIS["X"], i, n)
    return h


def heisenberg_hamiltonian(n):
    """Open-chain Heisenberg model sum (XX + YY + ZZ)."""
    d = 2**n
    h = np.zeros((d, d), dtype=complex)
    for i in range(n - 1):
        for axis in "XYZ":
            h += _site_op(PAULIS[axis], i, n) @ _site_op(PAULIS[axis], i + 1, n)
    return h


def random_2local_hamiltonian(n, seed=0):
    """Nearest-neighbor 2-local Hamiltonian with seeded coefficients in [-1, 1]."""
    rng = np.random.default_rng(seed)
    d = 2**n
    h = np.zeros((d, d), dtype=complex)
    for i in range(n):
        for axis in "XYZ":
            h += rng.uniform(-1, 1) * _site_op(PAULIS[axis], i, n)
    for i in range(n - 1):
        for a in "XYZ":
            for b in "XYZ":
                h += rng.uniform(-1, 1) * (
                    _site_op(PAULIS[a], i, n) @ _site_op(PAULIS[b], i + 1, n)
                )
    return h


def load_matrix_file(path):
    """Load an explicit complex matrix from .npy or a JSON {re, im} document."""
    path = str(path)
    if path.endswith(".npy"):
        return np.asarray(np.load(path), dtype=complex)
    with open(path) as fh:
        doc = json.load(fh)
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    return re + 1j * im


def build_model(name, n_qubits, g=1.0, seed=0, normalized=False):
    """Build a named model Hamiltonian; optionally rescale to unit norm."""
    if name == "tfim":
        h = tfim_hamiltonian(n_qubits, g)
    elif name == "heisenberg":
        h = heisenberg_hamiltonian(n_qubits)
    elif name == "random_2local":
        h = random_2local_hamiltonian(n_qubits, seed)
    else:
        h = load_matrix_file(name)
        if h.shape[0] != 2**n_qubits:
            raise ConfigError(
                f"matrix file dimension {h.shape[0]} does not match n_qubits={n_qubits}"
            )
    if normalized:
        h = h / np.linalg.norm(h, 2)
    return h
