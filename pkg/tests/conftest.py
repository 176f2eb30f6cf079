import json
import random
import warnings

import pytest

from circuit_etch.circuit import Circuit, Gate, GateKind, parse_circuit

SINGLE_KINDS = ("h", "s", "sdg", "t", "tdg", "rz", "rx", "ry")


def circ(n, *gates, id="c"):
    """Build a circuit from compact gate dicts, going through the JSON parser."""
    return parse_circuit(json.dumps({"id": id, "qubits": n, "gates": list(gates)}))


def random_gate(rng: random.Random, n: int, kinds=SINGLE_KINDS + ("cnot",)) -> Gate:
    kind = rng.choice(kinds if n > 1 else [k for k in kinds if k != "cnot"])
    if kind == "cnot":
        w = rng.randrange(n - 1)
        c, t = (w, w + 1) if rng.random() < 0.5 else (w + 1, w)
        return Gate(GateKind.CNOT, t, c)
    if kind == "urot":
        return Gate(GateKind.UROT, rng.randrange(n), None, tuple(rng.uniform(-3, 3) for _ in range(3)))
    if kind in ("rz", "rx", "ry"):
        return Gate(GateKind(kind), rng.randrange(n), None, (rng.uniform(-3.1, 3.1),))
    return Gate(GateKind(kind), rng.randrange(n))


def seeded_circuit(seed: int, max_gates: int = 2, max_wires: int = 2, kinds=SINGLE_KINDS + ("cnot", "urot")) -> Circuit:
    rng = random.Random(seed)
    n = rng.randint(1, max_wires)
    gates = [random_gate(rng, n, kinds) for _ in range(rng.randint(1, max_gates))]
    return Circuit(n, tuple(gates), f"seeded-{seed}")


@pytest.fixture
def ghz3():
    return circ(
        3,
        {"type": "h", "target": 0},
        {"type": "cnot", "control": 0, "target": 1},
        {"type": "cnot", "control": 1, "target": 2},
        id="ghz3",
    )


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield
