"""Independent dense density-operator engine used as the test oracle.

Everything here goes through explicit Kraus matrices, partial traces and the
Wootters concurrence; it never touches the combinatorial branch engine it is
used to validate.
"""

from __future__ import annotations

import itertools

from redsim.locc import sp_kraus
from redsim.qcore import (
    DensityOperator,
    LinearOp,
    apply_kraus,
    concurrence,
    partial_trace,
    tensor,
)
from redsim.resources import w_sigma


def best_pair_concurrence(rho: DensityOperator) -> float:
    """Maximum concurrence over all qubit pairs of a state."""
    m = rho.num_qubits
    if m < 2:
        return 0.0
    if m == 2:
        return concurrence(rho)
    return max(
        concurrence(partial_trace(rho, pair))
        for pair in itertools.combinations(range(m), 2)
    )


def single_round_classes(n_parties: int, lost: int, kappa: float):
    """One dense measurement round on the survivor state, grouped by the
    count of keep-outcomes.

    Returns ``{j: (probability, best_pair_concurrence or None)}``; the
    concurrence entry is ``None`` for zero-probability classes.  States in
    the same class must agree on their concurrence, which is asserted.
    """
    sigma = w_sigma(n_parties, lost)
    m = n_parties - lost
    keep, drop = sp_kraus(kappa)
    mats = {0: LinearOp(keep.matrix), 1: LinearOp(drop.matrix)}
    classes: dict[int, tuple[float, float | None]] = {}
    for bits in itertools.product((0, 1), repeat=m):
        op = tensor([mats[b] for b in bits])
        weight, post = apply_kraus(op, sigma)
        j = bits.count(0)
        prob, conc = classes.get(j, (0.0, None))
        prob += weight
        if post is not None:
            value = best_pair_concurrence(post)
            if conc is not None:
                assert abs(conc - value) < 1e-10, (
                    f"strings of class {j} disagree: {conc} vs {value}"
                )
            conc = value
        classes[j] = (prob, conc)
    return classes


def dense_average(rho: DensityOperator, kappa: float, rounds: int) -> float:
    """Expected best-pair concurrence after measuring every live qubit for up
    to ``rounds`` rounds, stopping at two live qubits.

    Dropped qubits (outcome 1) are traced out between rounds; branches with
    fewer than two live qubits score zero.
    """
    m = rho.num_qubits
    if m <= 2 or rounds == 0:
        return best_pair_concurrence(rho)
    keep, drop = sp_kraus(kappa)
    mats = {0: LinearOp(keep.matrix), 1: LinearOp(drop.matrix)}
    acc = 0.0
    for bits in itertools.product((0, 1), repeat=m):
        op = tensor([mats[b] for b in bits])
        weight, post = apply_kraus(op, rho)
        if post is None:
            continue
        live = [q for q, b in enumerate(bits) if b == 0]
        if len(live) < 2:
            continue
        reduced = partial_trace(post, live)
        acc += weight * dense_average(reduced, kappa, rounds - 1)
    return acc
