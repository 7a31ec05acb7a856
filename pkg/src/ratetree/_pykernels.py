"""NumPy implementation of the lattice kernels.

Dense column layout shared with the compiled kernels: position 0 holds the
zero-rate (ZIRP) state, positions 1..i+1 hold the regular states of column i.
Position 0 is only live for ZBDT lattices at i >= 1.
"""
import numpy as np


def forward_step(src, rates, i, p, q, zbdt, dst):
    """Propagate state prices from column ``i`` to column ``i + 1``."""
    dst[: i + 3] = 0.0
    disc = src[1 : i + 2] / (1.0 + rates[1 : i + 2])
    if zbdt:
        p_hat = 0.5 * (1.0 - p)
        dst[0] += p * disc[0]
        dst[1] += p_hat * disc[0]
        dst[2] += p_hat * disc[0]
        dst[3 : i + 3] += 0.5 * disc[1:]
        dst[2 : i + 2] += 0.5 * disc[1:]
        if i >= 1:
            dz = src[0] / (1.0 + rates[0])
            dst[0] += (1.0 - q) * dz
            dst[1] += q * dz
    else:
        dst[1 : i + 2] += 0.5 * disc
        dst[2 : i + 3] += 0.5 * disc
    return dst


def backward_induction(values, hits, rates, exercise, american, p, q, zbdt, exercised):
    """Roll ``values[S]`` back to the root, filling ``values[0..S-1]`` in place.

    ``values`` has shape (S+1, L, W); layer ``s`` at a child position ``c``
    is read from layer ``s | hits[i+1, c]``.
    """
    n_steps = values.shape[0] - 1
    n_layers = values.shape[1]
    width = values.shape[2]
    cols = np.arange(width)
    p_hat = 0.5 * (1.0 - p)
    for i in range(n_steps - 1, -1, -1):
        nxt = values[i + 1]
        h = hits[i + 1]
        growth = 1.0 + rates[i]
        for s in range(n_layers):
            vc = nxt[s | h, cols]
            cont = np.zeros(width)
            cont[1 : i + 2] = 0.5 * (vc[1 : i + 2] + vc[2 : i + 3])
            if zbdt:
                cont[1] = p * vc[0] + p_hat * (vc[1] + vc[2])
                if i >= 1:
                    cont[0] = (1.0 - q) * vc[0] + q * vc[1]
            lo = 0 if (zbdt and i >= 1) else 1
            cont[lo : i + 2] /= growth[lo : i + 2]
            if american:
                ex = exercise[i, s, lo : i + 2]
                better = ex > cont[lo : i + 2]
                exercised[i, s, lo : i + 2] = better
                cont[lo : i + 2] = np.where(better, ex, cont[lo : i + 2])
            values[i, s, lo : i + 2] = cont[lo : i + 2]
    return values
