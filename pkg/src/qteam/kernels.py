"""Hot inner loops: angle-grid cost evaluation and sequential-measurement sampling.

Every kernel has a numpy implementation and, when numba is importable, a
compiled twin. Both perform the same floating point operations in the same
order, so their outputs agree bit for bit. The public names dispatch on
:data:`qteam._accel.USE_NUMBA`.
"""
import numpy as np

from . import _accel


def cos_difference_table(resolution):
    """``C[i, j] = cos(2*pi*(i - j)/resolution)``."""
    step = 2.0 * np.pi / resolution
    idx = np.arange(resolution)
    return np.cos((idx[:, None] - idx[None, :]) * step)


def grid_costs_numpy(coeffs, offset, cos_table):
    """Cost at every point of the angle grid, flattened in C order.

    Grid axes are (phi_b0, phi_b1, phi_h0, phi_h1); the cost is
    ``offset + sum_{x,y} coeffs[x, y] * cos(phi_bx - phi_hy)``.
    """
    c = cos_table
    out = offset + coeffs[0, 0] * c[:, None, :, None]
    out = out + coeffs[0, 1] * c[:, None, None, :]
    out = out + coeffs[1, 0] * c[None, :, :, None]
    out = out + coeffs[1, 1] * c[None, :, None, :]
    return np.ascontiguousarray(np.broadcast_to(out, (c.shape[0],) * 4)).ravel()


def _grid_costs_loop(coeffs, offset, cos_table):
    g = cos_table.shape[0]
    out = np.empty(g * g * g * g)
    w00 = coeffs[0, 0]
    w01 = coeffs[0, 1]
    w10 = coeffs[1, 0]
    w11 = coeffs[1, 1]
    k = 0
    for a in range(g):
        for b in range(g):
            for c in range(g):
                for d in range(g):
                    v = offset + w00 * cos_table[a, c]
                    v = v + w01 * cos_table[a, d]
                    v = v + w10 * cos_table[b, c]
                    v = v + w11 * cos_table[b, d]
                    out[k] = v
                    k += 1
    return out


grid_costs_jit = _accel.jit(_grid_costs_loop)


def grid_costs(coeffs, offset, cos_table):
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    cos_table = np.ascontiguousarray(cos_table, dtype=np.float64)
    if _accel.USE_NUMBA:
        return grid_costs_jit(coeffs, float(offset), cos_table)
    return grid_costs_numpy(coeffs, float(offset), cos_table)


def sample_counts_numpy(p_first0, p_second0, uniforms):
    """Outcome counts ``n[first, second]`` of a two-stage measurement.

    ``p_first0`` is the probability the first agent reads 0;
    ``p_second0[k]`` the probability the second reads 0 given the first read k.
    ``uniforms`` has shape (n, 2), one row per shot.
    """
    first = (uniforms[:, 0] >= p_first0).astype(np.int64)
    second = (uniforms[:, 1] >= p_second0[first]).astype(np.int64)
    return np.bincount(2 * first + second, minlength=4).reshape(2, 2)


def _sample_counts_loop(p_first0, p_second0, uniforms):
    counts = np.zeros((2, 2), dtype=np.int64)
    for i in range(uniforms.shape[0]):
        first = 0 if uniforms[i, 0] < p_first0 else 1
        second = 0 if uniforms[i, 1] < p_second0[first] else 1
        counts[first, second] += 1
    return counts


sample_counts_jit = _accel.jit(_sample_counts_loop)


def sample_counts(p_first0, p_second0, uniforms):
    p_second0 = np.ascontiguousarray(p_second0, dtype=np.float64)
    uniforms = np.ascontiguousarray(uniforms, dtype=np.float64)
    if _accel.USE_NUMBA:
        return sample_counts_jit(float(p_first0), p_second0, uniforms)
    return sample_counts_numpy(float(p_first0), p_second0, uniforms)
