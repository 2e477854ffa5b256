"""Three-term recurrences shared by the grid and special-function layers."""

import numpy as np

_PI_QUARTER = np.pi ** -0.25
_RESCALE_AT = 1e150


def hermite_table(kmax, x):
    """Normalized Hermite functions h_0..h_kmax at the points ``x``.

    Uses the recurrence
    ``h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}``
    starting from ``h_0 = pi^{-1/4} exp(-x^2/2)``. Complex ``x`` yields
    the entire extension.

    Parameters
    ----------
    kmax : int
        Highest degree, ``kmax >= 0``.
    x : array_like
        Real or complex evaluation points of any shape.

    Returns
    -------
    ndarray
        Array of shape ``(kmax + 1, *x.shape)``.
    """
    x = np.asarray(x)
    dtype = np.complex128 if np.iscomplexobj(x) else np.float64
    out = np.empty((kmax + 1,) + x.shape, dtype=dtype)
    out[0] = _PI_QUARTER * np.exp(-0.5 * x * x)
    if kmax >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, kmax):
        out[k + 1] = (x * np.sqrt(2.0 / (k + 1)) * out[k]
                      - np.sqrt(k / (k + 1)) * out[k - 1])
    return out


def log_hermite_table(kmax, z):
    """Complex logarithms of h_0..h_kmax at ``z`` without overflow.

    The polynomial factor is propagated with per-point rescaling and the
    Gaussian factor is added analytically, so arguments with large
    imaginary part stay finite. Exact zeros map to ``-inf`` real part.
    """
    z = np.asarray(z, dtype=np.complex128)
    logs = np.empty((kmax + 1,) + z.shape, dtype=np.complex128)
    base = np.log(_PI_QUARTER) - 0.5 * z * z
    prev = np.zeros(z.shape, dtype=np.complex128)
    cur = np.ones(z.shape, dtype=np.complex128)
    offset = np.zeros(z.shape)
    with np.errstate(divide="ignore"):
        logs[0] = base
        for k in range(kmax):
            nxt = z * np.sqrt(2.0 / (k + 1)) * cur - np.sqrt(k / (k + 1)) * prev
            prev, cur = cur, nxt
            big = np.abs(cur) > _RESCALE_AT
            if np.any(big):
                scale = np.where(big, _RESCALE_AT, 1.0)
                cur = cur / scale
                prev = prev / scale
                offset = offset + np.log(scale)
            logs[k + 1] = np.log(cur) + offset + base
    return logs


def laguerre_table(kmax, a, x):
    """Generalized Laguerre polynomials L_0^a..L_kmax^a at ``x``.

    ``(k+1) L_{k+1} = (2k + a + 1 - x) L_k - (k + a) L_{k-1}``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 1.0 + a - x
    for k in range(1, kmax):
        out[k + 1] = ((2 * k + a + 1 - x) * out[k] - (k + a) * out[k - 1]) / (k + 1)
    return out
