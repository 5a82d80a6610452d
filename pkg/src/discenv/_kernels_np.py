"""Pure-numpy implementations of the hot disc-evaluation kernels.

Same contracts as the compiled ``_speedups`` module; selected as a
fallback in :mod:`discenv.kernels`.
"""
import numpy as np


def eval_poly(coeffs, t):
    """Horner evaluation of a vector polynomial.

    coeffs: (d+1, m) complex, coeffs[k] is the coefficient of t^k.
    t: (N,) complex sample points.
    Returns (N, m) complex values.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    t = np.asarray(t, dtype=np.complex128)
    out = np.tile(coeffs[-1], (t.shape[0], 1))
    for k in range(coeffs.shape[0] - 2, -1, -1):
        out *= t[:, None]
        out += coeffs[k]
    return out


def lognorm(coeffs, t):
    """log of the Euclidean norm of the polynomial values, shape (N,)."""
    v = eval_poly(coeffs, t)
    s = np.einsum("ij,ij->i", v, v.conj()).real
    return 0.5 * np.log(s)


def fs_density(coeffs, t):
    """Laplacian of log-norm of the polynomial: the Fubini-Study pullback
    density 2(|f|^2 |f'|^2 - |<f',f>|^2) / |f|^4, clipped at 0 (the exact
    value is nonnegative by Cauchy-Schwarz; roundoff may dip below).

    Returns (density (N,) float, squared norms (N,) float).
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    t = np.asarray(t, dtype=np.complex128)
    v = eval_poly(coeffs, t)
    s = np.einsum("ij,ij->i", v, v.conj()).real
    if coeffs.shape[0] == 1:
        return np.zeros(t.shape[0]), s
    k = np.arange(1, coeffs.shape[0], dtype=np.complex128)
    dv = eval_poly(coeffs[1:] * k[:, None], t)
    sp = np.einsum("ij,ij->i", dv, dv.conj()).real
    ip = np.einsum("ij,ij->i", dv, v.conj())
    dens = 2.0 * (s * sp - (ip * ip.conj()).real) / (s * s)
    np.clip(dens, 0.0, None, out=dens)
    return dens, s
