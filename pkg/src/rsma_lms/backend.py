"""Batch kernels for the Monte-Carlo hot path: numba JIT or pure numpy.

The backend is picked via the RSMA_LMS_BACKEND environment variable:
'numba' (default when importable), 'numpy', or 'auto'. Both paths compute
identical quantities; they differ only in summation order at the
floating-point level.

Kernel contract, for a block of T channel draws h with shape (T, K, N),
rows h[t, k] = h_k^T:

    gram_block(h)[t, k, i] = sum_n h[t,k,n] * conj(h[t,i,n])   (= h_k^T h_i^*)

    sinr_block(h, sigma_e2, sigma2, alpha, rho) -> (gc, gp, ge) where
      gc[t, k]    : SINR of the common stream at user k
      gp[t, k]    : SINR of user k's private stream after removing the CM
      ge[t, i, k] : SINR at eavesdropper i decoding user k's private stream
                    (diagonal fixed at 0; entries exist for i != k)

Inner dot products switch to compensated (Kahan) accumulation for
N >= 1024; at the array sizes used here plain accumulation is exact enough
and much cheaper.
"""

import os

import numpy as np

ENV_VAR = "RSMA_LMS_BACKEND"
_KAHAN_MIN_N = 1024

try:
    import numba as nb

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def active_backend() -> str:
    """Resolve the backend name from the environment."""
    choice = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
    if choice == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    if choice == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError(f"{ENV_VAR}=numba but numba is not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"{ENV_VAR} must be 'numba', 'numpy' or 'auto', got {choice!r}")


def _as_block(h: np.ndarray) -> np.ndarray:
    h = np.ascontiguousarray(h, dtype=np.complex128)
    if h.ndim != 3:
        raise ValueError("channel block must have shape (T, K, N)")
    return h


# ---------------------------------------------------------------- numpy path

def _gram_block_np(h):
    return h @ np.conj(np.swapaxes(h, 1, 2))


def _sinr_block_np(h, sigma_e2, sigma2, alpha, rho):
    rho_bar = 1.0 - rho
    s = _gram_block_np(h)
    n2 = np.einsum("tkk->tk", s).real
    a2 = s.real**2 + s.imag**2
    a2_sum = a2.sum(axis=2)
    n4 = n2**2
    se_tot = sigma_e2.sum()

    row = s.sum(axis=2)
    gc_num = alpha * rho * (row.real**2 + row.imag**2 + se_tot * n2)
    gc_den = sigma2[None, :] + alpha * rho_bar * (se_tot * n2 + a2_sum)
    gc = gc_num / gc_den

    gp_num = alpha * rho_bar * (n4 + n2 * sigma_e2[None, :])
    gp_den = sigma2[None, :] + alpha * rho_bar * (
        a2_sum - n4 + n2 * (se_tot - sigma_e2[None, :])
    )
    gp = gp_num / gp_den

    # [t, i, k]: i eavesdrops on user k's private stream.
    ge_num = alpha * rho_bar * (a2 + sigma_e2[None, None, :] * n2[:, :, None])
    ge_den = sigma2[None, :, None] + alpha * rho_bar * (
        (a2_sum - n4)[:, :, None]
        - a2
        + n2[:, :, None] * (se_tot - sigma_e2[None, :, None] - sigma_e2[None, None, :])
    )
    ge = ge_num / ge_den
    k_idx = np.arange(h.shape[1])
    ge[:, k_idx, k_idx] = 0.0
    return gc, gp, ge


# ---------------------------------------------------------------- numba path

if _HAVE_NUMBA:

    @nb.njit(cache=True, inline="always")
    def _dot_conj(a, b, n):
        if n >= _KAHAN_MIN_N:
            acc = 0.0 + 0.0j
            comp = 0.0 + 0.0j
            for t in range(n):
                y = a[t] * b[t].conjugate() - comp
                s = acc + y
                comp = (s - acc) - y
                acc = s
            return acc
        acc = 0.0 + 0.0j
        for t in range(n):
            acc += a[t] * b[t].conjugate()
        return acc

    @nb.njit(cache=True, parallel=True)
    def _gram_block_nb(h):
        T, K, N = h.shape
        out = np.empty((T, K, K), dtype=np.complex128)
        for t in nb.prange(T):
            for k in range(K):
                for i in range(k, K):
                    v = _dot_conj(h[t, k], h[t, i], N)
                    out[t, k, i] = v
                    out[t, i, k] = v.conjugate()
        return out

    @nb.njit(cache=True, parallel=True)
    def _sinr_block_nb(h, sigma_e2, sigma2, alpha, rho):
        T, K, N = h.shape
        rho_bar = 1.0 - rho
        se_tot = sigma_e2.sum()
        gc = np.empty((T, K))
        gp = np.empty((T, K))
        ge = np.zeros((T, K, K))
        for t in nb.prange(T):
            s = np.empty((K, K), dtype=np.complex128)
            for k in range(K):
                for i in range(k, K):
                    v = _dot_conj(h[t, k], h[t, i], N)
                    s[k, i] = v
                    s[i, k] = v.conjugate()
            n2 = np.empty(K)
            a2 = np.empty((K, K))
            a2_sum = np.empty(K)
            for k in range(K):
                n2[k] = s[k, k].real
                tot = 0.0
                for i in range(K):
                    a2[k, i] = s[k, i].real ** 2 + s[k, i].imag ** 2
                    tot += a2[k, i]
                a2_sum[k] = tot
            for k in range(K):
                row = 0.0 + 0.0j
                for i in range(K):
                    row += s[k, i]
                num_c = alpha * rho * (row.real**2 + row.imag**2 + se_tot * n2[k])
                den_c = sigma2[k] + alpha * rho_bar * (se_tot * n2[k] + a2_sum[k])
                gc[t, k] = num_c / den_c

                n4 = n2[k] * n2[k]
                num_p = alpha * rho_bar * (n4 + n2[k] * sigma_e2[k])
                den_p = sigma2[k] + alpha * rho_bar * (
                    a2_sum[k] - n4 + n2[k] * (se_tot - sigma_e2[k])
                )
                gp[t, k] = num_p / den_p
            for i in range(K):
                for k in range(K):
                    if i == k:
                        continue
                    num_e = alpha * rho_bar * (a2[i, k] + sigma_e2[k] * n2[i])
                    den_e = sigma2[i] + alpha * rho_bar * (
                        a2_sum[i]
                        - a2[i, i]
                        - a2[i, k]
                        + n2[i] * (se_tot - sigma_e2[i] - sigma_e2[k])
                    )
                    ge[t, i, k] = num_e / den_e
        return gc, gp, ge


# ------------------------------------------------------------------ dispatch

def gram_block(h: np.ndarray) -> np.ndarray:
    """Pairwise inner products h_k^T h_i^* for each draw in a block."""
    h = _as_block(h)
    if active_backend() == "numba":
        return _gram_block_nb(h)
    return _gram_block_np(h)


def sinr_block(
    h: np.ndarray,
    sigma_e2: np.ndarray,
    sigma2: np.ndarray,
    alpha: float,
    rho: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All three decoding SINRs for a block of actual-channel draws."""
    h = _as_block(h)
    sigma_e2 = np.ascontiguousarray(sigma_e2, dtype=np.float64)
    sigma2 = np.ascontiguousarray(sigma2, dtype=np.float64)
    if sigma_e2.shape != (h.shape[1],) or sigma2.shape != (h.shape[1],):
        raise ValueError("sigma_e2 and sigma2 must have length K")
    if active_backend() == "numba":
        return _sinr_block_nb(h, sigma_e2, sigma2, float(alpha), float(rho))
    return _sinr_block_np(h, sigma_e2, sigma2, float(alpha), float(rho))


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs (no-op on the numpy path)."""
    if active_backend() != "numba":
        return
    h = np.ones((1, 2, 2), dtype=np.complex128)
    ones = np.ones(2)
    _gram_block_nb(h)
    _sinr_block_nb(h, ones * 0.1, ones, 1.0, 0.5)
