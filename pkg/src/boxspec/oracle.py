"""Brute-force discretisations used as ground truth for the analytic results.

Nothing here shares code with the spectral calculus: the finite difference
operators are assembled node by node and diagonalised directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

MAX_ORDER = 4096
DISC_MAX_NODES = 8192
JACOBI_AUTO_MAX = 256
SYMMETRY_RTOL = 1e-14


# -- dense symmetric eigensolver ----------------------------------------------

def check_symmetric(M) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_ORDER:
        raise ValueError(f"order {A.shape[0]} exceeds the dense bound {MAX_ORDER}")
    scale = np.max(np.abs(A)) if A.size else 0.0
    if A.size and np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return A


def jacobi_eigenvalues(M, tol: float = 1e-12, max_sweeps: int = 60) -> np.ndarray:
    """Cyclic-by-row Jacobi; stops when the off-diagonal norm is below ``tol * |M|_F``."""
    A = np.array(check_symmetric(M), dtype=float, copy=True)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if n == 0 or scale == 0.0:
        return np.sort(np.diag(A)).copy()
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (theta + math.copysign(math.hypot(theta, 1.0), theta))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q]
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :]
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(A))


def symmetric_eigen_dense(M, method: str = "auto") -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending.

    ``method="jacobi"`` forces the in-house Jacobi sweeps, ``"lapack"`` uses
    LAPACK's ``syevd``; ``"auto"`` picks Jacobi up to order 256.
    """
    A = check_symmetric(M)
    if method == "auto":
        method = "jacobi" if A.shape[0] <= JACOBI_AUTO_MAX else "lapack"
    if method == "jacobi":
        return jacobi_eigenvalues(A)
    if method == "lapack":
        return np.linalg.eigvalsh(A)
    raise ValueError(f"unknown method {method!r}")


def kronecker_sum(A, B) -> np.ndarray:
    """``A ⊗ I + I ⊗ B``; spectrum is the Minkowski sum of the two spectra."""
    A = check_symmetric(A)
    B = check_symmetric(B)
    m, k = A.shape[0], B.shape[0]
    if m * k > MAX_ORDER:
        raise ValueError(f"Kronecker sum of orders {m} and {k} exceeds {MAX_ORDER}")
    return np.kron(A, np.eye(k)) + np.kron(np.eye(m), B)


# -- grids --------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    length: float
    points: int

    @property
    def step(self) -> float:
        return self.length / (self.points + 1)


@dataclass(frozen=True)
class RectGrid:
    a: float
    b: float
    nx: int
    ny: int


@dataclass(frozen=True)
class DiscGrid:
    radius: float
    step: float

    def nodes(self) -> list[tuple[int, int]]:
        """Integer lattice indices ``(i, j)`` strictly inside the disc, row-major."""
        r = self.radius / self.step
        bound = r * r * (1.0 - 1e-12)
        m = int(math.floor(r))
        return [(i, j) for i in range(-m, m + 1) for j in range(-m, m + 1) if i * i + j * j < bound]


def dirichlet_matrix(grid) -> np.ndarray:
    """Standard 3- or 5-point ``-Δ`` with zero Dirichlet values outside the grid."""
    if isinstance(grid, Interval):
        if grid.points < 1:
            raise ValueError("an interval grid needs at least one point")
        h = grid.step
        n = grid.points
        L = np.zeros((n, n))
        for i in range(n):
            L[i, i] = 2.0 / h ** 2
            if i + 1 < n:
                L[i, i + 1] = L[i + 1, i] = -1.0 / h ** 2
        return L
    if isinstance(grid, RectGrid):
        hx = grid.a / (grid.nx + 1)
        hy = grid.b / (grid.ny + 1)
        nx, ny = grid.nx, grid.ny
        L = np.zeros((nx * ny, nx * ny))
        for i in range(nx):
            for j in range(ny):
                r = i * ny + j
                L[r, r] = 2.0 / hx ** 2 + 2.0 / hy ** 2
                if i + 1 < nx:
                    L[r, r + ny] = L[r + ny, r] = -1.0 / hx ** 2
                if j + 1 < ny:
                    L[r, r + 1] = L[r + 1, r] = -1.0 / hy ** 2
        return L
    if isinstance(grid, DiscGrid):
        nodes = grid.nodes()
        index = {ij: r for r, ij in enumerate(nodes)}
        h2 = grid.step ** 2
        L = np.zeros((len(nodes), len(nodes)))
        for r, (i, j) in enumerate(nodes):
            L[r, r] = 4.0 / h2
            for nb in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                c = index.get(nb)
                if c is not None:
                    L[r, c] = -1.0 / h2
        return L
    raise TypeError(f"unknown grid {grid!r}")


def fd_dirichlet_interval(length: float, points: int, method: str = "auto") -> np.ndarray:
    """Eigenvalues of the 1D Dirichlet ``-Δ`` (not divided by 4)."""
    return symmetric_eigen_dense(dirichlet_matrix(Interval(length, points)), method)


def interval_closed_form(length: float, points: int) -> np.ndarray:
    """Exact eigenvalues ``(2 - 2cos(kπ/(N+1)))/h²`` of the tridiagonal Toeplitz matrix."""
    h = length / (points + 1)
    k = np.arange(1, points + 1)
    return np.sort((2.0 - 2.0 * np.cos(k * np.pi / (points + 1))) / h ** 2)


def fd_dirichlet_rectangle(a: float, b: float, nx: int, ny: int, method: str = "auto") -> np.ndarray:
    return symmetric_eigen_dense(dirichlet_matrix(RectGrid(a, b, nx, ny)), method)


def fd_dirichlet_disc(radius: float, step: float, count: int | None = None) -> np.ndarray:
    """Eigenvalues of the 5-point ``-Δ`` on lattice nodes strictly inside a disc.

    With ``count`` only the lowest ``count`` eigenvalues are returned (still a
    dense solve, restricted to an index range).
    """
    if not (radius > 0 and step > 0):
        raise ValueError("radius and step must be positive")
    if step > radius / 10:
        raise ValueError(f"step {step} too coarse for radius {radius} (need step <= radius/10)")
    L = dirichlet_matrix(DiscGrid(radius, step))
    if L.shape[0] < 5:
        raise ValueError("fewer than 5 interior nodes")
    if L.shape[0] > DISC_MAX_NODES:
        raise ValueError(f"{L.shape[0]} disc nodes exceeds the dense bound")
    if count is None:
        return np.linalg.eigvalsh(L)
    count = min(count, L.shape[0])
    return scipy.linalg.eigh(L, eigvals_only=True, subset_by_index=[0, count - 1])


# -- dbar form on functions ---------------------------------------------------

def box0_operator(a: float, b: float, nx: int, ny: int) -> np.ndarray:
    """Hermitian matrix of ``u -> ||u_zbar||^2`` on a rectangle, free boundary.

    Nodes span the closed rectangle (``nx * ny`` of them, index ``i*ny + j``).
    On each cell, ``u_x`` and ``u_y`` are averaged one-sided differences over
    its four corners and ``u_zbar = (u_x + i u_y)/2``.  No boundary condition
    is imposed; the free condition is natural for this form.  The lumped
    mass is a quarter of the cell area per corner, and the returned matrix is
    ``M^{-1/2} K M^{-1/2}``, which approximates ``-Δ/4`` with the free
    condition.
    """
    if nx < 4 or ny < 4:
        raise ValueError("need nx, ny >= 4")
    hx = a / (nx - 1)
    hy = b / (ny - 1)
    cells = (nx - 1) * (ny - 1)
    D = np.zeros((cells, nx * ny), dtype=complex)
    mass = np.zeros(nx * ny)
    area = hx * hy
    c = 0
    for i in range(nx - 1):
        for j in range(ny - 1):
            n00, n10 = i * ny + j, (i + 1) * ny + j
            n01, n11 = n00 + 1, n10 + 1
            # u_zbar = (u_x + i u_y) / 2
            D[c, n10] += 0.5 * (1.0 / (2 * hx))
            D[c, n11] += 0.5 * (1.0 / (2 * hx))
            D[c, n00] -= 0.5 * (1.0 / (2 * hx))
            D[c, n01] -= 0.5 * (1.0 / (2 * hx))
            D[c, n01] += 0.5j * (1.0 / (2 * hy))
            D[c, n11] += 0.5j * (1.0 / (2 * hy))
            D[c, n00] -= 0.5j * (1.0 / (2 * hy))
            D[c, n10] -= 0.5j * (1.0 / (2 * hy))
            for node in (n00, n10, n01, n11):
                mass[node] += area / 4.0
            c += 1
    K = area * (D.conj().T @ D)
    w = 1.0 / np.sqrt(mass)
    H = w[:, None] * K * w[None, :]
    return 0.5 * (H + H.conj().T)


def realify(H: np.ndarray) -> np.ndarray:
    """Real symmetric matrix of doubled order with each eigenvalue of ``H`` twice."""
    return np.block([[H.real, -H.imag], [H.imag, H.real]])


def fd_box0_rectangle(a: float, b: float, nx: int, ny: int) -> np.ndarray:
    """Eigenvalues (each once) of the discrete function-level complex Laplacian."""
    doubled = symmetric_eigen_dense(realify(box0_operator(a, b, nx, ny)))
    return doubled[::2]


def numerical_kernel_dim(eigenvalues, rtol: float = 1e-9) -> int:
    ev = np.asarray(eigenvalues)
    return int(np.sum(ev <= rtol * max(1.0, float(np.max(np.abs(ev))))))
