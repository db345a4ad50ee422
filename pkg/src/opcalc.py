"""
Cálculo de operadores simétricos reais de dimensão finita.

Decomposição espectral por Jacobi cíclico, cálculo funcional f(A), formas
quadráticas e os verificadores da desigualdade de Jensen para operadores.

Uso:
    from src.opcalc import SymmetricMatrix, UnitVector, ModoJensen, jensen_verify

    A = SymmetricMatrix.diagonal([0.64, 0.8])
    x = UnitVector([1.0, 1.0])
    veredito = jensen_verify(f, h, A, x, ModoJensen.INFIMUM_M)
    veredito.margin  # rhs − lhs; negativa não é erro
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import NamedTuple

import numpy as np

from src.erros import ConvergenceError, DimensionMismatch, DomainError, SpectrumDomainError
from src.funclib import Interval, ScalarFunction, evaluate

logger = logging.getLogger(__name__)

DIMENSAO_MAXIMA = 64
TOLERANCIA_JACOBI = 1e-12
MAX_VARREDURAS = 100
FOLGA_ESPECTRO = 1e-12
TOLERANCIA_SIMETRIA = 1e-10
TOLERANCIA_NORMA = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruir(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def _sym_schur2(a: np.ndarray, p: int, q: int) -> tuple[float, float]:
    """(c, s) da rotação que anula a[p, q]."""
    tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
    if tau >= 0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c


def _fora_da_diagonal(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(matriz: np.ndarray) -> SpectralDecomposition:
    a = np.array(matriz, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    limite = TOLERANCIA_JACOBI * float(np.linalg.norm(a))

    varreduras = 0
    while _fora_da_diagonal(a) > limite:
        if varreduras == MAX_VARREDURAS:
            raise ConvergenceError(
                f"Jacobi não convergiu em {MAX_VARREDURAS} varreduras "
                f"(fora da diagonal {_fora_da_diagonal(a):.3e} > {limite:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                c, s = _sym_schur2(a, p, q)
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        varreduras += 1

    logger.debug("Jacobi: dim=%s, %s varreduras", n, varreduras)
    autovalores = np.diag(a).copy()
    ordem = np.argsort(autovalores, kind="stable")
    return SpectralDecomposition(autovalores[ordem], v[:, ordem], varreduras)


class SymmetricMatrix:
    """Matriz simétrica real. Guarda só o triângulo superior; a decomposição fica em cache."""

    def __init__(self, linhas):
        arr = np.array(linhas, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"matriz não quadrada: forma {arr.shape}")
        n = arr.shape[0]
        if not 1 <= n <= DIMENSAO_MAXIMA:
            raise DomainError(f"dimensão {n} fora de [1, {DIMENSAO_MAXIMA}]")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matriz com entradas não finitas")
        assimetria = float(np.max(np.abs(arr - arr.T)))
        if assimetria > TOLERANCIA_SIMETRIA * (1.0 + float(np.max(np.abs(arr)))):
            raise DomainError(f"matriz não simétrica (assimetria {assimetria:.3e})")
        self.dim = n
        self._triangulo = arr[np.triu_indices(n)]

    @classmethod
    def diagonal(cls, valores) -> "SymmetricMatrix":
        return cls(np.diag(np.asarray(valores, dtype=float)))

    @property
    def entries(self) -> np.ndarray:
        n = self.dim
        arr = np.zeros((n, n))
        arr[np.triu_indices(n)] = self._triangulo
        return arr + np.triu(arr, 1).T

    @cached_property
    def decomposicao(self) -> SpectralDecomposition:
        return _jacobi(self.entries)

    def linhas(self) -> list[list[float]]:
        return [[float(x) for x in linha] for linha in self.entries]

    def __repr__(self) -> str:
        return f"SymmetricMatrix({self.linhas()!r})"


class UnitVector:
    """Vetor de norma 1; a entrada é normalizada na construção."""

    def __init__(self, componentes):
        arr = np.array(componentes, dtype=float).ravel()
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise DomainError("vetor vazio ou com componentes não finitas")
        norma = float(np.linalg.norm(arr))
        if norma == 0.0:
            raise DomainError("vetor nulo não pode ser normalizado")
        if abs(norma - 1.0) > TOLERANCIA_NORMA:
            logger.info("Vetor normalizado (norma original %r)", norma)
        self.components = arr / norma
        self.dim = arr.size


def spectral_decompose(A: SymmetricMatrix) -> SpectralDecomposition:
    return A.decomposicao


def _ajustar_ao_dominio(autovalores: np.ndarray, dominio: Interval) -> np.ndarray:
    """Encosta nos extremos fechados os autovalores a menos de FOLGA_ESPECTRO deles."""
    mu = autovalores.copy()
    if not dominio.lo_open:
        perto = (mu < dominio.lo) & (mu >= dominio.lo - FOLGA_ESPECTRO)
        mu[perto] = dominio.lo
    if not dominio.hi_open:
        perto = (mu > dominio.hi) & (mu <= dominio.hi + FOLGA_ESPECTRO)
        mu[perto] = dominio.hi
    return mu


def _valores_no_espectro(f: ScalarFunction, A: SymmetricMatrix) -> tuple[np.ndarray, np.ndarray]:
    dec = A.decomposicao
    mu = _ajustar_ao_dominio(dec.eigenvalues, f.domain)
    dentro = f.domain.contains_array(mu)
    if not np.all(dentro):
        fora = [float(x) for x in dec.eigenvalues[~dentro]]
        raise SpectrumDomainError(f"espectro fora do domínio {f.domain} de {f.family.value}", fora)
    valores = np.asarray(f(mu), dtype=float)
    if not np.all(np.isfinite(valores)):
        fora = [float(x) for x in dec.eigenvalues[~np.isfinite(valores)]]
        raise SpectrumDomainError(f"{f.family.value} singular no espectro", fora)
    return mu, valores


def apply_function(f: ScalarFunction, A: SymmetricMatrix) -> SymmetricMatrix:
    """f(A) = Q·f(Λ)·Qᵀ."""
    _, valores = _valores_no_espectro(f, A)
    q = A.decomposicao.eigenvectors
    return SymmetricMatrix((q * valores) @ q.T)


def _checar_dimensao(A: SymmetricMatrix, x: UnitVector) -> None:
    if A.dim != x.dim:
        raise DimensionMismatch(f"vetor de dimensão {x.dim} para matriz {A.dim}×{A.dim}")


def quadratic_form(A: SymmetricMatrix, x: UnitVector) -> float:
    """xᵀAx, limitado a [min Sp(A), max Sp(A)]."""
    _checar_dimensao(A, x)
    valor = float(x.components @ A.entries @ x.components)
    mu = A.decomposicao.eigenvalues
    return min(max(valor, float(mu[0])), float(mu[-1]))


def spectral_expectation(f: ScalarFunction, A: SymmetricMatrix, x: UnitVector) -> float:
    """⟨f(A)x,x⟩ = Σ f(μᵢ)⟨x,qᵢ⟩²."""
    _checar_dimensao(A, x)
    _, valores = _valores_no_espectro(f, A)
    pesos = (A.decomposicao.eigenvectors.T @ x.components) ** 2
    return math.fsum(pesos * valores)


class ResultadoEspectro(NamedTuple):
    contido: bool
    fora: list[float]


def spectrum_in(A: SymmetricMatrix, intervalo: Interval) -> ResultadoEspectro:
    mu = _ajustar_ao_dominio(A.decomposicao.eigenvalues, intervalo)
    dentro = intervalo.contains_array(mu)
    fora = [float(x) for x in A.decomposicao.eigenvalues[~dentro]]
    return ResultadoEspectro(not fora, fora)


def random_symmetric(rng: np.random.Generator, espectro) -> SymmetricMatrix:
    """Q·diag(espectro)·Qᵀ com Q ortogonal tirada da fatoração QR de uma matriz gaussiana."""
    espectro = np.asarray(espectro, dtype=float)
    n = espectro.size
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.where(np.diag(r) < 0, -1.0, 1.0)
    a = (q * espectro) @ q.T
    return SymmetricMatrix((a + a.T) / 2.0)


# ─── Verificadores de Jensen ───


class ModoJensen(str, Enum):
    CLASSICAL = "Classical"
    PER_LAMBDA = "PerLambda"
    INFIMUM_M = "InfimumM"
    HALF_BOUND = "HalfBound"


@dataclass(frozen=True)
class JensenVerdict:
    lhs: float
    rhs_factor: float
    rhs: float
    margin: float
    mode: ModoJensen
    lam: float | None = None
    forma_quadratica: float = math.nan
    esperanca: float = math.nan

    def para_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs_factor": self.rhs_factor,
            "rhs": self.rhs,
            "margin": self.margin,
            "mode": self.mode.value,
            "lam": self.lam,
            "quadratic_form": self.forma_quadratica,
            "expectation": self.esperanca,
        }


def fator_jensen(
    h: ScalarFunction, modo: ModoJensen, lam: float | None = None, coeficiente: float | None = None
) -> float:
    modo = ModoJensen(modo)
    if modo is ModoJensen.CLASSICAL:
        return 1.0
    if modo is ModoJensen.PER_LAMBDA:
        if lam is None or not 0.0 < lam < 1.0:
            raise DomainError(f"PerLambda exige λ ∈ (0,1), recebeu {lam!r}")
        return evaluate(h, lam) / lam
    if modo is ModoJensen.INFIMUM_M:
        if coeficiente is not None:
            return float(coeficiente)
        from src.convexity import coeficiente_jensen

        return coeficiente_jensen(h)
    return 2.0 * evaluate(h, 0.5)


def jensen_verify(
    f: ScalarFunction,
    h: ScalarFunction,
    A: SymmetricMatrix,
    x: UnitVector,
    modo: ModoJensen,
    lam: float | None = None,
    coeficiente: float | None = None,
) -> JensenVerdict:
    """lhs = f(⟨Ax,x⟩), rhs = fator·⟨f(A)x,x⟩, margem = rhs − lhs."""
    modo = ModoJensen(modo)
    _checar_dimensao(A, x)
    esperanca = spectral_expectation(f, A, x)
    forma = quadratic_form(A, x)
    forma_ajustada = float(_ajustar_ao_dominio(np.array([forma]), f.domain)[0])
    lhs = evaluate(f, forma_ajustada)
    fator = fator_jensen(h, modo, lam, coeficiente)
    rhs = fator * esperanca
    return JensenVerdict(
        lhs=lhs,
        rhs_factor=fator,
        rhs=rhs,
        margin=rhs - lhs,
        mode=modo,
        lam=lam if modo is ModoJensen.PER_LAMBDA else None,
        forma_quadratica=forma,
        esperanca=esperanca,
    )
