"""
Cadeias refinadas lhs ≤ mid ≤ rhs (Ky Fan, AM-GM, Chrystal, Hölder-McCarthy).

O espalhamento γ vem da própria amostra, β = α + γ, e as hipóteses de cada
corolário são checadas depois (flags por cláusula). Os produtos são feitos
em espaço logarítmico e exponenciados uma única vez.

Uso:
    from src.refined import WeightedSample, amgm_chain

    amostra = WeightedSample(a=(0.64, 0.8), q=(0.5, 0.5))
    relatorio = amgm_chain(amostra, alpha=2.0, v=0.8)
    relatorio.margin1, relatorio.margin2
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from src.erros import DomainError, SpectrumDomainError
from src.funclib import (
    NONNEGATIVE,
    Familia,
    Lema,
    criar_funcao,
    evaluate,
    lemma_parameters_ok,
)
from src.opcalc import SymmetricMatrix, UnitVector, quadratic_form, spectral_expectation

logger = logging.getLogger(__name__)

Corolario = Lema

TAMANHO_MAXIMO = 10_000
TOLERANCIA_PESOS = 1e-12
FOLGA_INTERVALO = 1e-12
CONVENCAO_COEFICIENTE = "M_(0,1)=M_[0,1]=alpha/beta"


@dataclass(frozen=True)
class WeightedSample:
    """Valores a (e b, para Chrystal) com pesos q em (0,1) somando 1."""

    a: tuple[float, ...]
    q: tuple[float, ...]
    b: tuple[float, ...] | None = None

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        q = tuple(float(x) for x in self.q)
        b = None if self.b is None else tuple(float(x) for x in self.b)
        n = len(a)
        if n < 1:
            raise DomainError("amostra vazia")
        if n > TAMANHO_MAXIMO:
            raise DomainError(f"amostra com {n} pontos excede o limite {TAMANHO_MAXIMO}")
        if len(q) != n or (b is not None and len(b) != n):
            raise DomainError("listas a, q (e b) precisam ter o mesmo comprimento")
        if not all(math.isfinite(x) for x in a + q + (b or ())):
            raise DomainError("amostra com valores não finitos")
        if n == 1:
            if q != (1.0,):
                raise DomainError(f"amostra unitária exige q=(1,), recebeu {q}")
        elif not all(0.0 < x < 1.0 for x in q):
            raise DomainError("cada peso q_i precisa estar em (0, 1)")
        if abs(math.fsum(q) - 1.0) > TOLERANCIA_PESOS:
            raise DomainError(f"pesos somam {math.fsum(q)!r}, não 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    def pesos(self) -> np.ndarray:
        """q normalizado pela soma exata (fsum)."""
        q = np.array(self.q)
        return q / math.fsum(self.q)


@dataclass(frozen=True)
class Viabilidade:
    """Flags por cláusula; `informativas` são reportadas mas não decidem `feasible`."""

    flags: dict[str, bool]
    gate_value: float
    informativas: dict[str, bool] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return all(self.flags.values())

    def para_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "flags": dict(self.flags),
            "informativas": dict(self.informativas),
            "gate_value": self.gate_value,
        }


@dataclass(frozen=True)
class ChainReport:
    corollary: Corolario
    n: int
    alpha: float
    gamma: float
    beta: float
    v: float
    lhs: float
    mid: float
    rhs: float
    viabilidade: Viabilidade
    convencao: str = CONVENCAO_COEFICIENTE

    @property
    def margin1(self) -> float:
        return self.mid - self.lhs

    @property
    def margin2(self) -> float:
        return self.rhs - self.mid

    @property
    def margem_classica(self) -> float:
        return self.rhs - self.lhs

    @property
    def feasible(self) -> bool:
        return self.viabilidade.feasible

    def para_linha(self) -> dict:
        """Linha do CSV de campanha."""
        return {
            "corollary": self.corollary.value,
            "n": self.n,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "beta": self.beta,
            "lhs": self.lhs,
            "mid": self.mid,
            "rhs": self.rhs,
            "margin1": self.margin1,
            "margin2": self.margin2,
            "feasible": self.feasible,
        }

    def para_dict(self) -> dict:
        return {
            **self.para_linha(),
            "v": self.v,
            "feasibility": self.viabilidade.para_dict(),
            "coefficient_convention": self.convencao,
        }


# ─── γ e viabilidade ───


def _espalhamento(valores: Sequence[float]) -> float:
    return max(valores) - min(valores)


def gamma(sample: WeightedSample, corolario: Corolario) -> float:
    """Maior diferença absoluta entre pares dos valores relevantes ao corolário."""
    corolario = Corolario(corolario)
    if corolario is not Corolario.CHRYSTAL:
        return _espalhamento(sample.a)
    if sample.b is None:
        raise DomainError("Chrystal exige a lista b")
    a, b = sample.a, sample.b
    return max(_espalhamento(a), _espalhamento(b), max(a) - min(b), max(b) - min(a))


def _no_intervalo(valores: Sequence[float], lo: float, hi: float) -> bool:
    return all(lo - FOLGA_INTERVALO <= x <= hi + FOLGA_INTERVALO for x in valores)


def _flags(
    valores: Sequence[float],
    alpha: float,
    v: float,
    corolario: Corolario,
    gama: float,
    b: Sequence[float] | None = None,
    p: float | None = None,
) -> Viabilidade:
    beta = alpha + gama
    flags = {"parametros": lemma_parameters_ok(corolario, alpha, beta, p)}
    informativas: dict[str, bool] = {}

    if corolario is Corolario.KYFAN:
        flags["v_admissivel"] = 0.0 < v <= 0.5
        flags["dominio"] = min(valores) > 0.0 and max(valores) <= 0.5
        porta = evaluate(criar_funcao(Familia.KYFAN_GATE, alpha=alpha), v) if 0.0 <= v <= 1.0 else math.nan
        flags["intervalo"] = _no_intervalo(valores, porta, v)
    elif corolario is Corolario.AMGM:
        flags["v_admissivel"] = 0.0 < v <= 1.0
        flags["dominio"] = min(valores) > 0.0 and max(valores) <= 1.0
        porta = v**alpha if v >= 0.0 else math.nan
        flags["intervalo"] = _no_intervalo(valores, porta, v)
    elif corolario is Corolario.CHRYSTAL:
        flags["v_admissivel"] = v > 0.0
        todos = list(valores) + list(b or ())
        flags["dominio"] = min(todos) > 0.0
        if flags["parametros"] and v > 0.0:
            porta = evaluate(criar_funcao(Familia.CHRYSTAL_GATE, alpha=alpha, beta=beta), v)
        else:
            porta = math.nan
        inferior = max(porta, 0.0)
        flags["intervalo"] = flags["dominio"] and _no_intervalo(todos, inferior, v)
        if flags["dominio"]:
            razoes = [math.log(x / y) for x, y in zip(valores, b or ())]
            informativas["intervalo_log_razao"] = all(c > 0.0 for c in razoes) and _no_intervalo(razoes, inferior, v)
        else:
            informativas["intervalo_log_razao"] = False
    else:
        flags["p"] = p is not None and p > 1.0
        flags["v_admissivel"] = v > 0.0
        flags["dominio"] = min(valores) > 0.0
        if flags["parametros"] and flags["p"]:
            porta = v * (beta / alpha - 1.0) ** (1.0 / p)
        else:
            porta = math.nan
        flags["intervalo"] = _no_intervalo(valores, porta, v)
    return Viabilidade(flags, porta, informativas)


def feasible(
    sample: WeightedSample, alpha: float, v: float, corolario: Corolario, p: float | None = None
) -> Viabilidade:
    """Checa todas as cláusulas de hipótese com o intervalo dependente de γ.

    Para HolderMcCarthy, `sample.a` são os autovalores de A.
    """
    corolario = Corolario(corolario)
    return _flags(sample.a, alpha, v, corolario, gamma(sample, corolario), sample.b, p)


# ─── Cadeias ───


def _relatorio(corolario, sample_n, alpha, gama, v, termos, viabilidade) -> ChainReport:
    lhs, mid, rhs = (float(x) for x in termos)
    return ChainReport(corolario, sample_n, alpha, gama, alpha + gama, v, lhs, mid, rhs, viabilidade)


def kyfan_chain(sample: WeightedSample, alpha: float, v: float) -> ChainReport:
    if not all(0.0 < x <= 0.5 for x in sample.a):
        raise DomainError("Ky Fan exige a_i ∈ (0, 1/2]")
    gama = gamma(sample, Corolario.KYFAN)
    s = alpha / (alpha + gama)
    a = np.array(sample.a)
    w = sample.pesos()
    lhs = math.fsum(w * (1.0 - a)) / math.fsum(w * a)
    log_rhs = math.fsum(w * (np.log1p(-a) - np.log(a)))
    viab = feasible(sample, alpha, v, Corolario.KYFAN)
    return _relatorio(Corolario.KYFAN, sample.n, alpha, gama, v, (lhs, math.exp(s * log_rhs), math.exp(log_rhs)), viab)


def amgm_chain(sample: WeightedSample, alpha: float, v: float) -> ChainReport:
    if not all(x > 0.0 for x in sample.a):
        raise DomainError("AM-GM exige a_i > 0")
    gama = gamma(sample, Corolario.AMGM)
    s = alpha / (alpha + gama)
    a = np.array(sample.a)
    w = sample.pesos()
    log_lhs = math.fsum(w * np.log(a))
    rhs = math.fsum(w * a)
    viab = feasible(sample, alpha, v, Corolario.AMGM)
    return _relatorio(Corolario.AMGM, sample.n, alpha, gama, v, (math.exp(log_lhs), math.exp(s * log_lhs), rhs), viab)


def chrystal_chain(sample: WeightedSample, alpha: float, v: float) -> ChainReport:
    if sample.b is None:
        raise DomainError("Chrystal exige a lista b")
    if not all(x > 0.0 for x in sample.a + sample.b):
        raise DomainError("Chrystal exige a_i, b_i > 0")
    gama = gamma(sample, Corolario.CHRYSTAL)
    s = alpha / (alpha + gama)
    a, b = np.array(sample.a), np.array(sample.b)
    w = sample.pesos()
    log_soma = np.log(a + b)
    lhs = math.exp(math.fsum(w * np.log(a))) + math.exp(math.fsum(w * np.log(b)))
    mid = math.exp(math.fsum(w * (s * log_soma - (s - 1.0) * np.log(b))))
    rhs = math.exp(math.fsum(w * log_soma))
    viab = feasible(sample, alpha, v, Corolario.CHRYSTAL)
    return _relatorio(Corolario.CHRYSTAL, sample.n, alpha, gama, v, (lhs, mid, rhs), viab)


def chrystal_scalar_form(sample: WeightedSample, alpha: float) -> tuple[float, float, float]:
    """Cadeia escalar em c_i = ln(a_i/b_i), com f(t) = ln(1+e^t), multiplicada de volta por ∏b_i^{q_i}.

    f(Σq c) ≤ (α/β)·Σ q f(c) ≤ Σ q f(c) é a forma que antecede a substituição.
    """
    if sample.b is None:
        raise DomainError("Chrystal exige a lista b")
    gama = gamma(sample, Corolario.CHRYSTAL)
    s = alpha / (alpha + gama)
    a, b = np.array(sample.a), np.array(sample.b)
    w = sample.pesos()
    c = np.log(a) - np.log(b)
    log_b = math.fsum(w * np.log(b))
    media_f = math.fsum(w * np.logaddexp(0.0, c))
    f_media = float(np.logaddexp(0.0, math.fsum(w * c)))
    return math.exp(log_b + f_media), math.exp(log_b + s * media_f), math.exp(log_b + media_f)


def hm_chain(A: SymmetricMatrix, x: UnitVector, p: float, alpha: float, v: float) -> ChainReport:
    """(⟨Ax,x⟩^p, (α/β)⟨A^p x,x⟩, ⟨A^p x,x⟩) com γ = espalhamento do espectro."""
    if not p > 1.0:
        raise DomainError(f"Hölder-McCarthy exige p > 1, recebeu {p!r}")
    autovalores = [float(mu) for mu in A.decomposicao.eigenvalues]
    if min(autovalores) <= 0.0:
        fora = [mu for mu in autovalores if mu <= 0.0]
        raise SpectrumDomainError("Hölder-McCarthy exige espectro positivo", fora)
    f = criar_funcao(Familia.POWER_TARGET, NONNEGATIVE, p=p)
    gama = _espalhamento(autovalores)
    rhs = spectral_expectation(f, A, x)
    lhs = quadratic_form(A, x) ** p
    viab = _flags(autovalores, alpha, v, Corolario.HOLDER_MCCARTHY, gama, p=p)
    return _relatorio(
        Corolario.HOLDER_MCCARTHY, A.dim, alpha, gama, v, (lhs, alpha / (alpha + gama) * rhs, rhs), viab
    )


def load_sample_csv(caminho: str) -> WeightedSample:
    """Lê amostra de CSV com colunas a, q e (opcional) b."""
    df = pd.read_csv(caminho)
    faltando = {"a", "q"} - set(df.columns)
    if faltando:
        raise DomainError(f"CSV {caminho} sem as colunas {sorted(faltando)}")
    b = tuple(df["b"].astype(float)) if "b" in df.columns else None
    logger.info("Amostra lida de %s: %s pontos", caminho, len(df))
    return WeightedSample(a=tuple(df["a"].astype(float)), q=tuple(df["q"].astype(float)), b=b)
