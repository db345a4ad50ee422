"""
Certificação de h-convexidade condicional em um ponto v e coeficiente de Jensen.

A certificação avalia a função gap F(u,λ) = h(λ)f(u) + h(1−λ)f(v) − f(λu+(1−λ)v)
numa grade [g(v), v] × [0, 1], refina em torno do mínimo por seção áurea
alternada em u e λ, e confirma em precisão estendida antes de declarar violação.

Uso:
    from src.convexity import certify, jcoeff
    from src.funclib import Familia, OPEN_UNIT, criar_funcao

    cert = certify(f, g, h, v=0.8)
    cert.verdict  # Veredito.CERTIFIED

    jcoeff(criar_funcao(Familia.EXP_WEIGHT, alpha=2, beta=2.16), OPEN_UNIT).value  # α/β
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.erros import DomainError, PrecisionUnavailable, SingularQuotient
from src.funclib import (
    OPEN_UNIT,
    Familia,
    GateInterval,
    Interval,
    ScalarFunction,
    evaluate,
    gate_interval,
)

logger = logging.getLogger(__name__)

TOLERANCIA_VIOLACAO = 1e-10
GRADE_PADRAO = (256, 256)
ITERACOES_REFINAMENTO = 40
AMOSTRAS_JCOEFF = 4096
OFFSET_MINIMO = 1e-9
PASSOS_GEOMETRICOS = 64

_RAZAO_AUREA = (math.sqrt(5.0) - 1.0) / 2.0


class Veredito(str, Enum):
    CERTIFIED = "Certified"
    VIOLATED = "Violated"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Certificate:
    min_value: float
    arg_min: tuple[float, float]
    grid: tuple[int, int]
    refined: bool
    verdict: Veredito
    gate: GateInterval
    v: float
    confirmed_value: float | None = None
    float_noise: bool = False
    tolerance: float = TOLERANCIA_VIOLACAO

    def para_dict(self) -> dict:
        return {
            "min_value": self.min_value,
            "arg_min": {"u": self.arg_min[0], "lam": self.arg_min[1]},
            "grid": {"n_u": self.grid[0], "n_lam": self.grid[1]},
            "refined": self.refined,
            "verdict": self.verdict.value,
            "gate": self.gate.para_dict(),
            "v": self.v,
            "confirmed_value": self.confirmed_value,
            "float_noise": self.float_noise,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class JensenCoefficient:
    value: float
    attained_at: float | None
    boundary_limit: bool
    interval: Interval
    samples: int

    def para_dict(self) -> dict:
        return {
            "value": self.value,
            "attained_at": self.attained_at,
            "boundary_limit": self.boundary_limit,
            "interval": str(self.interval),
            "samples": self.samples,
        }


# ─── gap ───


def _gap_vetorizado(f: ScalarFunction, h: ScalarFunction, v: float, u, lam) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    lam = np.asarray(lam, dtype=float)
    ponto = lam * u + (1.0 - lam) * v
    with np.errstate(all="ignore"):
        return h(lam) * f(u) + h(1.0 - lam) * f(v) - f(ponto)


def gap(f: ScalarFunction, h: ScalarFunction, v: float, u: float, lam: float) -> float:
    """F(u,λ); não negativa exatamente quando a desigualdade vale em (u,λ)."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"λ={lam!r} fora de [0, 1]")
    ponto = lam * u + (1.0 - lam) * v
    return evaluate(h, lam) * evaluate(f, u) + evaluate(h, 1.0 - lam) * evaluate(f, v) - evaluate(f, ponto)


# ─── certify ───


def _passo_aureo(fun: Callable[[float], float], a: float, b: float) -> tuple[float, float, float, float]:
    c = b - _RAZAO_AUREA * (b - a)
    d = a + _RAZAO_AUREA * (b - a)
    fc, fd = fun(c), fun(d)
    if fc <= fd:
        return a, d, c, fc
    return c, b, d, fd


def _refinar(
    fun: Callable[[float, float], float],
    inicio: tuple[float, float, float],
    caixa_u: tuple[float, float],
    caixa_l: tuple[float, float],
    iteracoes: int = ITERACOES_REFINAMENTO,
) -> tuple[float, float, float]:
    """Seção áurea alternada em u e λ; devolve (valor, u, λ), nunca pior que o início."""
    melhor, u, lam = inicio
    au, bu = caixa_u
    al, bl = caixa_l
    for _ in range(iteracoes):
        if bu > au:
            au, bu, x, fx = _passo_aureo(lambda t: fun(t, lam), au, bu)
            if fx < melhor:
                melhor, u = fx, x
        if bl > al:
            al, bl, y, fy = _passo_aureo(lambda t: fun(u, t), al, bl)
            if fy < melhor:
                melhor, lam = fy, y
    return melhor, u, lam


def _vizinhanca(eixo: np.ndarray, i: int) -> tuple[float, float]:
    return float(eixo[max(i - 1, 0)]), float(eixo[min(i + 1, eixo.size - 1)])


def _confirmar(f, h, v, u, lam, minimo, tolerancia) -> tuple[Veredito, float | None, bool]:
    from src.precisao import gap_mp

    try:
        confirmado = float(gap_mp(f, h, v, u, lam))
    except PrecisionUnavailable:
        logger.warning("Sem caminho de alta precisão; violação mantida sem confirmação")
        return Veredito.VIOLATED, None, False
    if confirmado < -tolerancia:
        return Veredito.VIOLATED, confirmado, False
    logger.info("Mínimo %r em (u=%r, λ=%r) é ruído numérico (valor estendido %r)", minimo, u, lam, confirmado)
    return Veredito.CERTIFIED, confirmado, True


def certify(
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    v: float,
    grid: tuple[int, int] = GRADE_PADRAO,
    tolerance: float = TOLERANCIA_VIOLACAO,
    refinar: bool = True,
    confirmar: bool = True,
) -> Certificate:
    """Certifica h-convexidade condicional de f em v com porta g."""
    n_u, n_l = int(grid[0]), int(grid[1])
    if n_u < 2 or n_l < 2:
        raise DomainError(f"grade {grid} precisa de ao menos 2 pontos por eixo")
    porta = gate_interval(g, v, f.domain)
    lam = np.linspace(0.0, 1.0, n_l)

    if porta.degenerate:
        linha = _gap_vetorizado(f, h, v, np.full(n_l, v), lam)
        if not np.all(np.isfinite(linha)):
            raise DomainError(f"gap não finito na linha u=v={v!r}")
        j = int(np.argmin(linha))
        minimo, u_min, l_min = float(linha[j]), float(v), float(lam[j])
        veredito, confirmado, ruido = Veredito.DEGENERATE, None, False
        if minimo < -tolerance:
            veredito, confirmado, ruido = Veredito.VIOLATED, None, False
            if confirmar:
                veredito, confirmado, ruido = _confirmar(f, h, v, u_min, l_min, minimo, tolerance)
                if veredito is Veredito.CERTIFIED:
                    veredito = Veredito.DEGENERATE
        return Certificate(minimo, (u_min, l_min), (1, n_l), False, veredito, porta, v, confirmado, ruido, tolerance)

    u = np.linspace(porta.interval.lo, porta.interval.hi, n_u)
    uu, ll = np.meshgrid(u, lam, indexing="ij")
    valores = _gap_vetorizado(f, h, v, uu, ll)
    if not np.all(np.isfinite(valores)):
        raise DomainError(f"gap não finito na grade de v={v!r}")
    i, j = np.unravel_index(int(np.argmin(valores)), valores.shape)
    minimo, u_min, l_min = float(valores[i, j]), float(u[i]), float(lam[j])

    if refinar:

        def escalar(uu_: float, ll_: float) -> float:
            return float(_gap_vetorizado(f, h, v, uu_, ll_))

        minimo, u_min, l_min = _refinar(escalar, (minimo, u_min, l_min), _vizinhanca(u, i), _vizinhanca(lam, j))

    veredito, confirmado, ruido = Veredito.CERTIFIED, None, False
    if minimo < -tolerance:
        veredito = Veredito.VIOLATED
        if confirmar:
            veredito, confirmado, ruido = _confirmar(f, h, v, u_min, l_min, minimo, tolerance)
    logger.debug("certify v=%r: mínimo %r em (%r, %r) → %s", v, minimo, u_min, l_min, veredito.value)
    return Certificate(minimo, (u_min, l_min), (n_u, n_l), refinar, veredito, porta, v, confirmado, ruido, tolerance)


# ─── jcoeff ───


def _amostras_jcoeff(K: Interval, amostras: int, excluir: tuple[float, ...]) -> tuple[np.ndarray, list]:
    """Grade densa + aproximações geométricas aos extremos abertos (ou excluídos)."""
    largura = K.width
    base = np.linspace(K.lo, K.hi, amostras)
    offsets = np.geomspace(OFFSET_MINIMO, max(min(1e-2, largura / 4.0), OFFSET_MINIMO), PASSOS_GEOMETRICOS)[::-1]
    aproximacoes = []
    partes = [base]
    if K.lo_open or K.lo in excluir:
        partes.append(K.lo + offsets)
        aproximacoes.append((K.lo, K.lo + offsets))
    if K.hi_open or K.hi in excluir:
        partes.append(K.hi - offsets)
        aproximacoes.append((K.hi, K.hi - offsets))
    if K.lo < 0.0 < K.hi:
        partes.extend([offsets, -offsets])
    t = np.unique(np.concatenate(partes))
    mascara = K.contains_array(t)
    for e in excluir:
        mascara &= t != e
    return t[mascara], aproximacoes


def _limite_em_zero(t: np.ndarray, q: np.ndarray) -> float:
    """Limite de h(t)/t em t→0 pelas três amostras geométricas mais internas.

    Ajusta q(t) ≈ c + d·t^p (Aitken Δ²): com razão geométrica r entre as amostras,
    r^p = Δ₂/Δ₁ e c = q₁ − Δ₁/(r^p − 1). Cobre a cauda linear (p = 1) e as
    potências t^(β−1), cujo limite é 0.
    """
    q1, q2, q3 = float(q[-1]), float(q[-2]), float(q[-3])
    delta1, delta2 = q2 - q1, q3 - q2
    if delta1 <= 1e-12 * abs(q1):
        return q1
    razao = delta2 / delta1
    if razao > 1.0 and math.isfinite(razao):
        limite = q1 - delta1 / (razao - 1.0)
        if np.all(q > 0.0):
            limite = max(limite, 0.0)
        return limite
    t1, t2 = float(t[-1]), float(t[-2])
    return q1 - delta1 / (t2 - t1) * t1


def jcoeff(h: ScalarFunction, K: Interval = OPEN_UNIT, samples: int = AMOSTRAS_JCOEFF) -> JensenCoefficient:
    """Estimativa de M_K(h) = inf_{t∈K} h(t)/t."""
    if not K.bounded:
        raise DomainError(f"K={K} ilimitado")
    if K.degenerate:
        raise DomainError("K degenerado")
    if not h.domain.contains_interval(K):
        raise DomainError(f"K={K} não está contido no domínio {h.domain} de {h.family.value}")
    if samples < 2:
        raise DomainError("jcoeff precisa de ao menos 2 amostras")

    excluir: tuple[float, ...] = ()
    if K.contains(0.0):
        h0 = evaluate(h, 0.0)
        if K.lo < 0.0 < K.hi:
            if h0 != 0.0:
                raise SingularQuotient(f"0 interior a K={K} com h(0)={h0!r} ≠ 0")
        elif (K.lo == 0.0 and h0 < 0.0) or (K.hi == 0.0 and h0 > 0.0):
            raise SingularQuotient(f"h(0)={h0!r}: quociente h(t)/t tende a −∞ em 0")
        elif h0 != 0.0:
            logger.info("h(0)=%r > 0 no extremo fechado 0: contribui +∞, ignorado", h0)
        excluir = (0.0,)

    t, aproximacoes = _amostras_jcoeff(K, samples, excluir)
    with np.errstate(all="ignore"):
        quocientes = np.asarray(h(t), dtype=float) / t
    if not np.all(np.isfinite(quocientes)):
        raise DomainError(f"h(t)/t não finito em K={K}")
    k = int(np.argmin(quocientes))
    minimo, ponto = float(quocientes[k]), float(t[k])

    for extremo, sequencia in aproximacoes:
        if ponto != float(sequencia[-1]):
            continue
        with np.errstate(all="ignore"):
            seq = np.asarray(h(sequencia), dtype=float) / sequencia
        if not (np.all(np.diff(seq) <= 0.0) and seq[-1] < seq[0]):
            continue
        if extremo != 0.0 and h.domain.contains(extremo):
            limite = evaluate(h, extremo) / extremo
        elif extremo == 0.0:
            limite = _limite_em_zero(sequencia, seq)
        else:
            limite = minimo
        valor = min(limite, minimo)
        logger.debug("jcoeff: limite de fronteira em t→%r (%r)", extremo, valor)
        return JensenCoefficient(valor, None, True, K, int(t.size))

    a, b = _vizinhanca(t, k)
    if b > a:

        def quociente(x: float, _lam: float) -> float:
            return float(h(x)) / x if x != 0.0 else math.inf

        minimo, ponto, _ = _refinar(quociente, (minimo, ponto, 0.0), (a, b), (0.0, 0.0))
    return JensenCoefficient(minimo, ponto, False, K, int(t.size))


def coeficiente_jensen(h: ScalarFunction) -> float:
    """M_(0,1)(h): forma fechada para as famílias de peso embutidas, jcoeff nas demais."""
    if h.family is Familia.EXP_WEIGHT:
        return h.param("alpha") / h.param("beta")
    if h.family is Familia.IDENTITY_WEIGHT:
        return 1.0
    if h.family is Familia.POWER_WEIGHT:
        return 0.0 if h.param("beta") > 1.0 else 1.0
    return jcoeff(h, OPEN_UNIT).value
