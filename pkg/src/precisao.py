"""
Reavaliação em precisão estendida (mpmath) para confirmar testemunhas.

Todas as entradas chegam como doubles e são convertidas exatamente para mpf;
só a aritmética subsequente roda com DPS_PADRAO dígitos decimais.

Uso:
    from src.precisao import precisao_estendida, gap_mp

    with precisao_estendida():
        valor = gap_mp(f, h, v=0.8, u=0.64, lam=0.5)
"""

import logging
from collections.abc import Sequence
from contextlib import contextmanager

import mpmath

from src.erros import DimensionMismatch, DomainError, PrecisionUnavailable, SpectrumDomainError
from src.funclib import Familia, Interval, ScalarFunction

logger = logging.getLogger(__name__)

DPS_PADRAO = 60
DIGITOS_RELATORIO = 50
FOLGA_ESPECTRO = 1e-12


@contextmanager
def precisao_estendida(dps: int = DPS_PADRAO):
    with mpmath.workdps(dps):
        yield


def texto_mp(x: mpmath.mpf) -> str:
    """Representação decimal com DIGITOS_RELATORIO dígitos significativos."""
    return mpmath.nstr(x, DIGITOS_RELATORIO, strip_zeros=False)


def avaliar_mp(fn: ScalarFunction, t) -> mpmath.mpf:
    t = mpmath.mpf(t)
    if not fn.domain.contains(float(t)):
        raise DomainError(f"t={t} fora do domínio {fn.domain} de {fn.family.value}")
    return fn.estendido(t)


def gap_mp(f: ScalarFunction, h: ScalarFunction, v: float, u: float, lam: float) -> mpmath.mpf:
    """F(u,λ) = h(λ)f(u) + h(1−λ)f(v) − f(λu + (1−λ)v) em precisão estendida."""
    with precisao_estendida():
        v_, u_, l_ = mpmath.mpf(v), mpmath.mpf(u), mpmath.mpf(lam)
        ponto = l_ * u_ + (1 - l_) * v_
        return h.estendido(l_) * avaliar_mp(f, u_) + h.estendido(1 - l_) * avaliar_mp(f, v_) - f.estendido(ponto)


def coeficiente_exato(h: ScalarFunction) -> mpmath.mpf:
    """M_(0,1)(h) em forma fechada, para as famílias de peso que a possuem."""
    if h.family is Familia.EXP_WEIGHT:
        return mpmath.mpf(h.param("alpha")) / mpmath.mpf(h.param("beta"))
    if h.family is Familia.IDENTITY_WEIGHT:
        return mpmath.mpf(1)
    if h.family is Familia.POWER_WEIGHT:
        # h(t)/t = t^(β−1): ínfimo 0 se β > 1, 1 caso contrário
        return mpmath.mpf(0) if h.param("beta") > 1 else mpmath.mpf(1)
    raise PrecisionUnavailable(f"sem coeficiente de Jensen exato para {h.family.value}")


# ─── Cálculo funcional ───


def _decompor_mp(linhas: Sequence[Sequence[float]]):
    n = len(linhas)
    if any(len(linha) != n for linha in linhas):
        raise DimensionMismatch("matriz não quadrada")
    matriz = mpmath.matrix([[mpmath.mpf(x) for x in linha] for linha in linhas])
    if all(linhas[i][j] == 0.0 for i in range(n) for j in range(n) if i != j):
        return [matriz[i, i] for i in range(n)], mpmath.eye(n)
    autovalores, autovetores = mpmath.eigsy(matriz)
    return [autovalores[i] for i in range(n)], autovetores


def _ajustar(autovalores: list, dominio: Interval, nome: str) -> list:
    ajustados, fora = [], []
    for mu in autovalores:
        if not dominio.lo_open and dominio.lo - FOLGA_ESPECTRO <= mu < dominio.lo:
            mu = mpmath.mpf(dominio.lo)
        elif not dominio.hi_open and dominio.hi < mu <= dominio.hi + FOLGA_ESPECTRO:
            mu = mpmath.mpf(dominio.hi)
        if not dominio.contains(float(mu)):
            fora.append(float(mu))
        ajustados.append(mu)
    if fora:
        raise SpectrumDomainError(f"espectro fora do domínio {dominio} de {nome}", fora)
    return ajustados


def esperancas_mp(f: ScalarFunction, linhas, componentes) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(⟨Ax,x⟩, ⟨f(A)x,x⟩) em precisão estendida; x é normalizado em mp."""
    autovalores, q = _decompor_mp(linhas)
    n = len(autovalores)
    if len(componentes) != n:
        raise DimensionMismatch(f"vetor de dimensão {len(componentes)} para matriz {n}×{n}")
    x = [mpmath.mpf(c) for c in componentes]
    norma = mpmath.sqrt(mpmath.fsum(c * c for c in x))
    x = [c / norma for c in x]
    pesos = [mpmath.fsum(q[k, i] * x[k] for k in range(n)) ** 2 for i in range(n)]
    autovalores = _ajustar(autovalores, f.domain, f.family.value)
    forma = mpmath.fsum(
        mpmath.mpf(linhas[i][j]) * x[i] * x[j] for i in range(n) for j in range(n)
    )
    forma = min(max(forma, min(autovalores)), max(autovalores))
    esperanca = mpmath.fsum(w * f.estendido(mu) for w, mu in zip(pesos, autovalores))
    return forma, esperanca


def jensen_mp(
    f: ScalarFunction,
    h: ScalarFunction,
    linhas,
    componentes,
    modo: str,
    lam: float | None = None,
    coeficiente: float | None = None,
) -> dict:
    """Margem de Jensen (rhs − lhs) em precisão estendida, no mesmo modo da versão em double."""
    with precisao_estendida():
        forma, esperanca = esperancas_mp(f, linhas, componentes)
        lhs = f.estendido(forma)
        if modo == "Classical":
            fator = mpmath.mpf(1)
        elif modo == "PerLambda":
            fator = h.estendido(lam) / mpmath.mpf(lam)
        elif modo == "InfimumM":
            try:
                fator = coeficiente_exato(h)
            except PrecisionUnavailable:
                if coeficiente is None:
                    raise
                fator = mpmath.mpf(coeficiente)
        elif modo == "HalfBound":
            fator = 2 * h.estendido(mpmath.mpf(1) / 2)
        else:
            raise DomainError(f"modo de Jensen desconhecido: {modo!r}")
        rhs = fator * esperanca
        return {"lhs": lhs, "rhs_factor": fator, "rhs": rhs, "margin": rhs - lhs}


def cor21_publicado_mp(a: float, beta: float, lam: float) -> mpmath.mpf:
    """Margem por λ usando o valor publicado ⟨f(A)x,x⟩ = e^{−a}/2."""
    with precisao_estendida():
        a_, b_, l_ = mpmath.mpf(a), mpmath.mpf(beta), mpmath.mpf(lam)
        return mpmath.power(l_, b_ - 1) * mpmath.exp(-a_) / 2 - mpmath.exp(-a_ / 2)


# ─── Cadeias refinadas ───


def _pesos(q: Sequence[float]) -> list[mpmath.mpf]:
    qs = [mpmath.mpf(x) for x in q]
    total = mpmath.fsum(qs)
    return [x / total for x in qs]


def _espalhamento(*listas: Sequence[float]) -> mpmath.mpf:
    valores = [mpmath.mpf(x) for lista in listas for x in lista]
    return max(valores) - min(valores)


def kyfan_chain_mp(a: Sequence[float], q: Sequence[float], alpha: float) -> tuple:
    with precisao_estendida():
        w = _pesos(q)
        a_ = [mpmath.mpf(x) for x in a]
        alpha_ = mpmath.mpf(alpha)
        s = alpha_ / (alpha_ + _espalhamento(a))
        lhs = mpmath.fsum(wi * (1 - ai) for wi, ai in zip(w, a_)) / mpmath.fsum(wi * ai for wi, ai in zip(w, a_))
        log_rhs = mpmath.fsum(wi * (mpmath.log(1 - ai) - mpmath.log(ai)) for wi, ai in zip(w, a_))
        return lhs, mpmath.exp(s * log_rhs), mpmath.exp(log_rhs)


def amgm_chain_mp(a: Sequence[float], q: Sequence[float], alpha: float) -> tuple:
    with precisao_estendida():
        w = _pesos(q)
        a_ = [mpmath.mpf(x) for x in a]
        alpha_ = mpmath.mpf(alpha)
        s = alpha_ / (alpha_ + _espalhamento(a))
        log_lhs = mpmath.fsum(wi * mpmath.log(ai) for wi, ai in zip(w, a_))
        rhs = mpmath.fsum(wi * ai for wi, ai in zip(w, a_))
        return mpmath.exp(log_lhs), mpmath.exp(s * log_lhs), rhs


def _gamma_chrystal_mp(a: Sequence[float], b: Sequence[float]) -> mpmath.mpf:
    a_ = [mpmath.mpf(x) for x in a]
    b_ = [mpmath.mpf(x) for x in b]
    return max(
        max(a_) - min(a_),
        max(b_) - min(b_),
        max(abs(x - y) for x in a_ for y in b_),
    )


def chrystal_chain_mp(a: Sequence[float], b: Sequence[float], q: Sequence[float], alpha: float) -> tuple:
    with precisao_estendida():
        w = _pesos(q)
        a_ = [mpmath.mpf(x) for x in a]
        b_ = [mpmath.mpf(x) for x in b]
        alpha_ = mpmath.mpf(alpha)
        s = alpha_ / (alpha_ + _gamma_chrystal_mp(a, b))
        lhs = mpmath.exp(mpmath.fsum(wi * mpmath.log(ai) for wi, ai in zip(w, a_))) + mpmath.exp(
            mpmath.fsum(wi * mpmath.log(bi) for wi, bi in zip(w, b_))
        )
        log_soma = [mpmath.log(ai + bi) for ai, bi in zip(a_, b_)]
        mid = mpmath.exp(
            mpmath.fsum(wi * (s * ls - (s - 1) * mpmath.log(bi)) for wi, ls, bi in zip(w, log_soma, b_))
        )
        rhs = mpmath.exp(mpmath.fsum(wi * ls for wi, ls in zip(w, log_soma)))
        return lhs, mid, rhs


def hm_chain_mp(linhas, componentes, p: float, alpha: float) -> tuple:
    from src.funclib import NONNEGATIVE, criar_funcao

    with precisao_estendida():
        f = criar_funcao(Familia.POWER_TARGET, NONNEGATIVE, p=p)
        autovalores, _ = _decompor_mp(linhas)
        gamma = max(autovalores) - min(autovalores)
        forma, esperanca = esperancas_mp(f, linhas, componentes)
        alpha_ = mpmath.mpf(alpha)
        lhs = mpmath.power(forma, mpmath.mpf(p))
        return lhs, alpha_ / (alpha_ + gamma) * esperanca, esperanca
