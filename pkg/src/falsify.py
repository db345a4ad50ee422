"""
Campanhas de falsificação com semente: sorteiam instâncias na região de hipóteses,
medem a margem (rhs − lhs) e confirmam candidatas a testemunha em precisão estendida.

Cada amostra i usa seu próprio gerador Philox(key=seed, counter=i << 64); a instância
é serializada em dict antes de ser avaliada, e toda avaliação parte desse dict. Assim
o resultado não depende do número de processos e qualquer linha do relatório pode
ser reexecutada (replay) bit a bit.

Uso:
    from src.falsify import Alvo, Campaign, run_campaign

    campanha = Campaign(target=Alvo.AMGM, samples=10_000, seed=42)
    relatorio = run_campaign(campanha)
    relatorio.outcome  # "nenhuma violação encontrada em ..." ou "testemunha confirmada"
"""

import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import repeat
from typing import Literal

import mpmath
import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src import precisao
from src.configuracao import get_threads
from src.convexity import TOLERANCIA_VIOLACAO, certify
from src.erros import DomainError, EmptyRegion
from src.funclib import (
    NONNEGATIVE,
    Familia,
    Interval,
    Lema,
    ScalarFunction,
    criar_funcao,
    evaluate,
    gate_interval,
    lemma_parameters_ok,
    lemma_triple,
)
from src.opcalc import (
    ModoJensen,
    SymmetricMatrix,
    UnitVector,
    jensen_verify,
    random_symmetric,
    spectrum_in,
)
from src.refined import WeightedSample, amgm_chain, chrystal_chain, hm_chain, kyfan_chain

logger = logging.getLogger(__name__)

LIMIAR_CONFIRMACAO = 1e-6
TAMANHO_BLOCO = 1000


class Alvo(str, Enum):
    THM21 = "Thm21"
    PER_LAMBDA = "PerLambda"
    HALF_BOUND = "HalfBound"
    COR21 = "Cor21Counterexample"
    KYFAN = "KyFan"
    AMGM = "AmGm"
    CHRYSTAL = "Chrystal"
    HOLDER_MCCARTHY = "HolderMcCarthy"
    LEMAS = "LemmaCertificates"


MODO_POR_ALVO = {
    Alvo.THM21: ModoJensen.INFIMUM_M,
    Alvo.PER_LAMBDA: ModoJensen.PER_LAMBDA,
    Alvo.HALF_BOUND: ModoJensen.HALF_BOUND,
}
ALVOS_CADEIA = {Alvo.KYFAN, Alvo.AMGM, Alvo.CHRYSTAL, Alvo.HOLDER_MCCARTHY}
TRIPLOS = ("classical", "KyFan", "AmGm", "Chrystal", "HolderMcCarthy", "cor22")

# funções convexas de referência para o caso clássico (h = identidade)
FIXTURES_CONVEXAS = (
    (Familia.EXP_TARGET, {}),
    (Familia.EXPDECAY_TARGET, {}),
    (Familia.POWER_TARGET, {"p": 2.0}),
    (Familia.NEGLOG_TARGET, {}),
)

Faixa = tuple[float, float]


class Regiao(BaseModel):
    """Faixas (lo, hi) dos parâmetros sorteados; ausentes assumem o padrão do alvo."""

    alpha: Faixa | None = None
    beta: Faixa | None = None
    v: Faixa | None = None
    n: tuple[int, int] | None = None
    dim: tuple[int, int] | None = None
    lam: Faixa | None = None
    a: Faixa | None = None
    p: Faixa | None = None

    model_config = {"extra": "forbid", "frozen": True}

    @field_validator("*")
    @classmethod
    def _faixa_ordenada(cls, valor):
        if valor is not None:
            lo, hi = valor
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"faixa inválida ({lo}, {hi})")
        return valor


class Campaign(BaseModel):
    target: Alvo
    region: Regiao = Field(default_factory=Regiao)
    samples: int = Field(gt=0)
    seed: int = Field(ge=0, lt=2**64)
    triple: str = "classical"
    inequality: Literal["refined", "classical"] = "refined"
    published_value: bool = False
    max_witnesses: int = Field(100, ge=0)
    max_draw_factor: int = Field(50, ge=1)
    grid: int = Field(256, ge=2)
    rotate: bool = False

    model_config = {"extra": "forbid", "frozen": True}

    @model_validator(mode="after")
    def _checar(self):
        if self.triple not in TRIPLOS:
            raise ValueError(f"triplo desconhecido: {self.triple!r}")
        if self.triple == "cor22" and self.target is not Alvo.HALF_BOUND:
            raise ValueError("o triplo cor22 só se aplica a HalfBound")
        return self


# ─── Regiões ───


def _regiao_padrao(alvo: Alvo, triplo: str) -> dict:
    if alvo is Alvo.COR21 or triplo == "cor22":
        return {"a": (1e-3, 10.0), "beta": (1e-6, 1.0 - 1e-6), "lam": (0.5 + 1e-9, 1.0 - 1e-9)}
    if alvo in MODO_POR_ALVO and triplo == "classical":
        return {"dim": (2, 8), "a": (0.05, 4.0), "lam": (0.01, 0.99)}
    lema = triplo if alvo in MODO_POR_ALVO else alvo.value
    base = {"n": (2, 5), "dim": (2, 4), "lam": (0.01, 0.99), "p": (1.0 + 1e-6, 4.0)}
    if lema in ("KyFan", "AmGm"):
        base["alpha"] = (1.0 + 1e-9, 3.0)
    else:
        base["alpha"] = (0.1, 3.0)
    base["v"] = {
        "KyFan": (1e-3, 0.5),
        "AmGm": (1e-3, 1.0),
        "Chrystal": (0.05, 5.0),
        "HolderMcCarthy": (0.05, 5.0),
        "LemmaCertificates": (1e-3, 0.5),
    }[lema]
    return base


def regiao_efetiva(c: Campaign) -> dict:
    """Região padrão do alvo sobrescrita pelas faixas informadas, validada."""
    efetiva = _regiao_padrao(c.target, c.triple)
    efetiva.update({k: v for k, v in c.region.model_dump().items() if v is not None})
    validar_regiao(c.target, c.triple, efetiva)
    return efetiva


def validar_regiao(alvo: Alvo, triplo: str, regiao: dict) -> None:
    """A região precisa respeitar as restrições de parâmetros do enunciado."""

    def dentro(chave, lo, hi):
        if chave in regiao and not (lo <= regiao[chave][0] and regiao[chave][1] <= hi):
            raise DomainError(f"faixa {chave}={regiao[chave]} fora de [{lo}, {hi}] para {alvo.value}")

    dentro("lam", 0.0, 1.0)
    dentro("dim", 1, 64)
    dentro("n", 1, 10_000)
    if alvo is Alvo.COR21 or triplo == "cor22":
        dentro("beta", 0.0, 1.0)
        dentro("a", 0.0, math.inf)
        if alvo is Alvo.COR21:
            dentro("lam", 0.5, 1.0)
        return
    lema = triplo if alvo in MODO_POR_ALVO else alvo.value
    if lema in ("KyFan", "AmGm"):
        dentro("alpha", 1.0, math.inf)
    else:
        dentro("alpha", 0.0, math.inf)
    dentro("v", 0.0, math.inf)
    if lema == "KyFan":
        dentro("v", 0.0, 0.5)
    if lema == "AmGm":
        dentro("v", 0.0, 1.0)
    if lema == "HolderMcCarthy":
        dentro("p", 1.0, math.inf)
    if lema == "classical":
        dentro("a", 0.0, math.inf)


# ─── Sorteio ───


def gerador_amostra(seed: int, indice: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=indice << 64))


def _uniforme(rng, faixa) -> float:
    return float(rng.uniform(faixa[0], faixa[1]))


def _log_uniforme(rng, faixa) -> float:
    lo, hi = faixa
    if lo <= 0.0:
        return _uniforme(rng, faixa)
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _inteiro(rng, faixa) -> int:
    return int(rng.integers(faixa[0], faixa[1] + 1))


def _vetor(rng, dim: int) -> list[float]:
    return [float(x) for x in rng.standard_normal(dim)]


def _pesos(rng, n: int) -> list[float]:
    if n == 1:
        return [1.0]
    return [float(x) for x in rng.dirichlet(np.ones(n))]


def _beta_lema(rng, lema: str, alpha: float) -> float:
    teto = alpha + 1.0 if lema in ("KyFan", "AmGm") else 2.0 * alpha
    return _uniforme(rng, (alpha, teto))


def _matriz(c: Campaign, rng, espectro) -> SymmetricMatrix:
    """Matriz com o espectro sorteado: diagonal, ou conjugada por ortogonal aleatória com `rotate`.

    Com x gaussiano (invariante por rotação) a lei de (espectro, ⟨x,qᵢ⟩²) é a mesma nos dois casos.
    """
    if c.rotate:
        return random_symmetric(rng, espectro)
    return SymmetricMatrix.diagonal(espectro)


def _instancia_operador(c: Campaign, rng, regiao: dict) -> dict:
    modo = MODO_POR_ALVO[c.target]
    inst = {"target": c.target.value, "kind": "operador", "mode": modo.value, "triple": c.triple}
    if modo is ModoJensen.PER_LAMBDA:
        inst["lam"] = _uniforme(rng, regiao["lam"])

    if c.triple == "classical":
        familia, params = FIXTURES_CONVEXAS[int(rng.integers(len(FIXTURES_CONVEXAS)))]
        f = criar_funcao(familia, **params)
        h = criar_funcao(Familia.IDENTITY_WEIGHT)
        espectro = rng.uniform(regiao["a"][0], regiao["a"][1], _inteiro(rng, regiao["dim"]))
        inst.update(f=f.para_dict(), h=h.para_dict(), spectral_interval=str(f.domain))
    elif c.triple == "cor22":
        a = _log_uniforme(rng, regiao["a"])
        beta = _uniforme(rng, regiao["beta"])
        f = criar_funcao(Familia.EXPDECAY_TARGET, NONNEGATIVE)
        h = criar_funcao(Familia.POWER_WEIGHT, beta=beta)
        inst.update(f=f.para_dict(), h=h.para_dict(), spectral_interval=str(f.domain))
        inst.update(A=[[0.0, 0.0], [0.0, a]], x=[1.0, 1.0], params={"a": a, "beta": beta})
        return inst
    else:
        alpha = _uniforme(rng, regiao["alpha"])
        beta = _beta_lema(rng, c.triple, alpha)
        p = _uniforme(rng, regiao["p"]) if c.triple == "HolderMcCarthy" else None
        v = _log_uniforme(rng, regiao["v"])
        inst["params"] = {"alpha": alpha, "beta": beta, "p": p, "v": v}
        try:
            tri = lemma_triple(c.triple, alpha, beta, p)
            porta = gate_interval(tri.g, v, tri.f.domain)
        except DomainError as exc:
            inst["rejeicao"] = f"porta: {exc}"
            return inst
        espectro = rng.uniform(porta.interval.lo, porta.interval.hi, _inteiro(rng, regiao["dim"]))
        inst.update(f=tri.f.para_dict(), h=tri.h.para_dict(), spectral_interval=str(porta.interval))

    A = _matriz(c, rng, espectro)
    inst.update(A=A.linhas(), x=_vetor(rng, A.dim))
    return inst


def _instancia_cadeia(c: Campaign, rng, regiao: dict) -> dict:
    alvo = c.target
    alpha = _uniforme(rng, regiao["alpha"])
    v = _log_uniforme(rng, regiao["v"])
    inst = {"target": alvo.value, "kind": "cadeia", "inequality": c.inequality, "alpha": alpha, "v": v}

    if alvo is Alvo.HOLDER_MCCARTHY:
        p = _uniforme(rng, regiao["p"])
        dim = _inteiro(rng, regiao["dim"])
        espalhamento = float(rng.uniform(0.0, 1.0))
        espectro = rng.uniform(v * (1.0 - espalhamento), v, dim)
        espectro = np.maximum(espectro, v * 1e-6)
        A = _matriz(c, rng, espectro)
        inst.update(p=p, A=A.linhas(), x=_vetor(rng, dim))
        return inst

    n = _inteiro(rng, regiao["n"])
    inst["q"] = _pesos(rng, n)
    if alvo is Alvo.KYFAN:
        lo = evaluate(criar_funcao(Familia.KYFAN_GATE, alpha=alpha), v)
        inst["a"] = [float(x) for x in rng.uniform(lo, v, n)]
    elif alvo is Alvo.AMGM:
        inst["a"] = [float(x) for x in rng.uniform(v**alpha, v, n)]
    else:
        espalhamento = float(rng.uniform(0.0, 1.0))
        lo = max(v * (1.0 - espalhamento), v * 1e-6)
        inst["a"] = [float(x) for x in rng.uniform(lo, v, n)]
        inst["b"] = [float(x) for x in rng.uniform(lo, v, n)]
    return inst


def _instancia_lema(c: Campaign, rng, regiao: dict) -> dict:
    lema = list(Lema)[int(rng.integers(len(Lema)))]
    faixa_alpha = regiao["alpha"]
    if lema in (Lema.KYFAN, Lema.AMGM):
        faixa_alpha = (max(faixa_alpha[0], 1.0 + 1e-9), max(faixa_alpha[1], 1.0 + 1e-9))
    alpha = _uniforme(rng, faixa_alpha)
    beta = _beta_lema(rng, lema.value, alpha)
    p = _uniforme(rng, regiao["p"]) if lema is Lema.HOLDER_MCCARTHY else None
    faixa_v = _regiao_padrao(Alvo(lema.value), lema.value)["v"] if c.region.v is None else regiao["v"]
    v = _log_uniforme(rng, faixa_v)
    return {
        "target": c.target.value,
        "kind": "lema",
        "lemma": lema.value,
        "alpha": alpha,
        "beta": beta,
        "p": p,
        "v": v,
        "grid": [c.grid, c.grid],
    }


def gerar_instancia(c: Campaign, indice: int, regiao: dict | None = None) -> dict:
    """Instância da amostra `indice`, função pura de (campanha, índice)."""
    rng = gerador_amostra(c.seed, indice)
    regiao = regiao if regiao is not None else regiao_efetiva(c)
    if c.target is Alvo.COR21:
        return {
            "target": c.target.value,
            "kind": "cor21",
            "a": _log_uniforme(rng, regiao["a"]),
            "beta": _uniforme(rng, regiao["beta"]),
            "lam": _uniforme(rng, regiao["lam"]),
            "published_value": c.published_value,
        }
    if c.target in MODO_POR_ALVO:
        return _instancia_operador(c, rng, regiao)
    if c.target in ALVOS_CADEIA:
        return _instancia_cadeia(c, rng, regiao)
    return _instancia_lema(c, rng, regiao)


# ─── Avaliação ───


@dataclass(frozen=True)
class Avaliacao:
    feasible: bool
    margin: float = math.nan
    motivo: str | None = None
    detalhes: dict = field(default_factory=dict)


def _inviavel(motivo: str) -> Avaliacao:
    return Avaliacao(False, math.nan, motivo)


def _cor21_funcoes(beta: float) -> tuple[ScalarFunction, ScalarFunction]:
    return criar_funcao(Familia.EXPDECAY_TARGET, NONNEGATIVE), criar_funcao(Familia.POWER_WEIGHT, beta=beta)


def _avaliar_cor21(inst: dict) -> Avaliacao:
    a, beta, lam = inst["a"], inst["beta"], inst["lam"]
    if not (a > 0.0 and 0.0 < beta < 1.0 and 0.5 < lam < 1.0):
        return _inviavel("fora da região do contraexemplo")
    f, h = _cor21_funcoes(beta)
    if inst.get("published_value"):
        fator = evaluate(h, lam) / lam
        lhs = math.exp(-a / 2.0)
        rhs = fator * math.exp(-a) / 2.0
        return Avaliacao(True, rhs - lhs, detalhes={"lhs": lhs, "rhs": rhs, "rhs_factor": fator})
    A, x = SymmetricMatrix.diagonal([0.0, a]), UnitVector([1.0, 1.0])
    veredito = jensen_verify(f, h, A, x, ModoJensen.PER_LAMBDA, lam)
    return Avaliacao(True, veredito.margin, detalhes=veredito.para_dict())


def _avaliar_operador(inst: dict) -> Avaliacao:
    if "rejeicao" in inst:
        return _inviavel(inst["rejeicao"])
    f = ScalarFunction.de_dict(inst["f"])
    h = ScalarFunction.de_dict(inst["h"])
    A = SymmetricMatrix(inst["A"])
    x = UnitVector(inst["x"])
    if not spectrum_in(A, Interval.parse(inst["spectral_interval"])).contido:
        return _inviavel("espectro fora do intervalo da porta")
    try:
        veredito = jensen_verify(f, h, A, x, ModoJensen(inst["mode"]), inst.get("lam"))
    except DomainError as exc:
        return _inviavel(f"espectro: {exc}")
    return Avaliacao(True, veredito.margin, detalhes=veredito.para_dict())


def _relatorio_cadeia(inst: dict):
    alvo = Alvo(inst["target"])
    if alvo is Alvo.HOLDER_MCCARTHY:
        return hm_chain(SymmetricMatrix(inst["A"]), UnitVector(inst["x"]), inst["p"], inst["alpha"], inst["v"])
    amostra = WeightedSample(a=tuple(inst["a"]), q=tuple(inst["q"]), b=tuple(inst["b"]) if inst.get("b") else None)
    funcao = {Alvo.KYFAN: kyfan_chain, Alvo.AMGM: amgm_chain, Alvo.CHRYSTAL: chrystal_chain}[alvo]
    return funcao(amostra, inst["alpha"], inst["v"])


def _margem_cadeia(lhs, mid, rhs, inequality: str):
    if inequality == "classical":
        return rhs - lhs
    return min(mid - lhs, rhs - mid)


def _avaliar_cadeia(inst: dict) -> Avaliacao:
    try:
        relatorio = _relatorio_cadeia(inst)
    except DomainError as exc:
        return _inviavel(f"amostra: {exc}")
    margem = _margem_cadeia(relatorio.lhs, relatorio.mid, relatorio.rhs, inst["inequality"])
    if not relatorio.feasible:
        falhas = sorted(k for k, ok in relatorio.viabilidade.flags.items() if not ok)
        return Avaliacao(False, margem, "hipóteses: " + ",".join(falhas), relatorio.para_dict())
    return Avaliacao(True, margem, detalhes=relatorio.para_dict())


def _avaliar_lema(inst: dict) -> Avaliacao:
    if not lemma_parameters_ok(inst["lemma"], inst["alpha"], inst["beta"], inst.get("p")):
        return _inviavel("parâmetros fora da região do lema")
    tri = lemma_triple(inst["lemma"], inst["alpha"], inst["beta"], inst.get("p"))
    if not tri.f.domain.contains(inst["v"]):
        return _inviavel("v fora do domínio de f")
    try:
        cert = certify(tri.f, tri.g, tri.h, inst["v"], tuple(inst["grid"]), confirmar=False)
    except DomainError as exc:
        return _inviavel(f"porta: {exc}")
    return Avaliacao(True, cert.min_value, detalhes=cert.para_dict())


_AVALIADORES = {
    "cor21": _avaliar_cor21,
    "operador": _avaliar_operador,
    "cadeia": _avaliar_cadeia,
    "lema": _avaliar_lema,
}


def avaliar_instancia(inst: dict) -> Avaliacao:
    """Margem em double (rhs − lhs) e viabilidade da instância serializada."""
    return _AVALIADORES[inst["kind"]](inst)


def margem_estendida(inst: dict) -> mpmath.mpf:
    """Mesma margem de `avaliar_instancia`, reavaliada com precisao.DPS_PADRAO dígitos."""
    tipo = inst["kind"]
    if tipo == "cor21":
        if inst.get("published_value"):
            return precisao.cor21_publicado_mp(inst["a"], inst["beta"], inst["lam"])
        f, h = _cor21_funcoes(inst["beta"])
        return precisao.jensen_mp(f, h, [[0.0, 0.0], [0.0, inst["a"]]], [1.0, 1.0], "PerLambda", inst["lam"])["margin"]
    if tipo == "operador":
        f = ScalarFunction.de_dict(inst["f"])
        h = ScalarFunction.de_dict(inst["h"])
        return precisao.jensen_mp(f, h, inst["A"], inst["x"], inst["mode"], inst.get("lam"))["margin"]
    if tipo == "cadeia":
        alvo = Alvo(inst["target"])
        if alvo is Alvo.KYFAN:
            termos = precisao.kyfan_chain_mp(inst["a"], inst["q"], inst["alpha"])
        elif alvo is Alvo.AMGM:
            termos = precisao.amgm_chain_mp(inst["a"], inst["q"], inst["alpha"])
        elif alvo is Alvo.CHRYSTAL:
            termos = precisao.chrystal_chain_mp(inst["a"], inst["b"], inst["q"], inst["alpha"])
        else:
            termos = precisao.hm_chain_mp(inst["A"], inst["x"], inst["p"], inst["alpha"])
        with precisao.precisao_estendida():
            return _margem_cadeia(*termos, inst["inequality"])
    tri = lemma_triple(inst["lemma"], inst["alpha"], inst["beta"], inst.get("p"))
    cert = certify(tri.f, tri.g, tri.h, inst["v"], tuple(inst["grid"]), confirmar=False)
    return precisao.gap_mp(tri.f, tri.h, inst["v"], *cert.arg_min)


# ─── Testemunhas ───


class StatusTestemunha(str, Enum):
    PENDENTE = "PENDENTE"
    CONFIRMADA = "CONFIRMADA"
    RUIDO_NUMERICO = "RUIDO_NUMERICO"
    ABAIXO_LIMIAR = "ABAIXO_LIMIAR"
    INVIAVEL = "INVIAVEL"
    SEM_VIOLACAO = "SEM_VIOLACAO"


@dataclass(frozen=True)
class Witness:
    inputs: dict
    margin_double: float
    index: int | None = None
    margin_confirmed: str | None = None
    confirmed: bool = False
    feasible: bool = True
    status: StatusTestemunha = StatusTestemunha.PENDENTE

    @property
    def margem_confirmada(self) -> float | None:
        return None if self.margin_confirmed is None else float(mpmath.mpf(self.margin_confirmed))

    def para_dict(self) -> dict:
        return {
            "index": self.index,
            "inputs": self.inputs,
            "margin_double": self.margin_double,
            "margin_confirmed": self.margin_confirmed,
            "confirmed": self.confirmed,
            "feasible": self.feasible,
            "status": self.status.value,
        }


def confirm(w: Witness, forcar: bool = False) -> Witness:
    """Reavalia a candidata a partir das entradas serializadas e decide o status.

    Com `forcar`, a reavaliação estendida é feita mesmo para margens não negativas
    (instâncias de referência).
    """
    avaliacao = avaliar_instancia(w.inputs)
    margem = avaliacao.margin
    if not avaliacao.feasible:
        texto = None
        if forcar and math.isfinite(margem):
            texto = precisao.texto_mp(margem_estendida(w.inputs))
        return replace(
            w, margin_double=margem, margin_confirmed=texto, feasible=False, confirmed=False,
            status=StatusTestemunha.INVIAVEL,
        )
    if margem >= -TOLERANCIA_VIOLACAO and not forcar:
        logger.info("Candidata %s rebaixada: margem %r acima do limiar de violação", w.index, margem)
        return replace(w, margin_double=margem, confirmed=False, status=StatusTestemunha.RUIDO_NUMERICO)

    estendida = margem_estendida(w.inputs)
    texto = precisao.texto_mp(estendida)
    if (margem < 0.0) != (estendida < 0):
        status = StatusTestemunha.RUIDO_NUMERICO
    elif estendida >= 0:
        status = StatusTestemunha.SEM_VIOLACAO
    elif estendida > -LIMIAR_CONFIRMACAO:
        status = StatusTestemunha.ABAIXO_LIMIAR
    else:
        status = StatusTestemunha.CONFIRMADA
    if status is StatusTestemunha.RUIDO_NUMERICO:
        logger.info("Candidata %s rebaixada: sinais divergem (double %r, estendida %s)", w.index, margem, texto)
    return replace(
        w,
        margin_double=margem,
        margin_confirmed=texto,
        confirmed=status is StatusTestemunha.CONFIRMADA,
        feasible=True,
        status=status,
    )


def replay(inst: dict) -> Witness:
    """Reexecuta uma instância serializada (linha de relatório)."""
    return confirm(Witness(inputs=inst, margin_double=math.nan), forcar=True)


# ─── Instâncias de referência ───


def _referencia_operador(alvo: Alvo, lam: float | None = None) -> dict:
    f = criar_funcao(Familia.NEGLOG_TARGET)
    h = criar_funcao(Familia.EXP_WEIGHT, alpha=2.0, beta=2.16)
    porta = gate_interval(criar_funcao(Familia.POWER_GATE, alpha=2.0), 0.8, f.domain)
    inst = {
        "target": alvo.value,
        "kind": "operador",
        "mode": MODO_POR_ALVO[alvo].value,
        "triple": "AmGm",
        "f": f.para_dict(),
        "h": h.para_dict(),
        "spectral_interval": str(porta.interval),
        "A": [[0.64, 0.0], [0.0, 0.8]],
        "x": [1.0, 1.0],
    }
    if lam is not None:
        inst["lam"] = lam
    return inst


def instancias_referencia(c: Campaign) -> list[tuple[str, dict]]:
    """Instâncias fixas reavaliadas em toda campanha do alvo, qualquer que seja o sinal."""
    alvo = c.target
    if alvo is Alvo.PER_LAMBDA:
        return [
            ("amgm_operador_lam_0.9", _referencia_operador(alvo, 0.9)),
            ("amgm_operador_lam_0.99", _referencia_operador(alvo, 0.99)),
        ]
    if alvo in MODO_POR_ALVO:
        return [("amgm_operador", _referencia_operador(alvo))]
    if alvo is Alvo.COR21:
        return [
            (
                "cor21_a1_beta0.5_lam0.75",
                {"target": alvo.value, "kind": "cor21", "a": 1.0, "beta": 0.5, "lam": 0.75,
                 "published_value": c.published_value},
            )
        ]
    if alvo is Alvo.LEMAS:
        return [
            (
                "lema_amgm_v0.8",
                {"target": alvo.value, "kind": "lema", "lemma": "AmGm", "alpha": 2.0, "beta": 2.16, "p": None,
                 "v": 0.8, "grid": [c.grid, c.grid]},
            )
        ]
    base = {"target": alvo.value, "kind": "cadeia", "inequality": c.inequality, "alpha": 2.0}
    if alvo is Alvo.KYFAN:
        return [("kyfan_a0.45_0.5", {**base, "v": 0.5, "a": [0.45, 0.5], "q": [0.5, 0.5]})]
    if alvo is Alvo.AMGM:
        return [("amgm_a0.64_0.8", {**base, "v": 0.8, "a": [0.64, 0.8], "q": [0.5, 0.5]})]
    if alvo is Alvo.CHRYSTAL:
        return [
            (
                "chrystal_a1_b3",
                {**base, "alpha": 10.0, "v": 3.0, "a": [1.0, 1.0], "b": [3.0, 3.0], "q": [0.5, 0.5]},
            )
        ]
    return [
        (
            "hm_diag_0.64_0.8",
            {**base, "v": 0.8, "p": 2.0, "A": [[0.64, 0.0], [0.0, 0.8]], "x": [1.0, 1.0]},
        )
    ]


# ─── Campanha ───


@dataclass
class RelatorioCampanha:
    campaign: Campaign
    region: dict
    samples: int
    drawn: int
    rejected: int
    rejection_reasons: dict
    min_margin: float
    arg_min_index: int
    candidates: int
    witnesses: list[Witness]
    reference_instances: list[dict]
    tempo_s: float = 0.0

    @property
    def confirmed_witnesses(self) -> int:
        return sum(1 for w in self.witnesses if w.confirmed)

    @property
    def outcome(self) -> str:
        if self.confirmed_witnesses:
            return "testemunha confirmada"
        return f"nenhuma violação encontrada em {self.samples} amostras"

    def para_linha(self) -> dict:
        """Linha de resumo (LinhaCampanha)."""
        return {
            "target": self.campaign.target.value,
            "seed": self.campaign.seed,
            "samples": self.samples,
            "drawn": self.drawn,
            "rejected": self.rejected,
            "min_margin": self.min_margin,
            "candidates": self.candidates,
            "confirmed_witnesses": self.confirmed_witnesses,
            "outcome": self.outcome,
        }

    def para_dict(self) -> dict:
        return {
            "target": self.campaign.target.value,
            "campaign": self.campaign.model_dump(mode="json"),
            "region": {k: list(v) for k, v in sorted(self.region.items())},
            "samples_requested": self.campaign.samples,
            "samples": self.samples,
            "drawn": self.drawn,
            "rejected": self.rejected,
            "rejection_reasons": dict(sorted(self.rejection_reasons.items())),
            "min_margin": self.min_margin,
            "arg_min_index": self.arg_min_index,
            "candidates": self.candidates,
            "confirmed_witnesses": self.confirmed_witnesses,
            "witnesses": [w.para_dict() for w in self.witnesses],
            "outcome": self.outcome,
            "reference_instances": self.reference_instances,
            "tempo_s": self.tempo_s,
        }


def _avaliar_bloco(c: Campaign, regiao: dict, inicio: int, fim: int) -> list[tuple[bool, float, str | None]]:
    resultados = []
    for indice in range(inicio, fim):
        avaliacao = avaliar_instancia(gerar_instancia(c, indice, regiao))
        resultados.append((avaliacao.feasible, avaliacao.margin, avaliacao.motivo))
    return resultados


def _avaliar_referencias(c: Campaign) -> list[dict]:
    saida = []
    for nome, inst in instancias_referencia(c):
        w = replay(inst)
        saida.append({"name": nome, **w.para_dict()})
    return saida


def run_campaign(c: Campaign, threads: int | None = None, tamanho_bloco: int = TAMANHO_BLOCO) -> RelatorioCampanha:
    """Executa a campanha; determinística dada a semente, qualquer que seja `threads`."""
    inicio_t = time.perf_counter()
    regiao = regiao_efetiva(c)
    threads = max(threads or get_threads(), 1)
    limite = c.samples * c.max_draw_factor
    logger.info("Campanha %s: %s amostras, semente %s, %s processo(s)", c.target.value, c.samples, c.seed, threads)

    contadas = rejeitadas = 0
    motivos: Counter = Counter()
    minimo, arg_min = math.inf, -1
    candidatas: list[tuple[float, int]] = []
    proximo = 0

    executor = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while contadas < c.samples and proximo < limite:
            blocos = []
            for _ in range(threads):
                if proximo >= limite:
                    break
                fim = min(proximo + tamanho_bloco, limite)
                blocos.append((proximo, fim))
                proximo = fim
            inicios = [b[0] for b in blocos]
            fins = [b[1] for b in blocos]
            if executor is not None:
                resultados = executor.map(_avaliar_bloco, repeat(c), repeat(regiao), inicios, fins)
            else:
                resultados = map(_avaliar_bloco, repeat(c), repeat(regiao), inicios, fins)
            for inicio, lote in zip(inicios, resultados):
                for k, (viavel, margem, motivo) in enumerate(lote):
                    if contadas >= c.samples:
                        break
                    if not viavel:
                        rejeitadas += 1
                        motivos[motivo.split(":")[0]] += 1
                        continue
                    contadas += 1
                    if margem < minimo:
                        minimo, arg_min = margem, inicio + k
                    if margem < -TOLERANCIA_VIOLACAO:
                        candidatas.append((margem, inicio + k))
            logger.info("  → %s/%s amostras contadas (%s rejeitadas)", contadas, c.samples, rejeitadas)
    finally:
        if executor is not None:
            executor.shutdown()

    sorteadas = contadas + rejeitadas
    if contadas == 0:
        mensagem = f"nenhuma amostra viável em {sorteadas} sorteios para {c.target.value}"
        raise EmptyRegion(mensagem, sorteadas, rejeitadas)
    if contadas < c.samples:
        logger.warning("Campanha %s: só %s de %s amostras viáveis em %s sorteios", c.target.value, contadas,
                       c.samples, sorteadas)

    candidatas.sort()
    testemunhas = []
    for margem, indice in candidatas[: c.max_witnesses]:
        inst = gerar_instancia(c, indice, regiao)
        testemunha = confirm(Witness(inputs=inst, margin_double=margem, index=indice))
        logger.info("Testemunha %s: %s (double %r, estendida %s)", indice, testemunha.status.value, margem,
                    testemunha.margin_confirmed)
        testemunhas.append(testemunha)

    relatorio = RelatorioCampanha(
        campaign=c,
        region=regiao,
        samples=contadas,
        drawn=sorteadas,
        rejected=rejeitadas,
        rejection_reasons=dict(motivos),
        min_margin=minimo,
        arg_min_index=arg_min,
        candidates=len(candidatas),
        witnesses=testemunhas,
        reference_instances=_avaliar_referencias(c),
    )
    relatorio.tempo_s = time.perf_counter() - inicio_t
    logger.info("Campanha %s concluída: %s", c.target.value, relatorio.outcome)
    return relatorio


# ─── Perfil em λ ───


@dataclass(frozen=True)
class PerfilLambda:
    pontos: list[tuple[float, float]]
    arg_min: float
    min_margin: float
    trocas_de_sinal: list[tuple[float, float]]
    quociente_decrescente: bool

    def para_dict(self) -> dict:
        return {
            "points": [{"lam": lam, "margin": m} for lam, m in self.pontos],
            "arg_min": self.arg_min,
            "min_margin": self.min_margin,
            "sign_changes": [list(t) for t in self.trocas_de_sinal],
            "quotient_decreasing": self.quociente_decrescente,
        }


def lambda_profile(
    f: ScalarFunction, h: ScalarFunction, A: SymmetricMatrix, x: UnitVector, lambdas=None
) -> PerfilLambda:
    """Curva da margem por λ e monotonicidade de h(λ)/λ na grade."""
    lambdas = np.linspace(0.01, 0.99, 99) if lambdas is None else np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise DomainError("grade de λ vazia")
    pontos = []
    for lam in lambdas:
        veredito = jensen_verify(f, h, A, x, ModoJensen.PER_LAMBDA, float(lam))
        pontos.append((float(lam), veredito.margin))
    margens = [m for _, m in pontos]
    k = int(np.argmin(margens))
    trocas = [
        (pontos[i][0], pontos[i + 1][0])
        for i in range(len(pontos) - 1)
        if (margens[i] < 0.0) != (margens[i + 1] < 0.0)
    ]
    quocientes = np.array([evaluate(h, lam) / lam for lam, _ in pontos])
    return PerfilLambda(pontos, pontos[k][0], margens[k], trocas, bool(np.all(np.diff(quocientes) <= 0.0)))
