"""
Famílias de funções escalares avaliáveis (pesos h, portas g, alvos f) e o tipo
de intervalo sobre o qual atuam.

Cada família tem três faces:
    - avaliação vetorizada (numpy) para grades;
    - avaliação escalar com checagem de domínio (`evaluate`);
    - avaliação em precisão estendida (mpmath) para confirmação de testemunhas.

Uso:
    from src.funclib import Familia, criar_funcao, evaluate, gate_interval

    h = criar_funcao(Familia.EXP_WEIGHT, alpha=2, beta=2.16)
    evaluate(h, 0.0)  # 0.9259...
"""

import logging
import math
import re
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from enum import Enum

import mpmath
import numpy as np

from src.erros import DomainError, InfeasibleGate, PrecisionUnavailable

logger = logging.getLogger(__name__)

EPSILON_TRUNCAMENTO = 1e-9


# ─── Intervalos ───


def _formatar_extremo(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


@dataclass(frozen=True)
class Interval:
    """Intervalo real com extremos abertos ou fechados; extremos infinitos são sempre abertos."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise DomainError("extremo de intervalo é NaN")
        if lo > hi:
            raise DomainError(f"intervalo invertido: lo={lo!r} > hi={hi!r}")
        lo_open = bool(self.lo_open) or math.isinf(lo)
        hi_open = bool(self.hi_open) or math.isinf(hi)
        if lo == hi and (lo_open or hi_open):
            raise DomainError(f"intervalo degenerado em {lo!r} precisa ser fechado")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_open", lo_open)
        object.__setattr__(self, "hi_open", hi_open)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, t: float) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and self.lo_open:
            return False
        if t == self.hi and self.hi_open:
            return False
        return True

    def contains_array(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        acima = t > self.lo if self.lo_open else t >= self.lo
        abaixo = t < self.hi if self.hi_open else t <= self.hi
        return acima & abaixo

    def contains_interval(self, outro: "Interval") -> bool:
        """True se `outro` ⊆ self."""
        if outro.lo < self.lo or (outro.lo == self.lo and self.lo_open and not outro.lo_open):
            return False
        if outro.hi > self.hi or (outro.hi == self.hi and self.hi_open and not outro.hi_open):
            return False
        return True

    def intersect(self, outro: "Interval") -> "Interval":
        if self.lo > outro.lo:
            lo, lo_open = self.lo, self.lo_open
        elif outro.lo > self.lo:
            lo, lo_open = outro.lo, outro.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or outro.lo_open
        if self.hi < outro.hi:
            hi, hi_open = self.hi, self.hi_open
        elif outro.hi < self.hi:
            hi, hi_open = outro.hi, outro.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or outro.hi_open
        if lo > hi or (lo == hi and (lo_open or hi_open)):
            raise DomainError(f"interseção vazia entre {self} e {outro}")
        return Interval(lo, hi, lo_open, hi_open)

    def __str__(self) -> str:
        abre = "(" if self.lo_open else "["
        fecha = ")" if self.hi_open else "]"
        return f"{abre}{_formatar_extremo(self.lo)}, {_formatar_extremo(self.hi)}{fecha}"

    _PADRAO = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")

    @classmethod
    def parse(cls, texto: str) -> "Interval":
        """Lê a forma textual, ex: '(0, 1]', '[0, inf)'."""
        m = cls._PADRAO.match(texto)
        if not m:
            raise DomainError(f"intervalo mal formado: {texto!r}")
        abre, lo, hi, fecha = m.groups()
        try:
            lo_f = float(lo.replace("∞", "inf"))
            hi_f = float(hi.replace("∞", "inf"))
        except ValueError as exc:
            raise DomainError(f"extremo não numérico em {texto!r}") from exc
        return cls(lo_f, hi_f, abre == "(", fecha == ")")


REAL = Interval(-math.inf, math.inf)
UNIT = Interval(0.0, 1.0)
OPEN_UNIT = Interval(0.0, 1.0, True, True)
POSITIVE = Interval(0.0, math.inf, True, True)
NONNEGATIVE = Interval(0.0, math.inf, False, True)


# ─── Famílias ───


class Familia(str, Enum):
    EXP_WEIGHT = "ExpWeight"
    POWER_WEIGHT = "PowerWeight"
    IDENTITY_WEIGHT = "IdentityWeight"
    KYFAN_GATE = "KyFanGate"
    POWER_GATE = "PowerGate"
    CHRYSTAL_GATE = "ChrystalGate"
    ROOT_GATE = "RootGate"
    PIECEWISE_GATE = "PiecewiseGate"
    COSINE_GATE = "CosineGate"
    CONSTANT_GATE = "ConstantGate"
    LOGIT_TARGET = "LogitTarget"
    NEGLOG_TARGET = "NegLogTarget"
    SOFTPLUS_TARGET = "SoftplusTarget"
    POWER_TARGET = "PowerTarget"
    CUBIC_TARGET = "CubicTarget"
    EXPDECAY_TARGET = "ExpDecayTarget"
    EXP_TARGET = "ExpTarget"
    ABS_TARGET = "AbsTarget"
    AFFINE_TARGET = "AffineTarget"


class Papel(str, Enum):
    PESO = "weight"
    PORTA = "gate"
    ALVO = "target"


Parametros = Mapping[str, float]


@dataclass(frozen=True)
class _DefinicaoFamilia:
    papel: Papel
    numerico: Callable[[np.ndarray, Parametros], np.ndarray]
    estendido: Callable[[mpmath.mpf, Parametros], mpmath.mpf] | None
    parametros: tuple[str, ...] = ()
    padroes: Mapping[str, float] = field(default_factory=dict)
    restricoes: Callable[[Parametros], str | None] = lambda p: None
    admissivel: Callable[[Parametros], Interval] = lambda p: REAL
    dominio_padrao: Callable[[Parametros], Interval] | None = None


def _alpha_beta(p: Parametros) -> str | None:
    if not 0 < p["alpha"] <= p["beta"]:
        return f"exige 0 < alpha <= beta (alpha={p['alpha']!r}, beta={p['beta']!r})"
    return None


def _positivo(nome: str) -> Callable[[Parametros], str | None]:
    def checar(p: Parametros) -> str | None:
        if not p[nome] > 0:
            return f"exige {nome} > 0 ({nome}={p[nome]!r})"
        return None

    return checar


def _root_gate_restricoes(p: Parametros) -> str | None:
    return _alpha_beta(p) or _positivo("p")(p)


def _chrystal_gate(t: np.ndarray, p: Parametros) -> np.ndarray:
    c = p["beta"] / p["alpha"] - 1.0
    if c == 0.0:
        return np.full_like(t, -np.inf, dtype=float)
    # (1+e^t)^c - 1 = expm1(c·softplus(t))
    return np.log(np.expm1(c * np.logaddexp(0.0, t)))


def _chrystal_gate_mp(t: mpmath.mpf, p: Parametros) -> mpmath.mpf:
    c = mpmath.mpf(p["beta"]) / mpmath.mpf(p["alpha"]) - 1
    if c == 0:
        return mpmath.ninf
    return mpmath.log(mpmath.expm1(c * mpmath.log1p(mpmath.exp(t))))


def _kyfan_gate(t: np.ndarray, p: Parametros) -> np.ndarray:
    ta = np.power(t, p["alpha"])
    return ta / (ta + np.power(1.0 - t, p["alpha"]))


def _kyfan_gate_mp(t: mpmath.mpf, p: Parametros) -> mpmath.mpf:
    ta = mpmath.power(t, p["alpha"])
    return ta / (ta + mpmath.power(1 - t, p["alpha"]))


def _power_target_admissivel(p: Parametros) -> Interval:
    expoente = p["p"]
    if expoente > 0 and float(expoente).is_integer():
        return REAL
    return NONNEGATIVE if expoente > 0 else POSITIVE


def _piecewise(t: np.ndarray, p: Parametros) -> np.ndarray:
    return np.where(t == p["at"], p["value_at"], p["value_else"]).astype(float)


def _piecewise_mp(t: mpmath.mpf, p: Parametros) -> mpmath.mpf:
    return mpmath.mpf(p["value_at"] if t == p["at"] else p["value_else"])


_FAMILIAS: dict[Familia, _DefinicaoFamilia] = {
    # h(t) = (α/β)·e^{t(1-t)}
    Familia.EXP_WEIGHT: _DefinicaoFamilia(
        papel=Papel.PESO,
        numerico=lambda t, p: (p["alpha"] / p["beta"]) * np.exp(t * (1.0 - t)),
        estendido=lambda t, p: mpmath.mpf(p["alpha"]) / mpmath.mpf(p["beta"]) * mpmath.exp(t * (1 - t)),
        parametros=("alpha", "beta"),
        restricoes=_alpha_beta,
    ),
    Familia.POWER_WEIGHT: _DefinicaoFamilia(
        papel=Papel.PESO,
        numerico=lambda t, p: np.power(t, p["beta"]),
        estendido=lambda t, p: mpmath.power(t, p["beta"]),
        parametros=("beta",),
        restricoes=_positivo("beta"),
        admissivel=lambda p: NONNEGATIVE,
    ),
    Familia.IDENTITY_WEIGHT: _DefinicaoFamilia(
        papel=Papel.PESO,
        numerico=lambda t, p: t * 1.0,
        estendido=lambda t, p: t,
    ),
    Familia.KYFAN_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=_kyfan_gate,
        estendido=_kyfan_gate_mp,
        parametros=("alpha",),
        restricoes=_positivo("alpha"),
        admissivel=lambda p: UNIT,
    ),
    Familia.POWER_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=lambda t, p: np.power(t, p["alpha"]),
        estendido=lambda t, p: mpmath.power(t, p["alpha"]),
        parametros=("alpha",),
        restricoes=_positivo("alpha"),
        admissivel=lambda p: NONNEGATIVE,
    ),
    Familia.CHRYSTAL_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=_chrystal_gate,
        estendido=_chrystal_gate_mp,
        parametros=("alpha", "beta"),
        restricoes=_alpha_beta,
    ),
    Familia.ROOT_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=lambda t, p: t * (p["beta"] / p["alpha"] - 1.0) ** (1.0 / p["p"]),
        estendido=lambda t, p: t
        * mpmath.power(mpmath.mpf(p["beta"]) / mpmath.mpf(p["alpha"]) - 1, 1 / mpmath.mpf(p["p"])),
        parametros=("alpha", "beta", "p"),
        restricoes=_root_gate_restricoes,
    ),
    # g(t) = value_at se t = at, value_else caso contrário (1 em t=2, 2 fora)
    Familia.PIECEWISE_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=_piecewise,
        estendido=_piecewise_mp,
        parametros=("at", "value_at", "value_else"),
        padroes={"at": 2.0, "value_at": 1.0, "value_else": 2.0},
    ),
    Familia.COSINE_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=lambda t, p: np.cos(p["omega"] * np.pi * t),
        estendido=lambda t, p: mpmath.cos(mpmath.mpf(p["omega"]) * mpmath.pi * t),
        parametros=("omega",),
        padroes={"omega": 4.0 / 3.0},
    ),
    Familia.CONSTANT_GATE: _DefinicaoFamilia(
        papel=Papel.PORTA,
        numerico=lambda t, p: np.full_like(t, p["c"], dtype=float),
        estendido=lambda t, p: mpmath.mpf(p["c"]),
        parametros=("c",),
        padroes={"c": 0.0},
    ),
    Familia.LOGIT_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.log1p(-t) - np.log(t),
        estendido=lambda t, p: mpmath.log(1 - t) - mpmath.log(t),
        admissivel=lambda p: OPEN_UNIT,
    ),
    Familia.NEGLOG_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: -np.log(t),
        estendido=lambda t, p: -mpmath.log(t),
        admissivel=lambda p: POSITIVE,
    ),
    Familia.SOFTPLUS_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.logaddexp(0.0, t),
        estendido=lambda t, p: mpmath.log1p(mpmath.exp(t)),
    ),
    Familia.POWER_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.power(t, p["p"]),
        estendido=lambda t, p: mpmath.power(t, p["p"]),
        parametros=("p",),
        admissivel=_power_target_admissivel,
        dominio_padrao=lambda p: NONNEGATIVE if p["p"] > 0 else POSITIVE,
    ),
    Familia.CUBIC_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: (t - 1.0) ** 3,
        estendido=lambda t, p: (t - 1) ** 3,
    ),
    Familia.EXPDECAY_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.exp(-t),
        estendido=lambda t, p: mpmath.exp(-t),
    ),
    Familia.EXP_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.exp(t),
        estendido=lambda t, p: mpmath.exp(t),
    ),
    Familia.ABS_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: np.abs(t),
        estendido=lambda t, p: abs(t),
    ),
    Familia.AFFINE_TARGET: _DefinicaoFamilia(
        papel=Papel.ALVO,
        numerico=lambda t, p: p["slope"] * t + p["intercept"],
        estendido=lambda t, p: mpmath.mpf(p["slope"]) * t + mpmath.mpf(p["intercept"]),
        parametros=("slope", "intercept"),
        padroes={"slope": 1.0, "intercept": 0.0},
    ),
}


@dataclass(frozen=True)
class ScalarFunction:
    """Função escalar parametrizada e imutável; parâmetros validados na construção."""

    family: Familia
    params: tuple[tuple[str, float], ...] = ()
    domain: Interval | None = None

    def __post_init__(self):
        try:
            familia = Familia(self.family)
        except ValueError as exc:
            raise DomainError(f"família desconhecida: {self.family!r}") from exc
        definicao = _FAMILIAS[familia]
        fornecidos = dict(self.params)
        desconhecidos = sorted(set(fornecidos) - set(definicao.parametros))
        if desconhecidos:
            raise DomainError(f"{familia.value}: parâmetros desconhecidos {desconhecidos}")

        valores: dict[str, float] = {}
        for nome in definicao.parametros:
            if nome in fornecidos:
                valor = float(fornecidos[nome])
            elif nome in definicao.padroes:
                valor = float(definicao.padroes[nome])
            else:
                raise DomainError(f"{familia.value}: parâmetro obrigatório ausente '{nome}'")
            if not math.isfinite(valor):
                raise DomainError(f"{familia.value}: parâmetro '{nome}' não finito")
            valores[nome] = valor

        erro = definicao.restricoes(valores)
        if erro:
            raise DomainError(f"{familia.value}: {erro}")

        admissivel = definicao.admissivel(valores)
        if self.domain is not None:
            dominio = self.domain
        elif definicao.dominio_padrao is not None:
            dominio = definicao.dominio_padrao(valores)
        else:
            dominio = admissivel
        if not admissivel.contains_interval(dominio):
            raise DomainError(
                f"{familia.value}: domínio {dominio} contém singularidade (admissível: {admissivel})"
            )

        object.__setattr__(self, "family", familia)
        object.__setattr__(self, "params", tuple((nome, valores[nome]) for nome in definicao.parametros))
        object.__setattr__(self, "domain", dominio)
        object.__setattr__(self, "_valores", valores)
        object.__setattr__(self, "_definicao", definicao)

    @property
    def valores(self) -> dict[str, float]:
        return dict(self._valores)

    @property
    def papel(self) -> Papel:
        return self._definicao.papel

    def param(self, nome: str) -> float:
        return self._valores[nome]

    def __call__(self, t):
        """Avaliação vetorizada, sem checagem de domínio (uso interno em grades)."""
        with np.errstate(all="ignore"):
            return self._definicao.numerico(np.asarray(t, dtype=float), self._valores)

    def estendido(self, t) -> mpmath.mpf:
        """Avaliação em precisão estendida (contexto mpmath corrente)."""
        if self._definicao.estendido is None:
            raise PrecisionUnavailable(f"{self.family.value} não tem caminho de alta precisão")
        return self._definicao.estendido(mpmath.mpf(t), self._valores)

    def para_dict(self) -> dict:
        return {"family": self.family.value, "domain": str(self.domain), **self._valores}

    @classmethod
    def de_dict(cls, dados: Mapping) -> "ScalarFunction":
        dados = dict(dados)
        familia = dados.pop("family")
        dominio = dados.pop("domain", None)
        if isinstance(dominio, str):
            dominio = Interval.parse(dominio)
        return cls(familia, tuple(dados.items()), dominio)

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.family.value}({params}) em {self.domain}"


def criar_funcao(family: Familia | str, domain: Interval | str | None = None, **params: float) -> ScalarFunction:
    """Atalho: criar_funcao('ExpWeight', alpha=2, beta=2.16)."""
    if isinstance(domain, str):
        domain = Interval.parse(domain)
    return ScalarFunction(family, tuple(params.items()), domain)


# ─── Operações ───


def evaluate(fn: ScalarFunction, t: float) -> float:
    """Forma fechada da família em t, com checagem de domínio e singularidades."""
    t = float(t)
    if not fn.domain.contains(t):
        raise DomainError(f"t={t!r} fora do domínio {fn.domain} de {fn.family.value}")
    y = float(fn(t))
    if math.isnan(y) or (math.isinf(y) and not (fn.papel is Papel.PORTA and y < 0)):
        raise DomainError(f"{fn.family.value} singular em t={t!r}")
    return y


@dataclass(frozen=True)
class GateInterval:
    """[g(v), v] ∩ ambiente, com as marcas de degeneração e truncamento."""

    interval: Interval
    gate_value: float
    degenerate: bool
    clamped: bool

    def para_dict(self) -> dict:
        return {
            "interval": str(self.interval),
            "gate_value": self.gate_value,
            "degenerate": self.degenerate,
            "clamped": self.clamped,
        }


def gate_interval(
    g: ScalarFunction, v: float, ambient: Interval, epsilon: float = EPSILON_TRUNCAMENTO
) -> GateInterval:
    """Intervalo condicional [g(v), v] dentro do domínio ambiente."""
    v = float(v)
    if not ambient.contains(v):
        raise DomainError(f"v={v!r} fora do ambiente {ambient}")
    gv = evaluate(g, v)
    if gv > v:
        raise InfeasibleGate(f"g(v)={gv!r} > v={v!r}: porta inviável")

    lo = gv
    truncado = False
    if gv < ambient.lo or (gv == ambient.lo and ambient.lo_open):
        if math.isinf(ambient.lo):
            raise DomainError(f"intervalo de porta ilimitado inferiormente em v={v!r}")
        lo = min(ambient.lo + epsilon if ambient.lo_open else ambient.lo, v)
        truncado = True
        logger.info("Porta %s truncada em v=%r: g(v)=%r → %r", g.family.value, v, gv, lo)

    intervalo = Interval(lo, v)
    return GateInterval(intervalo, gv, intervalo.degenerate, truncado)


# ─── Triplos (f, g, h) dos lemas ───


class Lema(str, Enum):
    KYFAN = "KyFan"
    AMGM = "AmGm"
    CHRYSTAL = "Chrystal"
    HOLDER_MCCARTHY = "HolderMcCarthy"


@dataclass(frozen=True)
class LemmaTriple:
    lema: Lema
    f: ScalarFunction
    g: ScalarFunction
    h: ScalarFunction


def lemma_parameters_ok(lema: Lema, alpha: float, beta: float, p: float | None = None) -> bool:
    """Região de parâmetros declarada por cada lema."""
    lema = Lema(lema)
    if lema in (Lema.KYFAN, Lema.AMGM):
        return 1 < alpha <= beta <= alpha + 1
    if lema is Lema.CHRYSTAL:
        return 0 < alpha <= beta <= 2 * alpha
    return 0 < alpha <= beta <= 2 * alpha and p is not None and p > 1


def lemma_triple(lema: Lema | str, alpha: float, beta: float, p: float | None = None) -> LemmaTriple:
    """Triplo embutido de cada lema, com o domínio do lema para f."""
    lema = Lema(lema)
    h = criar_funcao(Familia.EXP_WEIGHT, alpha=alpha, beta=beta)
    if lema is Lema.KYFAN:
        f = criar_funcao(Familia.LOGIT_TARGET, Interval(0.0, 0.5, True, False))
        g = criar_funcao(Familia.KYFAN_GATE, alpha=alpha)
    elif lema is Lema.AMGM:
        f = criar_funcao(Familia.NEGLOG_TARGET, Interval(0.0, 1.0, True, False))
        g = criar_funcao(Familia.POWER_GATE, alpha=alpha)
    elif lema is Lema.CHRYSTAL:
        f = criar_funcao(Familia.SOFTPLUS_TARGET, POSITIVE)
        g = criar_funcao(Familia.CHRYSTAL_GATE, alpha=alpha, beta=beta)
    else:
        if p is None:
            raise DomainError("HolderMcCarthy exige o expoente p")
        f = criar_funcao(Familia.POWER_TARGET, NONNEGATIVE, p=p)
        g = criar_funcao(Familia.ROOT_GATE, alpha=alpha, beta=beta, p=p)
    return LemmaTriple(lema, f, g, h)
