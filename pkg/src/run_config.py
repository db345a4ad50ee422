"""
Configuração de execução (RunConfig): arquivo INI validado por Pydantic.

Seções: [run], [f], [g], [h], [certify], [jcoeff], [jensen], [refine],
[falsify], [replay], [sweep]. Chaves desconhecidas são erro. Listas são
separadas por vírgula; matrizes têm linhas separadas por ';'.

Precedência: flag da CLI > chave do arquivo > padrão embutido.

Uso:
    from src.run_config import carregar_run_config, serializar_config

    cfg = carregar_run_config("config/exemplos/cubica_porta_pontual.ini")
    texto = serializar_config(cfg)   # parse → serializa → parse é a identidade
"""

import configparser
import io
import logging
from enum import Enum
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, Field, ValidationError, field_validator, model_validator

from src.erros import ConfigError
from src.falsify import Alvo
from src.funclib import Familia, Interval, Lema, ScalarFunction
from src.opcalc import ModoJensen

logger = logging.getLogger(__name__)


def _dividir(valor: Any) -> Any:
    if isinstance(valor, str):
        return [x.strip() for x in valor.split(",") if x.strip()]
    return valor


def _matriz(valor: Any) -> Any:
    if isinstance(valor, str):
        return [_dividir(linha) for linha in valor.split(";") if linha.strip()]
    return valor


ListaFloat = Annotated[list[float], BeforeValidator(_dividir)]
Par = Annotated[tuple[float, float], BeforeValidator(_dividir)]
ParInt = Annotated[tuple[int, int], BeforeValidator(_dividir)]
Matriz = Annotated[list[list[float]], BeforeValidator(_matriz)]
ListaAlvos = Annotated[list[Alvo], BeforeValidator(_dividir)]
GradeLambda = Annotated[tuple[float, float, int], BeforeValidator(_dividir)]

_ESTRITO = {"extra": "forbid"}


class SecaoRun(BaseModel):
    seed: int | None = Field(None, ge=0, lt=2**64)
    samples: int | None = Field(None, gt=0)
    out: str | None = None
    format: Literal["json", "csv"] | None = None

    model_config = _ESTRITO


class SecaoFuncao(BaseModel):
    """family + domain opcional + parâmetros numéricos planos."""

    family: Familia
    domain: str | None = None
    params: dict[str, float] = Field(default_factory=dict)

    model_config = _ESTRITO

    @field_validator("domain")
    @classmethod
    def _normalizar_dominio(cls, valor):
        return None if valor is None else str(Interval.parse(valor))

    @model_validator(mode="after")
    def _validar_funcao(self):
        self.construir()
        return self

    def construir(self) -> ScalarFunction:
        dominio = None if self.domain is None else Interval.parse(self.domain)
        return ScalarFunction(self.family, tuple(self.params.items()), dominio)


class SecaoCertify(BaseModel):
    v: float
    grid: ParInt = (256, 256)
    tolerance: float = Field(1e-10, gt=0)

    model_config = _ESTRITO


class SecaoJcoeff(BaseModel):
    interval: str = "(0.0, 1.0)"
    samples: int = Field(4096, ge=2)

    model_config = _ESTRITO

    @field_validator("interval")
    @classmethod
    def _normalizar(cls, valor):
        return str(Interval.parse(valor))


class _SecaoMatriz(BaseModel):
    matrix: Matriz | None = None
    diagonal: ListaFloat | None = None
    x: ListaFloat | None = None

    model_config = _ESTRITO

    @model_validator(mode="after")
    def _uma_matriz(self):
        if self.matrix is not None and self.diagonal is not None:
            raise ValueError("informe 'matrix' ou 'diagonal', não ambos")
        return self


class SecaoJensen(_SecaoMatriz):
    mode: ModoJensen = ModoJensen.INFIMUM_M
    lam: float | None = None
    coefficient: float | None = None


class SecaoRefine(_SecaoMatriz):
    corollary: Lema
    alpha: float = Field(gt=0)
    v: float
    a: ListaFloat | None = None
    b: ListaFloat | None = None
    q: ListaFloat | None = None
    p: float | None = None
    csv: str | None = None


class SecaoFalsify(BaseModel):
    target: Alvo
    samples: int | None = Field(None, gt=0)
    seed: int | None = Field(None, ge=0, lt=2**64)
    triple: str = "classical"
    inequality: Literal["refined", "classical"] = "refined"
    published_value: bool = False
    max_witnesses: int = Field(100, ge=0)
    max_draw_factor: int = Field(50, ge=1)
    grid: int = Field(256, ge=2)
    rotate: bool = False
    alpha: Par | None = None
    beta: Par | None = None
    v: Par | None = None
    lam: Par | None = None
    a: Par | None = None
    p: Par | None = None
    n: ParInt | None = None
    dim: ParInt | None = None

    model_config = _ESTRITO

    def regiao(self) -> dict:
        campos = ("alpha", "beta", "v", "lam", "a", "p", "n", "dim")
        return {k: getattr(self, k) for k in campos if getattr(self, k) is not None}


class SecaoReplay(BaseModel):
    report: str | None = None
    witness: int = Field(0, ge=0)
    reference: str | None = None
    instance: str | None = None

    model_config = _ESTRITO

    @model_validator(mode="after")
    def _origem(self):
        if (self.report is None) == (self.instance is None):
            raise ValueError("replay exige exatamente um de 'report' ou 'instance'")
        return self


class SecaoSweep(BaseModel):
    kind: Literal["campaigns", "lambda"] = "campaigns"
    targets: ListaAlvos | None = None
    lambdas: GradeLambda = (0.01, 0.99, 99)
    parquet: bool = False

    model_config = _ESTRITO


class RunConfig(BaseModel):
    run: SecaoRun = Field(default_factory=SecaoRun)
    f: SecaoFuncao | None = None
    g: SecaoFuncao | None = None
    h: SecaoFuncao | None = None
    certify: SecaoCertify | None = None
    jcoeff: SecaoJcoeff | None = None
    jensen: SecaoJensen | None = None
    refine: SecaoRefine | None = None
    falsify: SecaoFalsify | None = None
    replay: SecaoReplay | None = None
    sweep: SecaoSweep | None = None

    model_config = _ESTRITO

    def exigir(self, *secoes: str) -> None:
        faltando = [s for s in secoes if getattr(self, s) is None]
        if faltando:
            raise ConfigError(f"seções ausentes na configuração: {', '.join(faltando)}")


SECOES = tuple(RunConfig.model_fields)
SECOES_FUNCAO = ("f", "g", "h")


def parse_run_config(texto: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(texto)
    except configparser.Error as exc:
        raise ConfigError(f"INI mal formado: {exc}") from exc

    dados: dict[str, Any] = {}
    for secao in parser.sections():
        if secao not in SECOES:
            raise ConfigError(f"seção desconhecida: [{secao}]")
        valores = dict(parser[secao])
        if secao in SECOES_FUNCAO:
            base = {k: valores.pop(k) for k in ("family", "domain") if k in valores}
            dados[secao] = {**base, "params": valores}
        else:
            dados[secao] = valores
    try:
        return RunConfig.model_validate(dados)
    except ValidationError as exc:
        raise ConfigError(f"configuração inválida:\n{exc}") from exc


def carregar_run_config(caminho: str) -> RunConfig:
    try:
        with open(caminho, encoding="utf-8") as arquivo:
            texto = arquivo.read()
    except OSError as exc:
        raise ConfigError(f"não foi possível ler {caminho}: {exc}") from exc
    logger.debug("Configuração lida de %s", caminho)
    return parse_run_config(texto)


def _formatar(valor: Any) -> str:
    if isinstance(valor, Enum):
        return str(valor.value)
    if isinstance(valor, bool):
        return "true" if valor else "false"
    if isinstance(valor, float):
        return repr(valor)
    if isinstance(valor, (list, tuple)):
        if valor and isinstance(valor[0], (list, tuple)):
            return "; ".join(_formatar(linha) for linha in valor)
        return ", ".join(_formatar(x) for x in valor)
    return str(valor)


def serializar_config(cfg: RunConfig) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for secao in SECOES:
        modelo = getattr(cfg, secao)
        if modelo is None:
            continue
        valores = modelo.model_dump(exclude_none=True)
        if secao in SECOES_FUNCAO:
            params = valores.pop("params", {})
            valores.update(params)
        parser[secao] = {k: _formatar(v) for k, v in valores.items()}
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()


def config_para_dict(cfg: RunConfig) -> dict:
    return cfg.model_dump(mode="json", exclude_none=True)
