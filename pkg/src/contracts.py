"""
Contratos formais das linhas emitidas em CSV/Parquet.

Define o schema de cada tipo de linha como Pydantic model, validado com
`validar_lote` antes de qualquer emissão.

Uso:
    from src.contracts import LinhaCadeia, validar_lote

    erros = validar_lote(LinhaCadeia, linhas)
    if erros:
        logger.warning("%s linhas rejeitadas por schema", len(erros))
"""

from typing import Any

from pydantic import BaseModel, Field

COROLARIOS = r"^(KyFan|AmGm|Chrystal|HolderMcCarthy)$"
ALVOS = r"^(Thm21|PerLambda|HalfBound|Cor21Counterexample|KyFan|AmGm|Chrystal|HolderMcCarthy|LemmaCertificates)$"


class LinhaCadeia(BaseModel):
    """Uma amostra avaliada por uma cadeia refinada."""

    corollary: str = Field(pattern=COROLARIOS)
    n: int = Field(ge=1, le=10_000)
    alpha: float = Field(gt=0)
    gamma: float = Field(ge=0)
    beta: float = Field(gt=0)
    lhs: float
    mid: float
    rhs: float
    margin1: float
    margin2: float
    feasible: bool

    model_config = {"extra": "forbid"}


class LinhaTestemunha(BaseModel):
    """Candidata a testemunha de uma campanha, com a reavaliação estendida."""

    target: str = Field(pattern=ALVOS)
    index: int | None = Field(None, ge=0)
    margin_double: float
    margin_confirmed: str | None = None
    confirmed: bool
    feasible: bool
    status: str = Field(pattern=r"^(PENDENTE|CONFIRMADA|RUIDO_NUMERICO|ABAIXO_LIMIAR|INVIAVEL|SEM_VIOLACAO)$")
    inputs: str = Field(description="Instância serializada em JSON (replay)")

    model_config = {"extra": "forbid"}


class LinhaCampanha(BaseModel):
    """Resumo de uma campanha (uma linha por campanha em `sweep`)."""

    target: str = Field(pattern=ALVOS)
    seed: int = Field(ge=0)
    samples: int = Field(ge=0)
    drawn: int = Field(ge=0)
    rejected: int = Field(ge=0)
    min_margin: float
    candidates: int = Field(ge=0)
    confirmed_witnesses: int = Field(ge=0)
    outcome: str

    model_config = {"extra": "forbid"}


class LinhaPerfil(BaseModel):
    """Um ponto do perfil da margem por λ."""

    lam: float = Field(gt=0, lt=1)
    margin: float

    model_config = {"extra": "forbid"}


# ─── Utilitários ───


def validar_lote(model_class: type[BaseModel], registros: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """Valida uma lista de dicts contra um Pydantic model.

    Args:
        model_class: Classe Pydantic (ex: LinhaCadeia).
        registros: Lista de dicionários com os campos esperados.

    Returns:
        Lista de registros que falharam validação (vazia se todos OK).
    """
    erros: list[dict[str, Any]] = []
    for i, rec in enumerate(registros):
        try:
            model_class(**rec)  # type: ignore[call-overload]
        except Exception as exc:
            erros.append({"indice": i, "registro": rec, "erro": str(exc)})
    return erros
