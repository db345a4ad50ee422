"""
Assets Dagster das campanhas de aceitação e da exportação para Parquet.

Cada asset executa uma campanha com semente fixa (src/falsify.py), registra o
resumo na tabela campaign_audit e devolve o relatório como dict.
"""

import logging
import os
import sys

from dagster import MetadataValue, Output, asset

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.configuracao import get_amostras_assets
from src.database import inicializar_banco, registrar_campanha
from src.exportar_parquet import exportar_linhas
from src.falsify import Alvo, Campaign, RelatorioCampanha, run_campaign

logger = logging.getLogger(__name__)

SEMENTE_ASSETS = 42
AMOSTRAS_COR21 = 10_000
AMOSTRAS_CLASSICAS = 10_000
ORDEM_CADEIAS = (Alvo.KYFAN, Alvo.AMGM, Alvo.CHRYSTAL, Alvo.HOLDER_MCCARTHY)


def _executar(campanha: Campaign) -> RelatorioCampanha:
    relatorio = run_campaign(campanha)
    try:
        inicializar_banco()
    except Exception:
        logger.warning("Banco de auditoria indisponível; campanha %s não registrada.", campanha.target.value)
    else:
        registrar_campanha(
            campanha.target.value,
            campanha.seed,
            relatorio.samples,
            relatorio.min_margin,
            relatorio.confirmed_witnesses,
            relatorio.outcome,
        )
    return relatorio


def _metadados(relatorio: RelatorioCampanha) -> dict:
    return {
        "target": MetadataValue.text(relatorio.campaign.target.value),
        "seed": MetadataValue.int(relatorio.campaign.seed),
        "samples": MetadataValue.int(relatorio.samples),
        "rejected": MetadataValue.int(relatorio.rejected),
        "min_margin": MetadataValue.float(float(relatorio.min_margin)),
        "confirmed_witnesses": MetadataValue.int(relatorio.confirmed_witnesses),
        "outcome": MetadataValue.text(relatorio.outcome),
    }


def campanha_refinada(alvo: Alvo) -> Campaign:
    return Campaign(target=alvo, samples=get_amostras_assets(), seed=SEMENTE_ASSETS, inequality="refined")


def campanha_classica(alvo: Alvo) -> Campaign:
    return Campaign(target=alvo, samples=AMOSTRAS_CLASSICAS, seed=SEMENTE_ASSETS, inequality="classical")


def campanha_cor21() -> Campaign:
    return Campaign(target=Alvo.COR21, samples=AMOSTRAS_COR21, seed=SEMENTE_ASSETS, published_value=True)


@asset(
    group_name="falsificacao",
    description=(
        "Falsificação da cota com o coeficiente de Jensen (modo InfimumM) sobre o triplo AM-GM; "
        "publica a margem confirmada da instância de referência diag(0.64, 0.8)."
    ),
)
def campanha_thm21() -> Output[dict]:
    relatorio = _executar(
        Campaign(target=Alvo.THM21, samples=get_amostras_assets(), seed=SEMENTE_ASSETS, triple="AmGm")
    )
    referencia = relatorio.reference_instances[0]
    metadados = _metadados(relatorio)
    metadados["reference_margin"] = MetadataValue.text(str(referencia["margin_confirmed"]))
    return Output(relatorio.para_dict(), metadata=metadados)


@asset(
    group_name="falsificacao",
    description="Região do contraexemplo com h(λ) = λ^β, λ ∈ (1/2, 1), usando o valor publicado e^{-a}/2.",
)
def campanha_cor21_contraexemplo() -> Output[dict]:
    relatorio = _executar(campanha_cor21())
    return Output(relatorio.para_dict(), metadata=_metadados(relatorio))


@asset(
    group_name="falsificacao",
    description="Campanhas das quatro cadeias refinadas (Ky Fan, AM-GM, Chrystal, Hölder-McCarthy).",
)
def campanhas_refinadas() -> Output[list[dict]]:
    relatorios = [_executar(campanha_refinada(alvo)) for alvo in ORDEM_CADEIAS]
    confirmadas = sum(r.confirmed_witnesses for r in relatorios)
    logger.info("campanhas_refinadas: %s testemunha(s) confirmada(s).", confirmadas)
    return Output(
        [r.para_dict() for r in relatorios],
        metadata={
            "campaigns": MetadataValue.int(len(relatorios)),
            "confirmed_witnesses": MetadataValue.int(confirmadas),
        },
    )


@asset(
    group_name="falsificacao",
    description="Desigualdades clássicas externas (lhs ≤ rhs) das quatro cadeias; qualquer testemunha é defeito.",
)
def campanhas_classicas() -> Output[list[dict]]:
    relatorios = [_executar(campanha_classica(alvo)) for alvo in ORDEM_CADEIAS]
    confirmadas = sum(r.confirmed_witnesses for r in relatorios)
    return Output(
        [r.para_dict() for r in relatorios],
        metadata={
            "campaigns": MetadataValue.int(len(relatorios)),
            "confirmed_witnesses": MetadataValue.int(confirmadas),
        },
    )


def _linha(relatorio: dict) -> dict:
    return {
        "target": relatorio["target"],
        "seed": relatorio["campaign"]["seed"],
        "samples": relatorio["samples"],
        "drawn": relatorio["drawn"],
        "rejected": relatorio["rejected"],
        "min_margin": relatorio["min_margin"],
        "candidates": relatorio["candidates"],
        "confirmed_witnesses": relatorio["confirmed_witnesses"],
        "outcome": relatorio["outcome"],
    }


@asset(
    group_name="exportacao",
    description="Resumo de todas as campanhas em Parquet particionado por alvo (idempotente).",
)
def exportar_campanhas(
    campanha_thm21: dict,
    campanha_cor21_contraexemplo: dict,
    campanhas_refinadas: list[dict],
    campanhas_classicas: list[dict],
) -> Output[int]:
    relatorios = [campanha_thm21, campanha_cor21_contraexemplo, *campanhas_refinadas, *campanhas_classicas]
    linhas = [_linha(r) for r in relatorios]
    total = exportar_linhas(linhas, "campanhas")
    return Output(
        total,
        metadata={
            "table": MetadataValue.text("campanhas"),
            "row_count": MetadataValue.int(total),
            "targets": MetadataValue.text(", ".join(sorted({r["target"] for r in relatorios}))),
        },
    )

