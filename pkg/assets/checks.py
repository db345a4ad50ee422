"""
Asset checks das campanhas.

- As desigualdades clássicas externas não podem ter testemunha confirmada.
- Reexecutar uma campanha com a mesma semente reproduz o relatório (sem o tempo de parede).

Uso:
    Os checks são registrados em assets/__init__.py via Definitions(asset_checks=[...]).
"""

import logging

from dagster import AssetCheckResult, AssetCheckSeverity, asset_check

from src.falsify import run_campaign
from src.relatorios import escrever_json, sem_tempo

from .campanhas import campanha_cor21

logger = logging.getLogger(__name__)


@asset_check(
    asset="campanhas_classicas",
    description="Nenhuma testemunha confirmada nas desigualdades clássicas lhs ≤ rhs das quatro cadeias.",
)
def check_classicas_sem_testemunhas(campanhas_classicas: list[dict]) -> AssetCheckResult:
    por_alvo = {r["target"]: r["confirmed_witnesses"] for r in campanhas_classicas}
    total = sum(por_alvo.values())
    if total:
        logger.warning("CHECK FAIL: testemunhas confirmadas em desigualdade clássica: %s", por_alvo)
        return AssetCheckResult(
            passed=False,
            severity=AssetCheckSeverity.ERROR,
            description=f"{total} testemunha(s) confirmada(s) em desigualdade clássica (defeito de implementação)",
            metadata={"confirmed_by_target": str(por_alvo)},
        )
    logger.info("CHECK OK: nenhuma testemunha nas desigualdades clássicas (%s)", ", ".join(por_alvo))
    return AssetCheckResult(
        passed=True,
        description=f"Nenhuma testemunha em {len(por_alvo)} campanhas clássicas.",
        metadata={"campaigns": len(por_alvo)},
    )


@asset_check(
    asset="campanha_cor21_contraexemplo",
    description="Reexecuta a campanha com a mesma semente e compara os relatórios byte a byte (sem tempo de parede).",
)
def check_determinismo_cor21(campanha_cor21_contraexemplo: dict) -> AssetCheckResult:
    original = escrever_json(sem_tempo(campanha_cor21_contraexemplo))
    repetido = escrever_json(sem_tempo(run_campaign(campanha_cor21()).para_dict()))
    if original != repetido:
        logger.warning("CHECK FAIL: campanha Cor21 não reproduziu o relatório com a mesma semente")
        return AssetCheckResult(
            passed=False,
            severity=AssetCheckSeverity.WARN,
            description="Relatório da reexecução difere do original.",
            metadata={"bytes_original": len(original), "bytes_repetido": len(repetido)},
        )
    return AssetCheckResult(
        passed=True,
        description="Reexecução com a mesma semente reproduziu o relatório.",
        metadata={"bytes": len(original)},
    )
