"""
Emissão de relatórios: JSON (chaves ordenadas, floats de ida e volta exata) e
CSV via pandas, sempre dentro do envelope com ferramenta, versão, configuração,
semente e tolerâncias.

Uso:
    from src.relatorios import envelope, escrever_json, escrever_csv

    texto = escrever_json(envelope("certify", config, seed, cert.para_dict()), "saida.json")
    escrever_csv(linhas, "saida.csv", modelo=LinhaCadeia)
"""

import csv
import io
import json
import logging
import math
import os
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src import __version__
from src.contracts import validar_lote
from src.convexity import TOLERANCIA_VIOLACAO
from src.falsify import LIMIAR_CONFIRMACAO
from src.funclib import EPSILON_TRUNCAMENTO
from src.opcalc import FOLGA_ESPECTRO, MAX_VARREDURAS, TOLERANCIA_JACOBI
from src.precisao import DPS_PADRAO

logger = logging.getLogger(__name__)

FERRAMENTA = "laboratorio_hconvexo"
CAMPOS_TEMPO = {"tempo_s"}

TOLERANCIAS = {
    "violacao": TOLERANCIA_VIOLACAO,
    "confirmacao": LIMIAR_CONFIRMACAO,
    "digitos_estendidos": DPS_PADRAO,
    "folga_espectro": FOLGA_ESPECTRO,
    "epsilon_truncamento": EPSILON_TRUNCAMENTO,
    "jacobi_relativa": TOLERANCIA_JACOBI,
    "jacobi_varreduras": MAX_VARREDURAS,
}


def sanitizar(obj: Any) -> Any:
    """Converte para tipos JSON; floats não finitos viram 'nan', 'inf', '-inf'."""
    if isinstance(obj, dict):
        return {str(k): sanitizar(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitizar(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitizar(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, BaseModel):
        return sanitizar(obj.model_dump(mode="json"))
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def sem_tempo(obj: Any) -> Any:
    """Cópia sem os campos de tempo de parede (comparações de determinismo)."""
    if isinstance(obj, dict):
        return {k: sem_tempo(v) for k, v in obj.items() if k not in CAMPOS_TEMPO}
    if isinstance(obj, list):
        return [sem_tempo(v) for v in obj]
    return obj


def envelope(comando: str, config: dict, seed: int | None, resultado: Any) -> dict:
    return {
        "tool": FERRAMENTA,
        "version": __version__,
        "command": comando,
        "config": config,
        "seed": seed,
        "tolerances": TOLERANCIAS,
        "result": resultado,
    }


def _gravar(texto: str, caminho: str | None) -> None:
    if caminho is None:
        return
    pasta = os.path.dirname(caminho)
    if pasta:
        os.makedirs(pasta, exist_ok=True)
    with open(caminho, "w", encoding="utf-8", newline="") as arquivo:
        arquivo.write(texto)
    logger.info("Relatório gravado em %s", caminho)


def escrever_json(dados: Any, caminho: str | None = None) -> str:
    texto = json.dumps(sanitizar(dados), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    _gravar(texto, caminho)
    return texto


def escrever_csv(
    linhas: list[dict[str, Any]], caminho: str | None = None, modelo: type[BaseModel] | None = None
) -> str:
    """CSV com cabeçalho, vírgula, aspas mínimas e floats em %.17g; linhas fora do schema são descartadas."""
    if modelo is not None:
        erros = validar_lote(modelo, linhas)
        if erros:
            logger.warning("%s linhas rejeitadas por schema (%s)", len(erros), modelo.__name__)
            rejeitadas = {e["indice"] for e in erros}
            linhas = [linha for i, linha in enumerate(linhas) if i not in rejeitadas]
    df = pd.DataFrame(linhas)
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, float_format="%.17g", quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    texto = buffer.getvalue()
    _gravar(texto, caminho)
    return texto
