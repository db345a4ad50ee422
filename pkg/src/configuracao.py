"""
Configuração do laboratório (config/config.ini, seção [LABORATORIO]).

Uso:
    from src.configuracao import get_config, get_threads

    config = get_config()
    config["LABORATORIO"]["DB_PATH"]
    get_threads()  # LAB_THREADS no ambiente tem precedência sobre THREADS
"""

import configparser
import logging
import os

logger = logging.getLogger(__name__)

CONFIG_FILE = os.path.join("config", "config.ini")
SECAO = "LABORATORIO"

PADROES = {
    "THREADS": "1",
    "DB_PATH": os.path.join("data", "laboratorio.db"),
    "PARQUET_DIR": os.path.join("data", "parquet"),
    "AMOSTRAS_ASSETS": "10000",
}


def get_config(caminho: str | None = None) -> configparser.ConfigParser:
    """Lê o config.ini; sem arquivo, devolve os padrões embutidos (com aviso)."""
    caminho = caminho or CONFIG_FILE
    config = configparser.ConfigParser()
    config.read_dict({SECAO: PADROES})
    if not os.path.exists(caminho):
        logger.warning("Arquivo de configuração não encontrado em %s; usando padrões", caminho)
        return config
    config.read(caminho, encoding="utf-8")
    return config


def get_threads(config: configparser.ConfigParser | None = None) -> int:
    bruto = os.environ.get("LAB_THREADS")
    if bruto is None:
        bruto = (config or get_config())[SECAO]["THREADS"]
    try:
        threads = int(bruto)
    except ValueError:
        logger.warning("Número de processos inválido (%r); usando 1", bruto)
        return 1
    return max(threads, 1)


def get_db_path(config: configparser.ConfigParser | None = None) -> str:
    return (config or get_config())[SECAO]["DB_PATH"]


def get_parquet_dir(config: configparser.ConfigParser | None = None) -> str:
    return (config or get_config())[SECAO]["PARQUET_DIR"]


def get_amostras_assets(config: configparser.ConfigParser | None = None) -> int:
    return int((config or get_config())[SECAO]["AMOSTRAS_ASSETS"])
