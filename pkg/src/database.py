"""
Tabela de auditoria das campanhas em SQLite.

Uso:
    from src.database import get_connection, inicializar_banco, registrar_campanha

    inicializar_banco()
    registrar_campanha("AmGm", 42, 100000, -0.0135, 17, "testemunha confirmada")

    with get_connection() as conn:
        conn.execute("SELECT * FROM campaign_audit").fetchall()
"""

import logging
import os
import sqlite3
from contextlib import contextmanager
from datetime import datetime

from src.configuracao import get_db_path

logger = logging.getLogger(__name__)


@contextmanager
def get_connection(caminho: str | None = None):
    """Conexão SQLite; commit automático no final, rollback em exceção.

    Uso:
        with get_connection() as conn:
            conn.execute(...)
    """
    caminho = caminho or get_db_path()
    pasta = os.path.dirname(caminho)
    if pasta:
        os.makedirs(pasta, exist_ok=True)
    conn = sqlite3.connect(caminho)
    try:
        yield conn
        conn.commit()
    except Exception:
        conn.rollback()
        raise
    finally:
        conn.close()


def schema_sql() -> list[str]:
    return [
        """
        CREATE TABLE IF NOT EXISTS campaign_audit (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            target TEXT NOT NULL,
            seed INTEGER NOT NULL,
            samples INTEGER NOT NULL,
            min_margin REAL,
            confirmed_witnesses INTEGER DEFAULT 0,
            status TEXT NOT NULL,
            run_timestamp DATETIME NOT NULL
        )
        """,
        """
        CREATE INDEX IF NOT EXISTS idx_campaign_audit_target
        ON campaign_audit(target, seed)
        """,
    ]


def inicializar_banco(caminho: str | None = None) -> None:
    with get_connection(caminho) as conn:
        for sql in schema_sql():
            conn.execute(sql)
    logger.info("Tabela campaign_audit pronta em %s", caminho or get_db_path())


def registrar_campanha(
    target: str,
    seed: int,
    samples: int,
    min_margin: float,
    confirmed_witnesses: int,
    status: str,
    caminho: str | None = None,
) -> bool:
    """Registra o resumo da campanha em campaign_audit.

    Args:
        target: Alvo da campanha (ex: "AmGm").
        seed: Semente usada.
        samples: Amostras viáveis contadas.
        min_margin: Menor margem observada.
        confirmed_witnesses: Testemunhas confirmadas.
        status: Rótulo do resultado.

    Falhas são registradas em log e não interrompem a execução.
    """
    try:
        with get_connection(caminho) as conn:
            conn.execute(
                "INSERT INTO campaign_audit "
                "(target, seed, samples, min_margin, confirmed_witnesses, status, run_timestamp) "
                "VALUES (?, ?, ?, ?, ?, ?, ?)",
                (target, seed, samples, min_margin, confirmed_witnesses, status, datetime.now().isoformat()),
            )
        logger.debug("Campanha registrada: %s (semente %s, %s amostras)", target, seed, samples)
        return True
    except Exception:
        logger.warning("Falha ao registrar campanha (banco pode não estar inicializado): %s/%s", target, seed)
        return False
