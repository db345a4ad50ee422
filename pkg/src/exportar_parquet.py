"""
Exportação de linhas de campanha/sweep para Parquet particionado por alvo (idempotente).

Usa DuckDB: as linhas entram como DataFrame, são copiadas com
PARTITION_BY (target) e OVERWRITE_OR_IGNORE, e a contagem é conferida
relendo os arquivos escritos.

Uso:
    from src.exportar_parquet import exportar_linhas

    exportar_linhas(linhas, "campanhas")  # → data/parquet/campanhas/target=AmGm/...

Dependências: duckdb, pyarrow
"""

import logging
import os

import duckdb
import pandas as pd

from src.configuracao import get_parquet_dir

logger = logging.getLogger(__name__)


def exportar_linhas(linhas: list[dict], tabela: str, parquet_dir: str | None = None) -> int:
    """Exporta as linhas para `parquet_dir/tabela`, particionadas pela coluna target."""
    destino = os.path.join(parquet_dir or get_parquet_dir(), tabela)
    if not linhas:
        logger.info("  → Nenhuma linha para exportar em '%s'. Pulando.", tabela)
        return 0
    df = pd.DataFrame(linhas)
    if "target" not in df.columns:
        raise ValueError("as linhas precisam da coluna 'target' para particionar")
    os.makedirs(destino, exist_ok=True)
    logger.info("Exportando '%s' (%s linhas) → %s ...", tabela, len(df), destino)

    con = duckdb.connect()
    try:
        con.register("__linhas", df)
        con.execute("CREATE OR REPLACE TABLE __temp_export AS SELECT * FROM __linhas")
        con.execute(f"""
            COPY __temp_export TO '{destino}'
            (FORMAT PARQUET, PARTITION_BY (target), OVERWRITE_OR_IGNORE)
        """)
        con.execute("DROP TABLE IF EXISTS __temp_export")

        # Verificação pós-escrita
        count = con.execute(f"SELECT count(*) FROM read_parquet('{destino}/**/*.parquet')").fetchone()[0]
    finally:
        con.close()
    logger.info("  → %s linhas em Parquet.", count)
    return count
