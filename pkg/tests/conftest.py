"""Fixtures compartilhadas para os testes."""

import os
import tempfile

import pytest


@pytest.fixture
def temp_db_path():
    """Caminho para banco SQLite temporário."""
    fd, path = tempfile.mkstemp(suffix=".db")
    os.close(fd)
    yield path
    if os.path.exists(path):
        os.unlink(path)


@pytest.fixture
def diretorio_isolado(tmp_path, monkeypatch):
    """Executa o teste em um diretório vazio: sem config.ini, banco e Parquet sob tmp_path/data."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LAB_THREADS", raising=False)
    return tmp_path


@pytest.fixture
def escrever_ini(tmp_path):
    """Grava um RunConfig em tmp_path e devolve o caminho."""

    def _escrever(texto: str, nome: str = "run.ini") -> str:
        caminho = tmp_path / nome
        caminho.write_text(texto, encoding="utf-8")
        return str(caminho)

    return _escrever


@pytest.fixture
def neglog():
    from src.funclib import Familia, criar_funcao

    return criar_funcao(Familia.NEGLOG_TARGET)


@pytest.fixture
def peso_exp():
    """h(t) = (2/2.16)·e^{t(1-t)}."""
    from src.funclib import Familia, criar_funcao

    return criar_funcao(Familia.EXP_WEIGHT, alpha=2.0, beta=2.16)


@pytest.fixture
def identidade():
    from src.funclib import Familia, criar_funcao

    return criar_funcao(Familia.IDENTITY_WEIGHT)


@pytest.fixture
def matriz_amgm():
    """A = diag(0.64, 0.8) e x = (1, 1)/√2."""
    from src.opcalc import SymmetricMatrix, UnitVector

    return SymmetricMatrix.diagonal([0.64, 0.8]), UnitVector([1.0, 1.0])
