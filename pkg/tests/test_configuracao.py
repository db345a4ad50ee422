"""Testes da configuração do laboratório (config.ini + LAB_THREADS)."""

import os


class TestGetConfig:
    def test_sem_arquivo_usa_padroes(self, diretorio_isolado):
        from src.configuracao import get_amostras_assets, get_config, get_db_path, get_parquet_dir

        config = get_config()
        assert config["LABORATORIO"]["THREADS"] == "1"
        assert get_db_path() == os.path.join("data", "laboratorio.db")
        assert get_parquet_dir() == os.path.join("data", "parquet")
        assert get_amostras_assets() == 10_000

    def test_arquivo_sobrescreve(self, tmp_path):
        from src.configuracao import get_amostras_assets, get_config, get_db_path

        caminho = tmp_path / "config.ini"
        caminho.write_text("[LABORATORIO]\nDB_PATH = outro.db\nAMOSTRAS_ASSETS = 500\n", encoding="utf-8")
        config = get_config(str(caminho))
        assert get_db_path(config) == "outro.db"
        assert get_amostras_assets(config) == 500
        assert config["LABORATORIO"]["PARQUET_DIR"] == os.path.join("data", "parquet")


class TestGetThreads:
    def test_padrao(self, diretorio_isolado):
        from src.configuracao import get_threads

        assert get_threads() == 1

    def test_variavel_de_ambiente(self, diretorio_isolado, monkeypatch):
        from src.configuracao import get_threads

        monkeypatch.setenv("LAB_THREADS", "4")
        assert get_threads() == 4

    def test_invalido_vira_um(self, diretorio_isolado, monkeypatch):
        from src.configuracao import get_threads

        monkeypatch.setenv("LAB_THREADS", "muitos")
        assert get_threads() == 1
        monkeypatch.setenv("LAB_THREADS", "0")
        assert get_threads() == 1
