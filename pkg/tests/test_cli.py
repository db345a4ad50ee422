"""Testes da CLI: códigos de saída, relatórios e precedência das flags."""

import json
import sqlite3

import pytest

INI_CERTIFY_PONTUAL = """
[f]
family = CubicTarget
domain = [0, 3]

[g]
family = PiecewiseGate

[h]
family = IdentityWeight

[certify]
v = 2
grid = 64, 64
"""

INI_CERTIFY_INTEIRO = """
[f]
family = CubicTarget
domain = [0, 2]

[g]
family = ConstantGate
c = 0

[h]
family = IdentityWeight

[certify]
v = 2
grid = 64, 64
"""

INI_JENSEN = """
[f]
family = NegLogTarget

[h]
family = ExpWeight
alpha = 2
beta = 2.16

[jensen]
diagonal = 0.64, 0.8
x = 1, 1
"""

INI_COR21 = """
[run]
seed = 7
samples = 30

[falsify]
target = Cor21Counterexample
published_value = true
max_witnesses = 3
"""


def _json_saida(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestCertify:
    def test_porta_pontual_certifica(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_OK, main

        assert main(["certify", "--config", escrever_ini(INI_CERTIFY_PONTUAL)]) == EXIT_OK
        dados = _json_saida(capsys)
        assert dados["command"] == "certify"
        assert dados["tool"] == "laboratorio_hconvexo"
        assert dados["result"]["verdict"] == "Certified"
        assert dados["result"]["gate"]["interval"] == "[1.0, 2.0]"
        assert dados["config"]["certify"]["grid"] == [64, 64]

    def test_intervalo_inteiro_viola(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        assert main(["certify", "--config", escrever_ini(INI_CERTIFY_INTEIRO)]) == EXIT_VIOLACAO
        resultado = _json_saida(capsys)["result"]
        assert resultado["verdict"] == "Violated"
        assert resultado["min_value"] < -0.38
        assert resultado["confirmed_value"] < 0.0

    def test_porta_inviavel_e_erro(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_ERRO, main

        ini = INI_CERTIFY_PONTUAL.replace("v = 2", "v = 1.5")
        assert main(["certify", "--config", escrever_ini(ini)]) == EXIT_ERRO
        assert "erro:" in capsys.readouterr().err

    def test_secao_ausente(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_ERRO, main

        assert main(["certify", "--config", escrever_ini("[h]\nfamily = IdentityWeight\n")]) == EXIT_ERRO
        assert "certify" in capsys.readouterr().err

    def test_arquivo_inexistente(self, diretorio_isolado):
        from src.cli import EXIT_ERRO, main

        assert main(["certify", "--config", "nao_existe.ini"]) == EXIT_ERRO


class TestUso:
    def test_subcomando_desconhecido(self):
        from src.cli import EXIT_ERRO, main

        with pytest.raises(SystemExit) as exc:
            main(["plot", "--config", "x.ini"])
        assert exc.value.code == EXIT_ERRO

    def test_config_obrigatorio(self):
        from src.cli import EXIT_ERRO, main

        with pytest.raises(SystemExit) as exc:
            main(["certify"])
        assert exc.value.code == EXIT_ERRO


class TestJcoeffJensen:
    def test_jcoeff(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_OK, main

        ini = "[h]\nfamily = ExpWeight\nalpha = 2\nbeta = 2.16\n"
        assert main(["jcoeff", "--config", escrever_ini(ini)]) == EXIT_OK
        resultado = _json_saida(capsys)["result"]
        assert resultado["value"] == pytest.approx(2.0 / 2.16)
        assert resultado["boundary_limit"] is True
        assert resultado["interval"] == "(0.0, 1.0)"

    def test_jensen_infimo_negativo(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        assert main(["jensen", "--config", escrever_ini(INI_JENSEN)]) == EXIT_VIOLACAO
        assert _json_saida(capsys)["result"]["margin"] == pytest.approx(-0.01858, abs=1e-4)

    def test_jensen_classico(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_OK, main

        ini = INI_JENSEN + "mode = Classical\n"
        assert main(["jensen", "--config", escrever_ini(ini)]) == EXIT_OK
        assert _json_saida(capsys)["result"]["mode"] == "Classical"

    def test_jensen_sem_vetor(self, diretorio_isolado, escrever_ini):
        from src.cli import EXIT_ERRO, main

        ini = INI_JENSEN.replace("x = 1, 1\n", "")
        assert main(["jensen", "--config", escrever_ini(ini)]) == EXIT_ERRO


class TestRefine:
    def test_amgm_csv(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        ini = "[refine]\ncorollary = AmGm\nalpha = 2\nv = 0.8\na = 0.64, 0.8\nq = 0.5, 0.5\n"
        assert main(["refine", "--config", escrever_ini(ini), "--format", "csv"]) == EXIT_VIOLACAO
        linhas = capsys.readouterr().out.strip().splitlines()
        assert linhas[0] == "corollary,n,alpha,gamma,beta,lhs,mid,rhs,margin1,margin2,feasible"
        assert linhas[1].startswith("AmGm,2,2,")
        assert linhas[1].endswith(",True")

    def test_inviavel_nao_e_violacao(self, diretorio_isolado, escrever_ini):
        from src.cli import EXIT_OK, main

        ini = "[refine]\ncorollary = AmGm\nalpha = 2\nv = 0.8\na = 0.1, 0.8\n"
        assert main(["refine", "--config", escrever_ini(ini)]) == EXIT_OK

    def test_holder_mccarthy(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import main

        ini = "[refine]\ncorollary = HolderMcCarthy\nalpha = 1\nv = 0.8\np = 2\ndiagonal = 0.64, 0.8\nx = 1, 1\n"
        assert main(["refine", "--config", escrever_ini(ini)]) in (0, 2)
        resultado = _json_saida(capsys)["result"]
        assert resultado["corollary"] == "HolderMcCarthy"
        assert resultado["lhs"] == pytest.approx(0.72**2)

    def test_holder_mccarthy_sem_p(self, diretorio_isolado, escrever_ini):
        from src.cli import EXIT_ERRO, main

        ini = "[refine]\ncorollary = HolderMcCarthy\nalpha = 1\nv = 0.8\ndiagonal = 0.64, 0.8\nx = 1, 1\n"
        assert main(["refine", "--config", escrever_ini(ini)]) == EXIT_ERRO


class TestFalsifyReplay:
    def test_cor21_relatorio_e_auditoria(self, diretorio_isolado, escrever_ini):
        from src.cli import EXIT_VIOLACAO, main

        saida = diretorio_isolado / "relatorios" / "cor21.json"
        codigo = main(["falsify", "--config", escrever_ini(INI_COR21), "--out", str(saida), "--audit"])
        assert codigo == EXIT_VIOLACAO
        dados = json.loads(saida.read_text(encoding="utf-8"))
        assert dados["seed"] == 7
        assert dados["result"]["samples"] == 30
        assert dados["result"]["confirmed_witnesses"] > 0
        assert len(dados["result"]["witnesses"]) == 3
        assert dados["tolerances"]["digitos_estendidos"] == 60

        conn = sqlite3.connect(diretorio_isolado / "data" / "laboratorio.db")
        try:
            linhas = conn.execute("SELECT target, seed, samples FROM campaign_audit").fetchall()
        finally:
            conn.close()
        assert linhas == [("Cor21Counterexample", 7, 30)]

    def test_flag_sobrescreve_semente(self, diretorio_isolado, escrever_ini):
        from src.cli import main

        saida = diretorio_isolado / "cor21.json"
        main(["falsify", "--config", escrever_ini(INI_COR21), "--out", str(saida), "--seed", "11", "--samples", "10"])
        dados = json.loads(saida.read_text(encoding="utf-8"))
        assert dados["seed"] == 11
        assert dados["result"]["campaign"]["seed"] == 11
        assert dados["result"]["samples"] == 10

    def test_mesma_semente_mesmo_relatorio(self, diretorio_isolado, escrever_ini):
        from src.cli import main
        from src.relatorios import sem_tempo

        ini = escrever_ini(INI_COR21)
        a, b = diretorio_isolado / "a.json", diretorio_isolado / "b.json"
        main(["falsify", "--config", ini, "--out", str(a)])
        main(["falsify", "--config", ini, "--out", str(b)])
        dados_a = json.loads(a.read_text(encoding="utf-8"))
        dados_b = json.loads(b.read_text(encoding="utf-8"))
        assert sem_tempo(dados_a) == sem_tempo(dados_b)

    def test_flag_threads_nao_muda_relatorio(self, diretorio_isolado, escrever_ini):
        """--threads só reparte o trabalho: o relatório é o mesmo com 1 ou 2 processos."""
        from src.cli import criar_parser, main
        from src.relatorios import sem_tempo

        assert criar_parser().parse_args(["falsify", "--config", "x.ini", "--threads", "2"]).threads == 2
        ini = escrever_ini(INI_COR21)
        a, b = diretorio_isolado / "um.json", diretorio_isolado / "dois.json"
        main(["falsify", "--config", ini, "--out", str(a), "--threads", "1"])
        main(["falsify", "--config", ini, "--out", str(b), "--threads", "2"])
        dados_a = json.loads(a.read_text(encoding="utf-8"))
        dados_b = json.loads(b.read_text(encoding="utf-8"))
        assert sem_tempo(dados_a) == sem_tempo(dados_b)

    def test_testemunhas_em_csv(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import main

        main(["falsify", "--config", escrever_ini(INI_COR21), "--format", "csv"])
        linhas = capsys.readouterr().out.strip().splitlines()
        assert linhas[0].split(",")[:3] == ["target", "index", "margin_double"]
        assert len(linhas) == 4

    def test_replay_bit_a_bit(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        relatorio = diretorio_isolado / "cor21.json"
        main(["falsify", "--config", escrever_ini(INI_COR21), "--out", str(relatorio)])
        original = json.loads(relatorio.read_text(encoding="utf-8"))["result"]["witnesses"][1]
        capsys.readouterr()

        ini = f"[replay]\nreport = {relatorio}\nwitness = 1\n"
        assert main(["replay", "--config", escrever_ini(ini, "replay.ini")]) == EXIT_VIOLACAO
        resultado = _json_saida(capsys)["result"]
        assert resultado["margin_double"] == original["margin_double"]
        assert resultado["margin_confirmed"] == original["margin_confirmed"]
        assert resultado["margin_double_hex"] == float(original["margin_double"]).hex()

    def test_replay_referencia(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        relatorio = diretorio_isolado / "cor21.json"
        main(["falsify", "--config", escrever_ini(INI_COR21), "--out", str(relatorio)])
        capsys.readouterr()
        ini = f"[replay]\nreport = {relatorio}\nreference = cor21_a1_beta0.5_lam0.75\n"
        assert main(["replay", "--config", escrever_ini(ini, "replay.ini")]) == EXIT_VIOLACAO
        assert _json_saida(capsys)["result"]["status"] == "CONFIRMADA"

    def test_replay_testemunha_inexistente(self, diretorio_isolado, escrever_ini):
        from src.cli import EXIT_ERRO, main

        relatorio = diretorio_isolado / "cor21.json"
        main(["falsify", "--config", escrever_ini(INI_COR21), "--out", str(relatorio)])
        ini = f"[replay]\nreport = {relatorio}\nwitness = 50\n"
        assert main(["replay", "--config", escrever_ini(ini, "replay.ini")]) == EXIT_ERRO

    def test_replay_instancia_sem_violacao(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_OK, main

        instancia = diretorio_isolado / "instancia.json"
        instancia.write_text(
            json.dumps({"target": "Cor21Counterexample", "kind": "cor21", "a": 1.0, "beta": 0.5, "lam": 0.75,
                        "published_value": False}),
            encoding="utf-8",
        )
        ini = f"[replay]\ninstance = {instancia}\n"
        assert main(["replay", "--config", escrever_ini(ini)]) == EXIT_OK
        assert _json_saida(capsys)["result"]["status"] == "SEM_VIOLACAO"


class TestSweep:
    def test_perfil_lambda(self, diretorio_isolado, escrever_ini, capsys):
        from src.cli import EXIT_VIOLACAO, main

        ini = INI_JENSEN + "\n[sweep]\nkind = lambda\nlambdas = 0.1, 0.99, 10\n"
        assert main(["sweep", "--config", escrever_ini(ini), "--format", "csv"]) == EXIT_VIOLACAO
        linhas = capsys.readouterr().out.strip().splitlines()
        assert linhas[0] == "lam,margin"
        assert len(linhas) == 11

    def test_campanhas_classicas_com_parquet(self, diretorio_isolado, escrever_ini, capsys):
        import duckdb

        from src.cli import EXIT_OK, main

        ini = (
            "[run]\nseed = 3\nsamples = 40\n\n[falsify]\ntarget = AmGm\ninequality = classical\n\n"
            "[sweep]\nkind = campaigns\ntargets = KyFan, AmGm\nparquet = true\n"
        )
        assert main(["sweep", "--config", escrever_ini(ini)]) == EXIT_OK
        resultado = _json_saida(capsys)["result"]
        assert [c["target"] for c in resultado["campaigns"]] == ["KyFan", "AmGm"]
        assert resultado["parquet_rows"] == 2

        destino = diretorio_isolado / "data" / "parquet" / "campanhas"
        alvos = duckdb.sql(f"SELECT target FROM read_parquet('{destino}/**/*.parquet', hive_partitioning=true)")
        assert sorted(r[0] for r in alvos.fetchall()) == ["AmGm", "KyFan"]
