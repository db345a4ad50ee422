"""Testes dos contratos das linhas emitidas (Pydantic models)."""

import pytest
from pydantic import ValidationError


def _linha_cadeia(**kwargs):
    linha = {
        "corollary": "AmGm",
        "n": 2,
        "alpha": 2.0,
        "gamma": 0.16,
        "beta": 2.16,
        "lhs": 0.7155417527999327,
        "mid": 0.7335,
        "rhs": 0.72,
        "margin1": 0.018,
        "margin2": -0.0135,
        "feasible": True,
    }
    linha.update(kwargs)
    return linha


class TestLinhaCadeia:
    def test_valido(self):
        from src.contracts import LinhaCadeia

        rec = LinhaCadeia(**_linha_cadeia())
        assert rec.corollary == "AmGm"
        assert rec.margin2 < 0

    def test_corolario_desconhecido(self):
        from src.contracts import LinhaCadeia

        with pytest.raises(ValidationError):
            LinhaCadeia(**_linha_cadeia(corollary="Jensen"))

    def test_gamma_negativo(self):
        from src.contracts import LinhaCadeia

        with pytest.raises(ValidationError):
            LinhaCadeia(**_linha_cadeia(gamma=-0.1))

    def test_campo_extra(self):
        from src.contracts import LinhaCadeia

        with pytest.raises(ValidationError):
            LinhaCadeia(**_linha_cadeia(v=0.8))


class TestLinhaTestemunha:
    def test_valido(self):
        from src.contracts import LinhaTestemunha

        rec = LinhaTestemunha(
            target="Cor21Counterexample",
            index=3,
            margin_double=-0.1,
            margin_confirmed="-0.1000",
            confirmed=True,
            feasible=True,
            status="CONFIRMADA",
            inputs='{"a": 1.0}',
        )
        assert rec.confirmed

    def test_status_invalido(self):
        from src.contracts import LinhaTestemunha

        with pytest.raises(ValidationError):
            LinhaTestemunha(
                target="AmGm",
                margin_double=-0.1,
                confirmed=False,
                feasible=True,
                status="TALVEZ",
                inputs="{}",
            )


class TestLinhaCampanha:
    def test_valido(self):
        from src.contracts import LinhaCampanha

        rec = LinhaCampanha(
            target="KyFan",
            seed=42,
            samples=100,
            drawn=120,
            rejected=20,
            min_margin=0.001,
            candidates=0,
            confirmed_witnesses=0,
            outcome="nenhuma violação encontrada em 100 amostras",
        )
        assert rec.drawn == 120

    def test_semente_negativa(self):
        from src.contracts import LinhaCampanha

        with pytest.raises(ValidationError):
            LinhaCampanha(
                target="KyFan",
                seed=-1,
                samples=1,
                drawn=1,
                rejected=0,
                min_margin=0.0,
                candidates=0,
                confirmed_witnesses=0,
                outcome="x",
            )


class TestLinhaPerfil:
    def test_lambda_fora_do_aberto(self):
        from src.contracts import LinhaPerfil

        assert LinhaPerfil(lam=0.5, margin=0.01).lam == 0.5
        with pytest.raises(ValidationError):
            LinhaPerfil(lam=1.0, margin=0.01)


class TestValidarLote:
    def test_lote_valido(self):
        from src.contracts import LinhaCadeia, validar_lote

        assert validar_lote(LinhaCadeia, [_linha_cadeia(), _linha_cadeia(corollary="KyFan")]) == []

    def test_lote_com_erros(self):
        from src.contracts import LinhaCadeia, validar_lote

        registros = [_linha_cadeia(), _linha_cadeia(n=0), _linha_cadeia(), _linha_cadeia(alpha=-1.0)]
        erros = validar_lote(LinhaCadeia, registros)
        assert [e["indice"] for e in erros] == [1, 3]
        assert erros[0]["registro"]["n"] == 0
