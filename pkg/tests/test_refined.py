"""Testes das cadeias refinadas (Ky Fan, AM-GM, Chrystal, Hölder-McCarthy)."""

import math

import pytest


def _amostra(a, q=None, b=None):
    from src.refined import WeightedSample

    q = q if q is not None else [1.0 / len(a)] * len(a)
    return WeightedSample(a=tuple(a), q=tuple(q), b=None if b is None else tuple(b))


class TestWeightedSample:
    def test_pesos_nao_somam_um(self):
        from src.erros import DomainError

        with pytest.raises(DomainError):
            _amostra([0.5, 0.6], [0.5, 0.6])

    def test_peso_fora_de_01(self):
        from src.erros import DomainError

        with pytest.raises(DomainError):
            _amostra([0.5, 0.6, 0.7], [1.2, -0.1, -0.1])

    def test_comprimentos_diferentes(self):
        from src.erros import DomainError

        with pytest.raises(DomainError):
            _amostra([0.5, 0.6], [1.0])

    def test_unitaria(self):
        from src.erros import DomainError

        assert _amostra([0.3], [1.0]).n == 1
        with pytest.raises(DomainError):
            _amostra([0.3], [0.5])

    def test_vazia(self):
        from src.erros import DomainError

        with pytest.raises(DomainError):
            _amostra([], [])

    def test_csv(self, tmp_path):
        from src.refined import load_sample_csv

        caminho = tmp_path / "amostra.csv"
        caminho.write_text("a,q\n0.64,0.5\n0.8,0.5\n", encoding="utf-8")
        amostra = load_sample_csv(str(caminho))
        assert amostra.a == (0.64, 0.8)
        assert amostra.b is None

    def test_csv_sem_coluna(self, tmp_path):
        from src.erros import DomainError
        from src.refined import load_sample_csv

        caminho = tmp_path / "amostra.csv"
        caminho.write_text("a\n0.64\n", encoding="utf-8")
        with pytest.raises(DomainError):
            load_sample_csv(str(caminho))


class TestGamma:
    def test_espalhamento(self):
        from src.refined import gamma

        assert gamma(_amostra([0.2, 0.5, 0.3]), "AmGm") == pytest.approx(0.3)

    def test_chrystal_inclui_pares_cruzados(self):
        from src.refined import gamma

        amostra = _amostra([1.0, 1.2], b=[3.0, 3.1])
        assert gamma(amostra, "Chrystal") == pytest.approx(2.1)

    def test_chrystal_sem_b(self):
        from src.erros import DomainError
        from src.refined import gamma

        with pytest.raises(DomainError):
            gamma(_amostra([1.0, 2.0]), "Chrystal")


class TestAmGm:
    def test_instancia_de_referencia(self):
        """Hipóteses satisfeitas e mesmo assim a desigualdade da direita falha."""
        from src.refined import amgm_chain

        r = amgm_chain(_amostra([0.64, 0.8], [0.5, 0.5]), 2.0, 0.8)
        assert r.gamma == pytest.approx(0.16)
        assert r.beta == pytest.approx(2.16)
        assert r.lhs == pytest.approx(math.sqrt(0.512), rel=1e-14)
        assert r.mid == pytest.approx(0.733505, abs=1e-6)
        assert r.rhs == pytest.approx(0.72, rel=1e-15)
        assert r.feasible
        assert r.margin1 > 0.0
        assert r.margin2 < 0.0
        assert r.margem_classica > 0.0

    def test_igualdade_quando_gamma_zero(self):
        from src.refined import amgm_chain

        r = amgm_chain(_amostra([0.5, 0.5, 0.5]), 2.0, 0.5)
        assert r.gamma == 0.0
        assert r.lhs == pytest.approx(r.mid, abs=1e-12)
        assert r.mid == pytest.approx(r.rhs, abs=1e-12)

    def test_intervalo_inviavel(self):
        from src.refined import amgm_chain

        r = amgm_chain(_amostra([0.1, 0.8]), 2.0, 0.8)
        assert not r.feasible
        assert not r.viabilidade.flags["intervalo"]
        assert r.viabilidade.flags["dominio"]

    def test_valor_nao_positivo(self):
        from src.erros import DomainError
        from src.refined import amgm_chain

        with pytest.raises(DomainError):
            amgm_chain(_amostra([0.0, 0.5]), 2.0, 0.5)

    def test_linha_e_dict(self):
        from src.contracts import LinhaCadeia, validar_lote
        from src.refined import CONVENCAO_COEFICIENTE, amgm_chain

        r = amgm_chain(_amostra([0.64, 0.8]), 2.0, 0.8)
        assert validar_lote(LinhaCadeia, [r.para_linha()]) == []
        dados = r.para_dict()
        assert dados["coefficient_convention"] == CONVENCAO_COEFICIENTE
        assert dados["feasibility"]["feasible"] is True


class TestKyFan:
    def test_igualdade_quando_gamma_zero(self):
        from src.refined import kyfan_chain

        r = kyfan_chain(_amostra([0.3, 0.3]), 2.0, 0.3)
        assert r.lhs == pytest.approx(0.7 / 0.3, abs=1e-12)
        assert r.mid == pytest.approx(r.rhs, abs=1e-12)
        assert r.rhs == pytest.approx(0.7 / 0.3, abs=1e-12)

    def test_classica_vale(self):
        from src.refined import kyfan_chain

        r = kyfan_chain(_amostra([0.45, 0.5]), 2.0, 0.5)
        assert r.rhs >= r.lhs

    def test_fora_de_meio(self):
        from src.erros import DomainError
        from src.refined import kyfan_chain

        with pytest.raises(DomainError):
            kyfan_chain(_amostra([0.3, 0.6]), 2.0, 0.5)

    def test_v_acima_de_meio(self):
        from src.refined import kyfan_chain

        r = kyfan_chain(_amostra([0.45, 0.5]), 2.0, 0.7)
        assert not r.viabilidade.flags["v_admissivel"]


class TestChrystal:
    def test_igualdade_quando_gamma_zero(self):
        from src.refined import chrystal_chain

        r = chrystal_chain(_amostra([2.0, 2.0], b=[2.0, 2.0]), 1.0, 2.0)
        assert r.lhs == pytest.approx(4.0, abs=1e-12)
        assert r.mid == pytest.approx(4.0, abs=1e-12)
        assert r.rhs == pytest.approx(4.0, abs=1e-12)

    def test_referencia_classica(self):
        from src.refined import chrystal_chain

        r = chrystal_chain(_amostra([1.0, 1.0], b=[3.0, 3.0]), 10.0, 3.0)
        assert r.gamma == pytest.approx(2.0)
        assert r.rhs >= r.lhs
        assert r.viabilidade.flags["parametros"]

    def test_forma_escalar_coincide_no_extremo(self):
        from src.refined import chrystal_chain, chrystal_scalar_form

        amostra = _amostra([1.0, 2.0], b=[1.5, 2.5])
        cadeia = chrystal_chain(amostra, 2.0, 3.0)
        lhs, _mid, rhs = chrystal_scalar_form(amostra, 2.0)
        assert rhs == pytest.approx(cadeia.rhs, rel=1e-12)
        assert lhs <= rhs

    def test_sem_b(self):
        from src.erros import DomainError
        from src.refined import chrystal_chain

        with pytest.raises(DomainError):
            chrystal_chain(_amostra([1.0, 2.0]), 1.0, 2.0)

    def test_intervalo_log_razao_informativo(self):
        from src.refined import chrystal_chain

        r = chrystal_chain(_amostra([1.0, 1.0], b=[3.0, 3.0]), 10.0, 3.0)
        assert "intervalo_log_razao" in r.viabilidade.informativas
        assert "intervalo_log_razao" not in r.viabilidade.flags


class TestHolderMcCarthy:
    def test_diagonal(self, matriz_amgm):
        from src.refined import hm_chain

        A, x = matriz_amgm
        r = hm_chain(A, x, 2.0, 2.0, 0.8)
        assert r.lhs == pytest.approx(0.72**2, rel=1e-14)
        assert r.rhs == pytest.approx((0.64**2 + 0.8**2) / 2.0, rel=1e-14)
        assert r.mid == pytest.approx(2.0 / 2.16 * r.rhs, rel=1e-12)
        assert r.gamma == pytest.approx(0.16)

    def test_igualdade_com_multiplo_da_identidade(self):
        from src.opcalc import SymmetricMatrix, UnitVector
        from src.refined import hm_chain

        r = hm_chain(SymmetricMatrix.diagonal([0.7, 0.7]), UnitVector([1.0, 2.0]), 3.0, 1.0, 0.7)
        assert r.lhs == pytest.approx(r.rhs, abs=1e-12)
        assert r.mid == pytest.approx(r.rhs, abs=1e-12)

    def test_p_invalido(self, matriz_amgm):
        from src.erros import DomainError
        from src.refined import hm_chain

        A, x = matriz_amgm
        with pytest.raises(DomainError):
            hm_chain(A, x, 1.0, 2.0, 0.8)

    def test_espectro_nao_positivo(self):
        from src.erros import SpectrumDomainError
        from src.opcalc import SymmetricMatrix, UnitVector
        from src.refined import hm_chain

        with pytest.raises(SpectrumDomainError):
            hm_chain(SymmetricMatrix.diagonal([0.0, 1.0]), UnitVector([1.0, 1.0]), 2.0, 1.0, 1.0)


class TestFeasible:
    def test_amgm(self):
        from src.refined import feasible

        viab = feasible(_amostra([0.64, 0.8]), 2.0, 0.8, "AmGm")
        assert viab.feasible
        assert viab.gate_value == pytest.approx(0.64)

    def test_parametros_fora_do_lema(self):
        from src.refined import feasible

        viab = feasible(_amostra([0.2, 0.8]), 0.5, 0.8, "AmGm")
        assert not viab.flags["parametros"]
