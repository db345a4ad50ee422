"""Testes das famílias de funções, intervalos e portas."""

import math

import pytest


class TestInterval:
    def test_parse_e_texto(self):
        from src.funclib import Interval

        k = Interval.parse("(0, 1]")
        assert k.lo_open and not k.hi_open
        assert str(k) == "(0.0, 1.0]"
        assert Interval.parse(str(k)) == k

    def test_parse_infinito(self):
        from src.funclib import Interval

        k = Interval.parse("[0, ∞)")
        assert k.hi == math.inf and k.hi_open
        assert str(k) == "[0.0, inf)"

    def test_extremo_infinito_sempre_aberto(self):
        from src.funclib import Interval

        assert Interval(-math.inf, 0.0).lo_open

    def test_invertido(self):
        from src.erros import DomainError
        from src.funclib import Interval

        with pytest.raises(DomainError):
            Interval(1.0, 0.0)

    def test_mal_formado(self):
        from src.erros import DomainError
        from src.funclib import Interval

        with pytest.raises(DomainError):
            Interval.parse("0, 1")

    def test_contains_respeita_abertura(self):
        from src.funclib import OPEN_UNIT, UNIT

        assert UNIT.contains(0.0) and UNIT.contains(1.0)
        assert not OPEN_UNIT.contains(0.0) and not OPEN_UNIT.contains(1.0)
        assert OPEN_UNIT.contains(0.5)

    def test_intersect(self):
        from src.funclib import UNIT, Interval

        k = UNIT.intersect(Interval(0.5, 2.0, True, False))
        assert k == Interval(0.5, 1.0, True, False)

    def test_intersect_vazia(self):
        from src.erros import DomainError
        from src.funclib import Interval

        with pytest.raises(DomainError):
            Interval(0.0, 1.0, False, True).intersect(Interval(1.0, 2.0))

    def test_contains_interval(self):
        from src.funclib import NONNEGATIVE, OPEN_UNIT, POSITIVE, UNIT

        assert NONNEGATIVE.contains_interval(UNIT)
        assert not POSITIVE.contains_interval(UNIT)
        assert POSITIVE.contains_interval(OPEN_UNIT)


class TestScalarFunction:
    def test_exp_weight(self, peso_exp):
        from src.funclib import evaluate

        assert evaluate(peso_exp, 0.0) == pytest.approx(2.0 / 2.16)
        assert evaluate(peso_exp, 1.0) == pytest.approx(2.0 / 2.16)
        assert evaluate(peso_exp, 0.5) == pytest.approx(2.0 / 2.16 * math.exp(0.25))

    def test_alpha_maior_que_beta(self):
        from src.erros import DomainError
        from src.funclib import Familia, criar_funcao

        with pytest.raises(DomainError):
            criar_funcao(Familia.EXP_WEIGHT, alpha=3.0, beta=2.0)

    def test_familia_desconhecida(self):
        from src.erros import DomainError
        from src.funclib import criar_funcao

        with pytest.raises(DomainError):
            criar_funcao("QuarticTarget")

    def test_parametro_desconhecido(self):
        from src.erros import DomainError
        from src.funclib import Familia, criar_funcao

        with pytest.raises(DomainError):
            criar_funcao(Familia.POWER_GATE, alpha=2.0, gamma=1.0)

    def test_parametro_obrigatorio(self):
        from src.erros import DomainError
        from src.funclib import Familia, criar_funcao

        with pytest.raises(DomainError):
            criar_funcao(Familia.EXP_WEIGHT, alpha=2.0)

    def test_padroes_da_porta_pontual(self):
        from src.funclib import Familia, criar_funcao, evaluate

        g = criar_funcao(Familia.PIECEWISE_GATE)
        assert evaluate(g, 2.0) == 1.0
        assert evaluate(g, 1.5) == 2.0

    def test_dominio_padrao_power_target(self):
        from src.funclib import NONNEGATIVE, POSITIVE, REAL, Familia, criar_funcao

        assert criar_funcao(Familia.POWER_TARGET, p=0.5).domain == NONNEGATIVE
        assert criar_funcao(Familia.POWER_TARGET, p=-1.0).domain == POSITIVE
        assert criar_funcao(Familia.POWER_TARGET, REAL, p=2.0).domain == REAL

    def test_dominio_com_singularidade(self):
        from src.erros import DomainError
        from src.funclib import NONNEGATIVE, Familia, criar_funcao

        with pytest.raises(DomainError):
            criar_funcao(Familia.POWER_TARGET, NONNEGATIVE, p=-1.0)
        with pytest.raises(DomainError):
            criar_funcao(Familia.NEGLOG_TARGET, "[0, 1]")

    def test_evaluate_fora_do_dominio(self, neglog):
        from src.erros import DomainError
        from src.funclib import evaluate

        with pytest.raises(DomainError):
            evaluate(neglog, 0.0)
        with pytest.raises(DomainError):
            evaluate(neglog, -1.0)

    def test_kyfan_gate_fixa_meio(self):
        from src.funclib import Familia, criar_funcao, evaluate

        for alpha in (1.5, 2.0, 3.0):
            g = criar_funcao(Familia.KYFAN_GATE, alpha=alpha)
            assert evaluate(g, 0.5) == pytest.approx(0.5)

    def test_chrystal_gate_identidade_quando_beta_dobro(self):
        from src.funclib import Familia, criar_funcao, evaluate

        g = criar_funcao(Familia.CHRYSTAL_GATE, alpha=1.0, beta=2.0)
        assert evaluate(g, 0.7) == pytest.approx(0.7)

    def test_chrystal_gate_menos_infinito(self):
        from src.funclib import Familia, criar_funcao, evaluate

        g = criar_funcao(Familia.CHRYSTAL_GATE, alpha=1.0, beta=1.0)
        assert evaluate(g, 0.7) == -math.inf

    def test_root_gate(self):
        from src.funclib import Familia, criar_funcao, evaluate

        g = criar_funcao(Familia.ROOT_GATE, alpha=1.0, beta=1.25, p=2.0)
        assert evaluate(g, 2.0) == pytest.approx(1.0)

    def test_estendido_concorda_com_double(self):
        from src.funclib import Familia, criar_funcao, evaluate

        casos = [
            (criar_funcao(Familia.EXP_WEIGHT, alpha=2.0, beta=2.16), 0.3),
            (criar_funcao(Familia.LOGIT_TARGET), 0.2),
            (criar_funcao(Familia.SOFTPLUS_TARGET), 1.7),
            (criar_funcao(Familia.KYFAN_GATE, alpha=2.0), 0.4),
            (criar_funcao(Familia.COSINE_GATE), 0.25),
            (criar_funcao(Familia.ROOT_GATE, alpha=1.0, beta=1.5, p=3.0), 0.9),
            (criar_funcao(Familia.CUBIC_TARGET), 0.1),
        ]
        for fn, t in casos:
            assert float(fn.estendido(t)) == pytest.approx(evaluate(fn, t), rel=1e-12), fn

    def test_vetorizado(self, neglog):
        import numpy as np

        valores = neglog(np.array([1.0, math.e]))
        assert valores.tolist() == pytest.approx([0.0, -1.0])

    def test_dict_ida_e_volta(self, peso_exp):
        from src.funclib import ScalarFunction

        dados = peso_exp.para_dict()
        assert dados == {"family": "ExpWeight", "domain": "(-inf, inf)", "alpha": 2.0, "beta": 2.16}
        assert ScalarFunction.de_dict(dados) == peso_exp


class TestGateInterval:
    def test_porta_pontual(self):
        from src.funclib import REAL, Familia, Interval, criar_funcao, gate_interval

        porta = gate_interval(criar_funcao(Familia.PIECEWISE_GATE), 2.0, REAL)
        assert porta.interval == Interval(1.0, 2.0)
        assert porta.gate_value == 1.0
        assert not porta.degenerate and not porta.clamped

    def test_porta_inviavel(self):
        from src.erros import InfeasibleGate
        from src.funclib import REAL, Familia, criar_funcao, gate_interval

        with pytest.raises(InfeasibleGate):
            gate_interval(criar_funcao(Familia.PIECEWISE_GATE), 1.5, REAL)

    def test_degenerada(self):
        from src.funclib import POSITIVE, Familia, criar_funcao, gate_interval

        porta = gate_interval(criar_funcao(Familia.POWER_GATE, alpha=1.0), 0.5, POSITIVE)
        assert porta.degenerate
        assert porta.interval.lo == porta.interval.hi == 0.5

    def test_truncamento_extremo_aberto(self):
        from src.funclib import EPSILON_TRUNCAMENTO, POSITIVE, Familia, criar_funcao, gate_interval

        porta = gate_interval(criar_funcao(Familia.CONSTANT_GATE, c=-1.0), 2.0, POSITIVE)
        assert porta.clamped
        assert porta.gate_value == -1.0
        assert porta.interval.lo == EPSILON_TRUNCAMENTO

    def test_truncamento_extremo_fechado(self):
        from src.funclib import Familia, Interval, criar_funcao, gate_interval

        porta = gate_interval(criar_funcao(Familia.CONSTANT_GATE, c=-1.0), 2.0, Interval(0.0, 3.0))
        assert porta.clamped
        assert porta.interval == Interval(0.0, 2.0)

    def test_ilimitado_inferiormente(self):
        from src.erros import DomainError
        from src.funclib import REAL, Familia, criar_funcao, gate_interval

        g = criar_funcao(Familia.CHRYSTAL_GATE, alpha=1.0, beta=1.0)
        with pytest.raises(DomainError):
            gate_interval(g, 1.0, REAL)

    def test_v_fora_do_ambiente(self):
        from src.erros import DomainError
        from src.funclib import UNIT, Familia, criar_funcao, gate_interval

        with pytest.raises(DomainError):
            gate_interval(criar_funcao(Familia.POWER_GATE, alpha=2.0), 1.5, UNIT)


class TestLemas:
    @pytest.mark.parametrize(
        "lema, alpha, beta, p, esperado",
        [
            ("KyFan", 2.0, 2.5, None, True),
            ("KyFan", 1.0, 1.5, None, False),
            ("AmGm", 2.0, 3.5, None, False),
            ("Chrystal", 0.5, 1.0, None, True),
            ("Chrystal", 0.5, 1.1, None, False),
            ("HolderMcCarthy", 1.0, 1.5, None, False),
            ("HolderMcCarthy", 1.0, 1.5, 2.0, True),
            ("HolderMcCarthy", 1.0, 1.5, 1.0, False),
        ],
    )
    def test_parametros(self, lema, alpha, beta, p, esperado):
        from src.funclib import lemma_parameters_ok

        assert lemma_parameters_ok(lema, alpha, beta, p) is esperado

    def test_triplo_amgm(self):
        from src.funclib import Familia, lemma_triple

        tri = lemma_triple("AmGm", 2.0, 2.16)
        assert tri.f.family is Familia.NEGLOG_TARGET
        assert str(tri.f.domain) == "(0.0, 1.0]"
        assert tri.g.family is Familia.POWER_GATE
        assert tri.h.valores == {"alpha": 2.0, "beta": 2.16}

    def test_dominios_dos_triplos(self):
        from src.funclib import NONNEGATIVE, POSITIVE, lemma_triple

        assert str(lemma_triple("KyFan", 2.0, 2.5).f.domain) == "(0.0, 0.5]"
        assert lemma_triple("Chrystal", 1.0, 1.5).f.domain == POSITIVE
        assert lemma_triple("HolderMcCarthy", 1.0, 1.5, 2.0).f.domain == NONNEGATIVE

    def test_holder_mccarthy_sem_p(self):
        from src.erros import DomainError
        from src.funclib import lemma_triple

        with pytest.raises(DomainError):
            lemma_triple("HolderMcCarthy", 1.0, 1.5)
