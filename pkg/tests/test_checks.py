"""Testes dos AssetChecks das campanhas."""


def _resumo(alvo, confirmadas):
    return {"target": alvo, "confirmed_witnesses": confirmadas}


class TestClassicasSemTestemunhas:
    def test_passa_sem_testemunhas(self):
        """Check passa quando nenhuma campanha clássica tem testemunha."""
        from assets.checks import check_classicas_sem_testemunhas

        result = check_classicas_sem_testemunhas([_resumo("KyFan", 0), _resumo("AmGm", 0)])
        assert result.passed is True
        assert result.metadata["campaigns"].value == 2

    def test_falha_com_testemunha(self):
        """Uma testemunha confirmada em desigualdade clássica é erro."""
        from dagster import AssetCheckSeverity

        from assets.checks import check_classicas_sem_testemunhas

        result = check_classicas_sem_testemunhas([_resumo("KyFan", 0), _resumo("Chrystal", 3)])
        assert result.passed is False
        assert result.severity == AssetCheckSeverity.ERROR


class TestDeterminismo:
    def test_mesma_semente_reproduz(self, monkeypatch):
        """Reexecução com a mesma campanha reproduz o relatório."""
        import assets.checks
        from src.falsify import Alvo, Campaign, run_campaign

        pequena = Campaign(target=Alvo.COR21, samples=15, seed=42, published_value=True, max_witnesses=2)
        monkeypatch.setattr(assets.checks, "campanha_cor21", lambda: pequena)

        original = run_campaign(pequena, threads=1).para_dict()
        result = assets.checks.check_determinismo_cor21(original)
        assert result.passed is True

    def test_relatorio_diferente_falha(self, monkeypatch):
        """Relatório adulterado não bate com a reexecução."""
        from dagster import AssetCheckSeverity

        import assets.checks
        from src.falsify import Alvo, Campaign, run_campaign

        pequena = Campaign(target=Alvo.COR21, samples=15, seed=42, published_value=True, max_witnesses=2)
        monkeypatch.setattr(assets.checks, "campanha_cor21", lambda: pequena)

        adulterado = run_campaign(pequena, threads=1).para_dict()
        adulterado["min_margin"] = 0.0
        result = assets.checks.check_determinismo_cor21(adulterado)
        assert result.passed is False
        assert result.severity == AssetCheckSeverity.WARN
