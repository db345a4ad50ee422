"""
Driver de linha de comando do laboratório.

Subcomandos: certify, jcoeff, jensen, refine, falsify, replay, sweep.
Toda execução lê um RunConfig (INI, ver src/run_config.py); as flags da CLI
sobrescrevem as chaves do arquivo.

Códigos de saída (API estável):
    0  certificado / margem não negativa / nenhuma testemunha
    2  violação / margem negativa / testemunha confirmada
    1  erro de uso, de configuração ou de domínio

Uso:
    laboratorio certify --config config/exemplos/cubica_porta_pontual.ini
    laboratorio falsify --config config/exemplos/falsify_amgm.ini --seed 42 --out data/amgm.json
    laboratorio replay  --config config/exemplos/replay.ini
    laboratorio sweep   --config config/exemplos/sweep_campanhas.ini --format csv --out data/sweep.csv
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src.contracts import LinhaCadeia, LinhaCampanha, LinhaPerfil, LinhaTestemunha
from src.convexity import TOLERANCIA_VIOLACAO, Veredito, certify, jcoeff
from src.database import inicializar_banco, registrar_campanha
from src.erros import ConfigError, ErroLaboratorio
from src.exportar_parquet import exportar_linhas
from src.falsify import Alvo, Campaign, Regiao, RelatorioCampanha, lambda_profile, replay, run_campaign
from src.funclib import Interval, Lema
from src.opcalc import SymmetricMatrix, UnitVector, jensen_verify
from src.refined import WeightedSample, amgm_chain, chrystal_chain, hm_chain, kyfan_chain, load_sample_csv
from src.relatorios import envelope, escrever_csv, escrever_json, sanitizar
from src.run_config import RunConfig, SecaoJcoeff, SecaoSweep, carregar_run_config, config_para_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERRO = 1
EXIT_VIOLACAO = 2

SEMENTE_PADRAO = 0
AMOSTRAS_PADRAO = 10_000


@dataclass
class Saida:
    codigo: int
    resultado: dict
    linhas: list[dict] | None = None
    modelo: type | None = None
    seed: int | None = None


class _Parser(argparse.ArgumentParser):
    """ArgumentParser que sai com código 1 em erro de uso."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERRO, f"{self.prog}: erro: {message}\n")


# ─── Auxiliares ───


def _primeiro(*valores, padrao=None):
    for valor in valores:
        if valor is not None:
            return valor
    return padrao


def _matriz(sec) -> tuple[SymmetricMatrix, UnitVector]:
    if sec.diagonal is not None:
        A = SymmetricMatrix.diagonal(sec.diagonal)
    elif sec.matrix is not None:
        A = SymmetricMatrix(sec.matrix)
    else:
        raise ConfigError("informe 'matrix' ou 'diagonal'")
    if sec.x is None:
        raise ConfigError("informe o vetor 'x'")
    return A, UnitVector(sec.x)


def _amostra(sec) -> WeightedSample:
    if sec.csv is not None:
        return load_sample_csv(sec.csv)
    if sec.a is None:
        raise ConfigError("informe 'a' (e 'q') ou 'csv' em [refine]")
    q = sec.q if sec.q is not None else [1.0 / len(sec.a)] * len(sec.a)
    return WeightedSample(a=tuple(sec.a), q=tuple(q), b=tuple(sec.b) if sec.b is not None else None)


def _campanha(cfg: RunConfig, args, alvo: Alvo | None = None) -> Campaign:
    sec = cfg.falsify
    return Campaign(
        target=alvo or sec.target,
        region=Regiao(**sec.regiao()),
        samples=_primeiro(args.samples, sec.samples, cfg.run.samples, padrao=AMOSTRAS_PADRAO),
        seed=_primeiro(args.seed, sec.seed, cfg.run.seed, padrao=SEMENTE_PADRAO),
        triple=sec.triple,
        inequality=sec.inequality,
        published_value=sec.published_value,
        max_witnesses=sec.max_witnesses,
        max_draw_factor=sec.max_draw_factor,
        grid=sec.grid,
        rotate=sec.rotate,
    )


def _linhas_testemunhas(relatorio: RelatorioCampanha) -> list[dict]:
    return [
        {
            "target": relatorio.campaign.target.value,
            "index": w.index,
            "margin_double": w.margin_double,
            "margin_confirmed": w.margin_confirmed,
            "confirmed": w.confirmed,
            "feasible": w.feasible,
            "status": w.status.value,
            "inputs": json.dumps(sanitizar(w.inputs), sort_keys=True),
        }
        for w in relatorio.witnesses
    ]


def _auditar(relatorio: RelatorioCampanha) -> None:
    inicializar_banco()
    registrar_campanha(
        relatorio.campaign.target.value,
        relatorio.campaign.seed,
        relatorio.samples,
        relatorio.min_margin,
        relatorio.confirmed_witnesses,
        relatorio.outcome,
    )


# ─── Subcomandos ───


def cmd_certify(cfg: RunConfig, args) -> Saida:
    cfg.exigir("f", "g", "h", "certify")
    sec = cfg.certify
    cert = certify(cfg.f.construir(), cfg.g.construir(), cfg.h.construir(), sec.v, sec.grid, sec.tolerance)
    codigo = EXIT_VIOLACAO if cert.verdict is Veredito.VIOLATED else EXIT_OK
    logger.info("certify v=%r: %s (mínimo %r)", sec.v, cert.verdict.value, cert.min_value)
    return Saida(codigo, cert.para_dict())


def cmd_jcoeff(cfg: RunConfig, args) -> Saida:
    cfg.exigir("h")
    sec = cfg.jcoeff or SecaoJcoeff()
    resultado = jcoeff(cfg.h.construir(), Interval.parse(sec.interval), sec.samples)
    return Saida(EXIT_OK, resultado.para_dict())


def cmd_jensen(cfg: RunConfig, args) -> Saida:
    cfg.exigir("f", "h", "jensen")
    sec = cfg.jensen
    A, x = _matriz(sec)
    veredito = jensen_verify(cfg.f.construir(), cfg.h.construir(), A, x, sec.mode, sec.lam, sec.coefficient)
    codigo = EXIT_VIOLACAO if veredito.margin < 0.0 else EXIT_OK
    return Saida(codigo, veredito.para_dict())


def cmd_refine(cfg: RunConfig, args) -> Saida:
    cfg.exigir("refine")
    sec = cfg.refine
    if sec.corollary is Lema.HOLDER_MCCARTHY:
        if sec.p is None:
            raise ConfigError("Hölder-McCarthy exige 'p'")
        A, x = _matriz(sec)
        relatorio = hm_chain(A, x, sec.p, sec.alpha, sec.v)
    else:
        funcao = {Lema.KYFAN: kyfan_chain, Lema.AMGM: amgm_chain, Lema.CHRYSTAL: chrystal_chain}[sec.corollary]
        relatorio = funcao(_amostra(sec), sec.alpha, sec.v)
    violado = relatorio.feasible and min(relatorio.margin1, relatorio.margin2) < -TOLERANCIA_VIOLACAO
    return Saida(
        EXIT_VIOLACAO if violado else EXIT_OK,
        relatorio.para_dict(),
        linhas=[relatorio.para_linha()],
        modelo=LinhaCadeia,
    )


def cmd_falsify(cfg: RunConfig, args) -> Saida:
    cfg.exigir("falsify")
    campanha = _campanha(cfg, args)
    relatorio = run_campaign(campanha, threads=args.threads)
    if args.audit:
        _auditar(relatorio)
    codigo = EXIT_VIOLACAO if relatorio.confirmed_witnesses else EXIT_OK
    return Saida(
        codigo,
        relatorio.para_dict(),
        linhas=_linhas_testemunhas(relatorio),
        modelo=LinhaTestemunha,
        seed=campanha.seed,
    )


def _instancia_replay(cfg: RunConfig) -> dict:
    sec = cfg.replay
    caminho = sec.instance or sec.report
    try:
        with open(caminho, encoding="utf-8") as arquivo:
            dados = json.load(arquivo)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"não foi possível ler {caminho}: {exc}") from exc

    if sec.instance is not None:
        return dados.get("inputs", dados)

    resultado = dados.get("result", dados)
    if sec.reference is not None:
        for ref in resultado.get("reference_instances", []):
            if ref["name"] == sec.reference:
                return ref["inputs"]
        raise ConfigError(f"instância de referência {sec.reference!r} não está em {caminho}")
    testemunhas = resultado.get("witnesses", [])
    if sec.witness >= len(testemunhas):
        raise ConfigError(f"o relatório {caminho} tem {len(testemunhas)} testemunha(s); pedida a {sec.witness}")
    return testemunhas[sec.witness]["inputs"]


def cmd_replay(cfg: RunConfig, args) -> Saida:
    cfg.exigir("replay")
    w = replay(_instancia_replay(cfg))
    resultado = {**w.para_dict(), "margin_double_hex": float(w.margin_double).hex()}
    logger.info("replay: %s (double %r, estendida %s)", w.status.value, w.margin_double, w.margin_confirmed)
    return Saida(EXIT_VIOLACAO if w.confirmed else EXIT_OK, resultado)


def _sweep_campanhas(cfg: RunConfig, args, sec: SecaoSweep) -> Saida:
    cfg.exigir("falsify")
    alvos = sec.targets or [cfg.falsify.target]
    relatorios = []
    for alvo in alvos:
        relatorio = run_campaign(_campanha(cfg, args, alvo), threads=args.threads)
        if args.audit:
            _auditar(relatorio)
        relatorios.append(relatorio)
    linhas = [r.para_linha() for r in relatorios]
    exportadas = exportar_linhas(linhas, "campanhas") if sec.parquet else 0
    confirmadas = sum(r.confirmed_witnesses for r in relatorios)
    resultado = {
        "kind": "campaigns",
        "campaigns": [r.para_dict() for r in relatorios],
        "parquet_rows": exportadas,
    }
    return Saida(
        EXIT_VIOLACAO if confirmadas else EXIT_OK,
        resultado,
        linhas=linhas,
        modelo=LinhaCampanha,
        seed=relatorios[0].campaign.seed,
    )


def _sweep_lambda(cfg: RunConfig, sec: SecaoSweep) -> Saida:
    cfg.exigir("f", "h", "jensen")
    A, x = _matriz(cfg.jensen)
    lo, hi, n = sec.lambdas
    perfil = lambda_profile(cfg.f.construir(), cfg.h.construir(), A, x, np.linspace(lo, hi, n))
    linhas = [{"lam": lam, "margin": m} for lam, m in perfil.pontos]
    codigo = EXIT_VIOLACAO if perfil.min_margin < 0.0 else EXIT_OK
    return Saida(codigo, {"kind": "lambda", **perfil.para_dict()}, linhas=linhas, modelo=LinhaPerfil)


def cmd_sweep(cfg: RunConfig, args) -> Saida:
    sec = cfg.sweep or SecaoSweep()
    if sec.kind == "lambda":
        return _sweep_lambda(cfg, sec)
    return _sweep_campanhas(cfg, args, sec)


COMANDOS = {
    "certify": (cmd_certify, "Certifica h-convexidade condicional de f em v"),
    "jcoeff": (cmd_jcoeff, "Coeficiente de Jensen M_K(h)"),
    "jensen": (cmd_jensen, "Desigualdade de Jensen para operadores"),
    "refine": (cmd_refine, "Cadeias refinadas (Ky Fan, AM-GM, Chrystal, Hölder-McCarthy)"),
    "falsify": (cmd_falsify, "Campanha de falsificação com semente"),
    "replay": (cmd_replay, "Reexecuta uma testemunha ou instância serializada"),
    "sweep": (cmd_sweep, "Varredura de campanhas ou de λ"),
}


# ─── Entrada ───


def criar_parser() -> argparse.ArgumentParser:
    comuns = argparse.ArgumentParser(add_help=False)
    comuns.add_argument("--config", required=True, help="Arquivo INI da execução (RunConfig).")
    comuns.add_argument("--out", help="Caminho do relatório. Sem ele, o relatório vai para a saída padrão.")
    comuns.add_argument("--seed", type=int, help="Semente (sobrescreve o arquivo).")
    comuns.add_argument("--samples", type=int, help="Número de amostras viáveis (sobrescreve o arquivo).")
    comuns.add_argument("--threads", type=int, help="Processos da campanha (sobrescreve LAB_THREADS/THREADS).")
    comuns.add_argument("--format", choices=["json", "csv"], help="Formato do relatório (padrão: json).")
    comuns.add_argument("--audit", action="store_true", help="Registra campanhas na tabela campaign_audit.")
    comuns.add_argument("--verbose", action="store_true", help="Log em nível DEBUG.")

    parser = _Parser(prog="laboratorio", description="Laboratório numérico de h-convexidade condicional")
    sub = parser.add_subparsers(dest="comando", required=True)
    for nome, (_, ajuda) in COMANDOS.items():
        sub.add_parser(nome, parents=[comuns], help=ajuda, description=ajuda)
    return parser


def resolver_config(cfg: RunConfig, args) -> RunConfig:
    """Aplica as flags da CLI sobre a seção [run]."""
    flags = {"seed": args.seed, "samples": args.samples, "out": args.out, "format": args.format}
    atualizacao = {k: v for k, v in flags.items() if v is not None}
    if not atualizacao:
        return cfg
    run = cfg.run.model_validate({**cfg.run.model_dump(), **atualizacao})
    return cfg.model_copy(update={"run": run})


def emitir(comando: str, cfg: RunConfig, saida: Saida) -> str:
    formato = cfg.run.format or "json"
    destino = cfg.run.out
    if formato == "csv":
        linhas = saida.linhas
        if linhas is None:
            linhas = pd.json_normalize(sanitizar(saida.resultado)).to_dict("records")
        texto = escrever_csv(linhas, destino, saida.modelo)
    else:
        seed = _primeiro(saida.seed, cfg.run.seed)
        texto = escrever_json(envelope(comando, config_para_dict(cfg), seed, saida.resultado), destino)
    if destino is None:
        sys.stdout.write(texto)
    return texto


def main(argv: list[str] | None = None) -> int:
    parser = criar_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )

    try:
        cfg = resolver_config(carregar_run_config(args.config), args)
        handler, _ = COMANDOS[args.comando]
        saida = handler(cfg, args)
        emitir(args.comando, cfg, saida)
    except (ErroLaboratorio, ValueError, OSError) as exc:
        logger.error("%s falhou: %s", args.comando, exc)
        print(f"erro: {exc}", file=sys.stderr)
        return EXIT_ERRO

    return saida.codigo


if __name__ == "__main__":
    sys.exit(main())
