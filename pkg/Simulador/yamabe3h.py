# Simulador/yamabe3h.py
"""
Linha de comando: validação de triangulações, curvatura, energia, fluxo, empacotamento
regular e autoteste. Relatórios JSON vão para stdout; logs vão para stderr.

Uso (a partir da raiz do repositório):
    python -m Simulador.yamabe3h validate dados/pentachoron.json
    python -m Simulador.yamabe3h flow builtin:pentachoron --radii uniform:1 --out traco.csv
    python -m Simulador.yamabe3h solve-regular --degree 23

Códigos de saída: 0 sucesso, 1 resultado negativo (validação ou inexistência),
2 falha numérica, 3 entrada inválida.
"""
import argparse
import logging
import math
import sys

import numpy as np

from Complexo import arquivos
from Complexo.triangulacao import Packing, TriangulationGenerator, generate, validate
from Energia.curvatura import class_counts, curvature
from Energia.funcional import total_energy_rel
from Fluxo.integrador import FlowConfig, FlowStatus, integrate
from Fluxo.monitores import fit_rate
from Fluxo.solucionador import solve_regular
from Geometria.tetraedro import regular_solid_angle
from Simulador.autoteste import run_selfcheck
from Simulador.manifesto import VERSION, RunManifest
from Utilidades import utils
from Utilidades.erros import (ComplexError, ConfigError, DomainError, FormatError, NoSolutionError,
                              NumericError, UnsupportedError)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_NUMERIC = 2
EXIT_INPUT = 3

BUILTIN_PREFIX = "builtin:"
UNIFORM_PREFIX = "uniform:"


def _emit_json(payload):
    sys.stdout.write(utils.dump_json(payload))
    sys.stdout.flush()


def load_complex(source, manifest):
    """Caminho de arquivo yamabe3h-tri/1 ou builtin:<tipo>; registra o resumo no manifesto."""
    if source.startswith(BUILTIN_PREFIX):
        c = generate(source[len(BUILTIN_PREFIX):])
        manifest.add_input("tri_file", arquivos.serialize(c))
        return c
    c, data = arquivos.read_complex(source)
    manifest.add_input("tri_file", data)
    return c


def load_radii(source, c, manifest):
    """uniform:t ou caminho de arquivo yamabe3h-packing/1."""
    if source.startswith(UNIFORM_PREFIX):
        raw = source[len(UNIFORM_PREFIX):]
        try:
            t = float(raw)
        except ValueError:
            raise DomainError(f"--radii {source!r}: {raw!r} não é um número") from None
        manifest.config["radii"] = source
        return Packing.uniform(c.vertex_count, t)
    packing, data = arquivos.read_packing(source, c.vertex_count)
    manifest.add_input("radii", data)
    return packing


def _cmd_validate(args):
    manifest = RunManifest("validate")
    c = load_complex(args.tri_file, manifest)
    report = validate(c)
    manifest.status = "passed" if report.passed else "failed"
    payload = report.to_dict()
    payload.update(vertex_count=c.vertex_count, tetra_count=c.tetra_count, manifest=manifest.to_dict())
    _emit_json(payload)
    if not report.passed:
        logger.error(f"validate: verificações falharam: {', '.join(report.failed_checks())}")
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_curvature(args):
    manifest = RunManifest("curvature")
    c = load_complex(args.tri_file, manifest)
    r = load_radii(args.radii, c, manifest)
    k = curvature(c, r)
    real, virtual = class_counts(c, r)
    manifest.status = "ok"
    _emit_json({"curvature": k, "k_inf": float(np.max(np.abs(k))), "real_count": real,
                "virtual_count": virtual, "manifest": manifest.to_dict()})
    return EXIT_OK


def _cmd_energy(args):
    manifest = RunManifest("energy", config={"hessian": args.hessian})
    c = load_complex(args.tri_file, manifest)
    r = load_radii(args.radii, c, manifest)
    report = total_energy_rel(c, r, hessian=args.hessian)
    manifest.status = "ok"
    payload = report.to_dict()
    payload["manifest"] = manifest.to_dict()
    _emit_json(payload)
    return EXIT_OK


def _flow_config(args):
    return FlowConfig(method=args.method, dt=args.dt, rtol=args.rtol, t_max=args.t_max,
                      stop_tol=args.stop_tol, output_stride=args.stride,
                      monitor_energy=not args.no_energy, extended=not args.non_extended)


def flow_summary(trace):
    """Resumo JSON de uma trajetória; a taxa ajustada usa r_max no decaimento e ‖K̃‖∞ nos demais casos."""
    final = trace.final
    times = trace.times()
    series = trace.r_max() if trace.status is FlowStatus.DECAYED else trace.k_inf()
    return {
        "status": trace.status.value,
        "message": trace.message,
        "t_final": final.t,
        "steps": trace.steps,
        "samples": len(trace.samples),
        "k_inf_final": final.k_inf,
        "r_min_final": final.r_min,
        "r_max_final": final.r_max,
        "argmax_final": final.argmax,
        "virtual_count_final": final.virtual_count,
        "s_rel_final": final.s_rel,
        "fitted_rate": fit_rate(times, series),
        "radii_final": final.radii,
    }


def _cmd_flow(args):
    cfg = _flow_config(args)
    manifest = RunManifest("flow", config=cfg.to_dict())
    c = load_complex(args.tri_file, manifest)
    r0 = load_radii(args.radii, c, manifest)
    trace = integrate(c, r0, cfg)
    manifest.status = trace.status.value
    if args.out:
        manifest.outputs[args.out] = utils.write_text(args.out, trace.csv_text())
        manifest.write(f"{args.out}.manifest.json")
    payload = flow_summary(trace)
    payload["manifest"] = manifest.to_dict()
    _emit_json(payload)
    if trace.status is FlowStatus.NUMERIC_FAILURE:
        return EXIT_NUMERIC
    if trace.status is FlowStatus.LEFT_REAL:
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_solve_regular(args):
    manifest = RunManifest("solve-regular", config={"degree": args.degree})
    target = 4.0 * math.pi / args.degree if args.degree >= 1 else math.nan
    try:
        t0 = solve_regular(args.degree)
    except NoSolutionError as exc:
        manifest.status = "no_solution"
        logger.error(f"solve-regular: {exc}")
        _emit_json({"degree": args.degree, "status": "no_solution", "message": str(exc),
                    "manifest": manifest.to_dict()})
        return EXIT_NEGATIVE
    alpha = regular_solid_angle(t0)
    manifest.status = "ok"
    _emit_json({"degree": args.degree, "status": "ok", "t0": t0, "alpha": alpha, "target": target,
                "residual": abs(alpha - target), "manifest": manifest.to_dict()})
    return EXIT_OK


def _cmd_selfcheck(args):
    manifest = RunManifest("selfcheck", config={"seed": args.seed, "cosine_samples": args.samples,
                                                "gradient_samples": args.gradient_samples})
    results = run_selfcheck(args.seed, args.samples, args.gradient_samples)
    failed = [res.name for res in results if not res.passed]
    manifest.status = "passed" if not failed else "failed"
    _emit_json({"checks": [res.to_dict() for res in results], "failed": failed, "manifest": manifest.to_dict()})
    if failed:
        logger.error(f"selfcheck: falharam {', '.join(failed)}")
        return EXIT_NUMERIC
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Erros de uso saem com o código de entrada inválida (3), não com o 2 padrão do argparse."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: erro: {message}\n")


def _positive_int(raw):
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"esperado inteiro >= 1, recebeu {raw}")
    return value


def _add_packing_args(parser):
    parser.add_argument("tri_file", metavar="TRI", help=f"arquivo yamabe3h-tri/1 ou builtin:<{'|'.join(TriangulationGenerator.KINDS)}>")
    parser.add_argument("--radii", default="uniform:1", metavar="ARQUIVO|uniform:t")


def _build_parser():
    parser = _Parser(
        prog="yamabe3h",
        description="Empacotamentos por bolas hiperbólicas e o fluxo de Yamabe combinatório estendido.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    subparsers = parser.add_subparsers(dest="command", required=True)

    val = subparsers.add_parser("validate", help="Verifica a condição de variedade fechada e os graus.")
    val.add_argument("tri_file", metavar="TRI")

    curv = subparsers.add_parser("curvature", help="Curvatura estendida K̃ por vértice.")
    _add_packing_args(curv)

    energy = subparsers.add_parser("energy", help="Energia relativa S_rel, gradiente e Hessiana opcional.")
    _add_packing_args(energy)
    energy.add_argument("--hessian", action="store_true")

    flow = subparsers.add_parser("flow", help="Integra o fluxo e grava a trajetória em CSV.")
    _add_packing_args(flow)
    flow.add_argument("--method", choices=["rk4", "rkf45"], default="rk4")
    flow.add_argument("--dt", type=float, default=1e-3)
    flow.add_argument("--rtol", type=float, default=1e-8)
    flow.add_argument("--t-max", type=float, default=10.0)
    flow.add_argument("--stop-tol", type=float, default=1e-10)
    flow.add_argument("--stride", type=_positive_int, default=10)
    flow.add_argument("--no-energy", action="store_true", help="Não calcula S_rel nas amostras.")
    flow.add_argument("--non-extended", action="store_true", help="Para ao sair do domínio real.")
    flow.add_argument("--out", default=None, metavar="CSV")

    solve = subparsers.add_parser("solve-regular", help="Raio t₀ do empacotamento regular plano de grau d.")
    solve.add_argument("--degree", type=int, required=True)

    check = subparsers.add_parser("selfcheck", help="Autoteste numérico das fórmulas.")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--samples", type=_positive_int, default=1000)
    check.add_argument("--gradient-samples", type=_positive_int, default=6)
    return parser


COMMANDS = {
    "validate": _cmd_validate,
    "curvature": _cmd_curvature,
    "energy": _cmd_energy,
    "flow": _cmd_flow,
    "solve-regular": _cmd_solve_regular,
    "selfcheck": _cmd_selfcheck,
}


def main(argv=None):
    """
    Ponto de entrada da linha de comando.

    Args:
        argv (list, opcional): Argumentos; sys.argv[1:] quando omitido.

    Returns:
        int: Código de saída (0 ok, 1 resultado negativo, 2 falha numérica, 3 entrada inválida).
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        return COMMANDS[args.command](args)
    except (FormatError, ComplexError, DomainError, ConfigError, UnsupportedError, OSError) as exc:
        logger.error(f"{args.command}: entrada inválida: {exc}")
        sys.stderr.write(f"erro: {exc}\n")
        return EXIT_INPUT
    except NumericError as exc:
        logger.error(f"{args.command}: falha numérica: {exc}", exc_info=True)
        sys.stderr.write(f"erro numérico: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
