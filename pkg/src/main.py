import os
import sys
import logging
import argparse
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
from sqlalchemy.exc import SQLAlchemyError

from config.config import LOG_CONFIG, PLAN_CONFIG, VERIFY_CONFIG
from src.codes.biased import (
    biased_to_code,
    code_to_biased,
    legendre_biased_set,
    welch_entropy_check,
)
from src.codes.code_io import dumps_biased, loads_biased, read_code, write_code
from src.construct.ensemble_factory import EnsembleFactory
from src.construct.matrices import (
    ProvenanceKind,
    Seed,
    SignMatrix,
    build_legendre_deterministic,
    build_legendre_seeded,
    desk_params,
    rederive,
)
from src.construct.matrix_io import read_matrix, write_matrix
from src.construct.params import plan_parameters
from src.construct.rng import make_rng, random_support
from src.database.db_manager import DatabaseManager
from src.ntheory.primes import is_prime, next_prime_geq
from src.recovery.omp import RecoveryError, omp_recover
from src.recovery.sweep import phase_sweep
from src.reports.records import hard_failures, make_record, render
from src.reports.utils import save_table, write_text
from src.verify.charsum import bias_exact, bias_sampled, charsum_check
from src.verify.conjecture import DEFAULT_TARGET_DELTA, conjecture_scan
from src.verify.enumeration import BudgetExceededError
from src.verify.rip import RipMode, coherence, fro_constant, rip_constant

logger = logging.getLogger(__name__)

VERIFY_CHECKS = ("coherence", "rip", "fro", "consecutive", "no-zero")

Record = Dict[str, Any]


def setup_logging() -> None:
    """Configura el sistema de logging."""
    log_level = getattr(logging, LOG_CONFIG["level"])
    log_format = LOG_CONFIG["format"]
    log_file = LOG_CONFIG["file"]

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=log_level,
        format=log_format,
        handlers=handlers
    )


def parse_prime(text: str) -> Any:
    """'auto' o un entero en decimal o con prefijo 0x."""
    if text == "auto":
        return text
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"primo inválido: {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError(f"primo inválido: {text!r}")
    return value


def parse_int(text: str) -> int:
    """Entero en decimal o con prefijo 0x."""
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"entero inválido: {text!r}")


def certify(p: int) -> Tuple[int, Optional[Dict[str, Any]]]:
    """Certifica un primo dado explícitamente."""
    prime, cert = is_prime(p)
    if not prime or p % 2 == 0:
        raise ValueError(f"p no es un primo impar: {p}")
    return p, cert.to_dict()


def resolve_prime(text: Any, lower: int) -> Tuple[int, Optional[Dict[str, Any]]]:
    if text == "auto":
        p, cert = next_prime_geq(lower)
        return int(p), None if cert is None else cert.to_dict()
    return certify(text)


# ---------------------------------------------------------------------------
# Comandos
# ---------------------------------------------------------------------------

def cmd_plan(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Imprime los parámetros planificados."""
    c1 = PLAN_CONFIG["c1"] if args.c1 is None else args.c1
    params = plan_parameters(args.n, args.k, args.delta, M_override=args.m,
                             H_override=args.h, c1=c1)
    config.update(c1=params.c1)
    return [make_record("plan", params.to_dict(), value=params.M, mode="descriptive")]


def _zero_count(first: int, count: int, p: int) -> int:
    """Múltiplos de p en [first, first + count)."""
    return (first + count - 1) // p - (first - 1) // p


def cmd_gen(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Construye una matriz y la guarda en formato RIPM v1."""
    M, N = args.m, args.n
    if args.deterministic:
        config.pop("seed", None)
        p, cert = resolve_prime(args.prime, M * N + 1)
        matrix = build_legendre_deterministic(M, N, p)
        first = 1
        params: Dict[str, Any] = {"M": M, "N": N, "p": hex(p), "cert": cert}
    else:
        if args.h is None:
            raise ValueError("--h es obligatorio para matrices con semilla")
        design = desk_params(M, N, args.h)
        if args.x is not None:
            config.pop("seed", None)
            seed = Seed.from_hex(args.x, args.h)
        else:
            seed = Seed.generate(args.h, args.seed)
        p, cert = resolve_prime(args.prime, design.p_min)
        matrix = build_legendre_seeded(design, seed, p)
        first = int(seed.X) + 1
        params = {"M": M, "N": N, "H": args.h, "p": hex(p), "x": hex(seed.X),
                  "p_min": hex(design.p_min), "seed_source": seed.source.value, "cert": cert}
    config.update(prime=hex(p))

    write_matrix(matrix, args.out)
    zeros = _zero_count(first, M * N, p)
    return [
        make_record("gen", params, value=matrix.provenance.tag, witness=matrix.provenance.to_dict(),
                    mode="descriptive", seed=config.get("seed")),
        make_record("no-zero", {"p": hex(p), "first": first, "count": M * N},
                    value=zeros, bound=0, passed=zeros == 0),
    ]


def _verify_coherence(matrix: SignMatrix, args: argparse.Namespace) -> Record:
    report = coherence(matrix)
    return make_record("coherence", {"M": matrix.rows, "N": matrix.cols}, value=report.mu,
                       bound=report.welch_floor, passed=report.holds,
                       witness=report.worst_pair)


def _verify_rip(matrix: SignMatrix, args: argparse.Namespace) -> Record:
    mode = RipMode(args.mode)
    report = rip_constant(matrix, args.k, mode, n_samples=args.samples, rng_seed=args.seed,
                          budget=args.budget, workers=args.workers)
    value = report.delta_exact if mode is RipMode.EXHAUSTIVE else report.delta_lower_bound
    return make_record(
        "rip", {"K": report.K_checked, "supports_checked": report.supports_checked},
        value=value, bound=args.target_delta, passed=value < args.target_delta,
        witness=report.worst_support, mode=mode.value,
        seed=None if mode is RipMode.EXHAUSTIVE else args.seed,
        severity="hard" if mode is RipMode.EXHAUSTIVE else "soft",
    )


def _verify_fro(matrix: SignMatrix, args: argparse.Namespace) -> Record:
    report = fro_constant(matrix, args.k, budget=args.budget, workers=args.workers)
    return make_record(
        "fro", {"K": report.K_checked, "pairs_checked": report.pairs_checked,
                "delta_via_thm2": report.delta_via_thm2},
        value=report.theta_emp, witness={"I": report.worst_pair[0], "J": report.worst_pair[1]},
        mode="exhaustive",
    )


def _verify_consecutive(matrix: SignMatrix, args: argparse.Namespace) -> Record:
    params = matrix.provenance.to_dict()
    rebuilt = rederive(matrix)
    if rebuilt is None:
        return make_record("consecutive", params, mode="unavailable", severity="soft")
    mismatch = (rebuilt.signs != matrix.signs)
    count = int(mismatch.sum())
    witness = None
    if count:
        m, n = (int(v) for v in next(zip(*mismatch.nonzero())))
        witness = [m, n]
    return make_record("consecutive", params, value=count, bound=0, passed=count == 0, witness=witness)


def _verify_no_zero(matrix: SignMatrix, args: argparse.Namespace) -> Record:
    prov = matrix.provenance
    total = matrix.rows * matrix.cols
    if prov.kind is ProvenanceKind.LEGENDRE_SEEDED:
        first = prov.x + 1
    elif prov.kind is ProvenanceKind.LEGENDRE_DETERMINISTIC:
        first = 1
    else:
        # Las entradas se almacenan como signos ±1
        return make_record("no-zero", {"kind": prov.tag}, value=0, bound=0, passed=True,
                           mode="by-construction")
    zeros = _zero_count(first, total, prov.p)
    return make_record("no-zero", {"kind": prov.tag, "p": hex(prov.p), "first": first, "count": total},
                       value=zeros, bound=0, passed=zeros == 0)


VERIFIERS: Dict[str, Callable[[SignMatrix, argparse.Namespace], Record]] = {
    "coherence": _verify_coherence,
    "rip": _verify_rip,
    "fro": _verify_fro,
    "consecutive": _verify_consecutive,
    "no-zero": _verify_no_zero,
}


def cmd_verify(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Un registro por comprobación solicitada."""
    matrix = read_matrix(args.matrix)
    config.update(provenance=matrix.provenance.to_dict())
    records = []
    for name in args.checks:
        try:
            records.append(VERIFIERS[name](matrix, args))
        except BudgetExceededError as e:
            logger.warning(f"Comprobación {name} rechazada: {e}")
            records.append(make_record(name, {"required": e.required, "budget": e.budget},
                                       witness=str(e), mode="refused", severity="soft"))
    return records


def cmd_bias(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Sesgo del flujo de símbolos para un conjunto de índices."""
    if args.mode == "exact":
        report = bias_exact(args.p, args.h, args.i, N=args.columns)
        seed = None
    else:
        report = bias_sampled(args.p, args.h, args.i, args.samples, args.seed, N=args.columns)
        seed = args.seed
    statistical = args.mode != "exact"
    params = report.to_dict()
    records = [make_record(
        "bias", params, value=report.value, bound=report.theorem3_bound,
        passed=report.theorem3_holds, witness=report.index_set, mode=args.mode, seed=seed,
        severity="soft" if statistical or args.p < VERIFY_CONFIG["charsum_soft_below"] else "hard",
    )]
    if report.chain_bound is not None:
        records.append(make_record(
            "bias-chain", {"p": args.p, "H": args.h, "N": args.columns,
                           "in_chain_regime": report.in_chain_regime},
            value=report.value, bound=report.chain_bound, passed=report.chain_holds,
            witness=report.index_set, mode=args.mode, seed=seed,
            severity="hard" if report.in_chain_regime and not statistical else "soft",
        ))
    return records


def _charsum_record(p: int, offsets: Sequence[int], t: int) -> Record:
    check = charsum_check(p, offsets, t)
    return make_record(
        "charsum", {"p": p, "k": check.k, "t": t, "constant": PLAN_CONFIG["charsum_constant"]},
        value=check.sum_value, bound=check.bound_value, passed=check.passed,
        witness=check.offsets, severity="soft" if check.soft else "hard",
    )


def cmd_charsum(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Suma de caracteres para desplazamientos dados o instancias aleatorias."""
    p = args.p
    if args.offsets:
        offsets = sorted(args.offsets)
        t = args.t if args.t is not None else p - offsets[-1]
        return [_charsum_record(p, offsets, t)]

    config.update(seed=args.seed)
    certify(p)
    rng = make_rng(args.seed)
    records = []
    for _ in range(args.instances):
        k = int(rng.integers(1, min(args.k_max, p - 1) + 1))
        offsets = [d + 1 for d in random_support(rng, p - 1, k)]
        t = int(rng.integers(1, p - offsets[-1] + 1))
        records.append(_charsum_record(p, offsets, t))
    return records


def cmd_scan_conjecture(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Barrido de primos para la matriz determinista."""
    scan = conjecture_scan(args.m, args.n, args.k, (args.p_min, args.p_max), limit=args.limit,
                           target_delta=args.target_delta, baseline_seeds=args.baseline_seeds,
                           budget=args.budget, workers=args.workers)
    if args.out:
        save_table(scan.table, args.out)
    if args.baseline_out:
        save_table(scan.baseline, args.baseline_out)

    records = []
    for row in scan.table.itertuples(index=False):
        records.append(make_record(
            "conjecture", {"M": args.m, "N": args.n, "2K": 2 * args.k, "p": row.p},
            value=row.delta, bound=args.target_delta, witness=[int(i) for i in row.worst_support.split()],
            mode="exhaustive",
        ))
    for row in scan.baseline.itertuples(index=False):
        records.append(make_record(
            "baseline", {"M": args.m, "N": args.n, "2K": 2 * args.k},
            value=row.delta, mode="exhaustive", seed=row.seed,
        ))
    records.append(make_record(
        "conjecture-summary", {"quantiles": scan.summary.to_dict(orient="records"),
                               "primes": len(scan.table)},
        value=scan.fraction_meeting_target, bound=args.target_delta, mode="descriptive",
    ))
    return records


def cmd_code_convert(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Conversión entre códigos lineales y conjuntos ε-sesgados."""
    records = []
    if args.code:
        code = read_code(args.code)
        eps = None if args.eps is None else Fraction(args.eps)
        biased, eps_star = code_to_biased(code, eps)
        if args.out:
            write_text(dumps_biased(biased), args.out)
        records.append(make_record(
            "code-to-biased", {"n": code.n, "q": code.q, "eps": None if eps is None else str(eps)},
            value=str(eps_star), passed=True,
        ))
    else:
        if args.biased:
            with open(args.biased, encoding="utf-8") as f:
                biased = loads_biased(f.read())
        else:
            p, h, n = args.legendre
            biased = legendre_biased_set(p, h, n)
        conversion = biased_to_code(biased)
        if conversion.degenerate:
            records.append(make_record(
                "biased-to-code", {"n": biased.n, "q": biased.q},
                value=str(conversion.certificate_bias), witness=conversion.certificate,
                mode="degenerate",
            ))
        else:
            if args.out:
                write_code(conversion.code, args.out)
            records.append(make_record(
                "biased-to-code", {"n": biased.n, "q": biased.q},
                value=str(conversion.eps_star), passed=True,
            ))
    check = welch_entropy_check(biased)
    records.append(make_record(
        "welch-entropy", {"n": check.n, "q": check.q, "eps_star": str(check.eps_star),
                          "rhs": str(check.rhs), "corollary_applies": check.corollary_applies,
                          "corollary_holds": check.corollary_holds,
                          "entropy_bits": check.entropy_bits, "entropy_bound": check.entropy_bound},
        value=str(check.lhs), bound=float(check.rhs), passed=check.holds,
    ))
    return records


def cmd_recover(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Recupera una señal dispersa conocida a partir de y = Φ x."""
    matrix = read_matrix(args.matrix)
    values = args.values if args.values else [1.0] * len(args.support)
    if len(values) != len(args.support):
        raise ValueError("--values debe tener la misma longitud que --support")
    pairs = sorted(zip(args.support, values))
    support = [i for i, _ in pairs]
    values = [v for _, v in pairs]
    if any(not 0 <= i < matrix.cols for i in support) or len(set(support)) != len(support):
        raise ValueError(f"Soporte inválido para N={matrix.cols}: {support}")
    x = np.zeros(matrix.cols)
    x[support] = values
    y = matrix.dense() @ x
    K = args.k if args.k is not None else len(support)
    config.update(k=K)
    params = {"M": matrix.rows, "N": matrix.cols, "K": K, "noise_tol": args.noise_tol}
    try:
        result = omp_recover(matrix, y, K, noise_tol=args.noise_tol)
    except RecoveryError as e:
        return [make_record("recover", params, passed=False, witness=e.partial_support, mode="omp")]
    error = float(np.max(np.abs(result.dense() - x))) if matrix.cols else 0.0
    params["residual_norms"] = list(result.residual_norms)
    return [make_record(
        "recover", params, value=error, bound=1e-8,
        passed=list(result.support) == [i for i, v in zip(support, values) if v != 0] and error <= 1e-8,
        witness=result.support, mode="omp",
    )]


def cmd_sweep(args: argparse.Namespace, config: Dict[str, Any]) -> List[Record]:
    """Tabla de tasas de éxito de OMP por K."""
    table = phase_sweep(args.ensemble, args.m, args.n, range(args.k_min, args.k_max + 1),
                        args.trials, args.seed, workers=args.workers, p=args.p, H=args.h)
    config.update(family=table.attrs["ensemble"])
    if args.out:
        save_table(table, args.out)
    return [
        make_record("sweep", {"ensemble": row.ensemble, "K": row.K, "trials": row.trials,
                              "note": row.note},
                    value=row.success_rate, mode="descriptive", seed=args.seed)
        for row in table.itertuples(index=False)
    ]


COMMANDS: Dict[str, Callable[[argparse.Namespace, Dict[str, Any]], List[Record]]] = {
    "plan": cmd_plan,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "bias": cmd_bias,
    "charsum": cmd_charsum,
    "scan-conjecture": cmd_scan_conjecture,
    "code-convert": cmd_code_convert,
    "recover": cmd_recover,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# Argumentos
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Formato del informe")
    common.add_argument("--report", help="Archivo donde guardar también el informe")
    common.add_argument("--db", help="URL de SQLAlchemy para guardar la ejecución")
    common.add_argument("--workers", type=int, default=VERIFY_CONFIG["workers"], help="Hilos de trabajo")

    parser = argparse.ArgumentParser(description="Matrices RIP basadas en símbolos de Legendre")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", parents=[common], help="Planificar M, H y p_min")
    p.add_argument("--n", type=int, required=True, help="Columnas N")
    p.add_argument("--k", type=int, required=True, help="Esparcidad K")
    p.add_argument("--delta", type=float, required=True, help="Constante RIP objetivo")
    p.add_argument("--m", type=int, help="Sustituir M")
    p.add_argument("--h", type=int, help="Sustituir H")
    p.add_argument("--c1", type=int, help="Constante de planificación")

    p = sub.add_parser("gen", parents=[common], help="Construir una matriz RIPM v1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, help="Bits de la semilla")
    seed_group = p.add_mutually_exclusive_group()
    seed_group.add_argument("--x", help="Semilla X en hexadecimal")
    seed_group.add_argument("--seed", type=int, default=0, help="Semilla Philox para generar X")
    seed_group.add_argument("--deterministic", action="store_true", help="Matriz determinista conjeturada")
    p.add_argument("--prime", type=parse_prime, default="auto", help="Primo o 'auto'")
    p.add_argument("--out", required=True, help="Archivo de salida")

    p = sub.add_parser("verify", parents=[common], help="Verificar una matriz")
    p.add_argument("--matrix", required=True)
    p.add_argument("--checks", nargs="+", choices=VERIFY_CHECKS, default=list(VERIFY_CHECKS))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", choices=[m.value for m in RipMode], default=RipMode.EXHAUSTIVE.value)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=VERIFY_CONFIG["support_budget"])
    p.add_argument("--target-delta", type=float, default=1.0)

    p = sub.add_parser("bias", parents=[common], help="Sesgo del flujo de símbolos")
    p.add_argument("--p", type=parse_int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--i", type=int, nargs="+", required=True, help="Conjunto de índices I (>= 1)")
    p.add_argument("--columns", type=int, help="N para la cota 4 N^2 2^(-H/3)")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("charsum", parents=[common], help="Cota de sumas de caracteres")
    p.add_argument("--p", type=parse_int, required=True)
    p.add_argument("--offsets", type=int, nargs="+")
    p.add_argument("--t", type=int)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("scan-conjecture", parents=[common], help="Barrido de la matriz determinista")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p-min", type=parse_int, default=3)
    p.add_argument("--p-max", type=parse_int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--target-delta", type=float, default=DEFAULT_TARGET_DELTA)
    p.add_argument("--baseline-seeds", type=int, default=20)
    p.add_argument("--budget", type=int, default=VERIFY_CONFIG["support_budget"])
    p.add_argument("--out", help="CSV por primo")
    p.add_argument("--baseline-out", help="CSV de la línea base")

    p = sub.add_parser("code-convert", parents=[common], help="Códigos lineales y conjuntos sesgados")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--code", help="Generadora CODE v1 a convertir en conjunto sesgado")
    source.add_argument("--biased", help="Conjunto BIASED v1 a convertir en código")
    source.add_argument("--legendre", type=parse_int, nargs=3, metavar=("P", "H", "N"),
                        help="Conjunto de Legendre a convertir en código")
    p.add_argument("--eps", help="Ventana de pesos, como fracción")
    p.add_argument("--out")

    p = sub.add_parser("recover", parents=[common], help="Recuperación OMP")
    p.add_argument("--matrix", required=True)
    p.add_argument("--support", type=int, nargs="+", required=True)
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--k", type=int)
    p.add_argument("--noise-tol", type=float, default=0.0)

    p = sub.add_parser("sweep", parents=[common], help="Transición de fase de OMP")
    p.add_argument("--ensemble", choices=EnsembleFactory().names, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-min", type=int, default=0)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=parse_int)
    p.add_argument("--h", type=int)
    p.add_argument("--out", help="CSV de resultados")
    return parser


def validate_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Errores de uso detectables antes de ejecutar (código de salida 2)."""
    if args.command == "plan":
        if not 0 < args.delta <= 1:
            parser.error(f"--delta debe estar en (0, 1]: {args.delta}")
        if args.n < 2:
            parser.error(f"--n debe ser >= 2: {args.n}")
        if not 1 <= args.k <= args.n:
            parser.error(f"se requiere 1 <= K <= N (K={args.k}, N={args.n})")
    if args.command == "gen" and args.deterministic and args.h is not None:
        parser.error("--h no se usa con --deterministic")
    if args.workers < 1:
        parser.error(f"--workers debe ser >= 1: {args.workers}")


def resolved_config(args: argparse.Namespace) -> Dict[str, Any]:
    """Configuración completa de la ejecución, sin las opciones de salida."""
    config = {k: v for k, v in vars(args).items() if k not in ("format", "report", "db", "workers")}
    if args.command == "plan" and config.get("c1") is None:
        config.pop("c1")
    return config


def store_run(url: str, command: str, config: Dict[str, Any], records: List[Record]) -> None:
    try:
        db_manager = DatabaseManager(url)
        db_manager.create_tables()
        db_manager.insert_run(command, config, records)
    except SQLAlchemyError as e:
        logger.error(f"No se pudo guardar la ejecución: {str(e)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Función principal del programa."""
    parser = build_parser()
    args = parser.parse_args(argv)
    validate_args(parser, args)

    # Configurar logging
    setup_logging()

    config = resolved_config(args)
    try:
        records = COMMANDS[args.command](args, config)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as e:
        logger.debug(f"Error en {args.command}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1

    report = render(config, records, args.format)
    sys.stdout.write(report)
    if args.report:
        write_text(report, args.report)
    if args.db:
        store_run(args.db, args.command, config, records)

    failures = hard_failures(records)
    for record in failures:
        logger.error(f"Comprobación fallida: {record['check']} ({record['params']})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
