"""
Модуль обработчиков команд командной строки.
Включает анализ фрейма, построение квазидвойственной системы,
вычисления по спектральной модели и сертификацию α.
"""

import logging
from argparse import Namespace
from dataclasses import dataclass
from typing import Any, Awaitable, Callable, Dict

from config.config import VERSION, Config
from core.errors import ParseError, UsageError
from core.models import Frame, UINormSpec
from core.schemas import Report
from services.certify.certification_service import CertificationService
from services.frames.frame_service import (
    canonical_dual,
    coisometry_residual,
    excess,
    frame_bounds,
    gramian_spectrum,
    is_parseval,
)
from services.quasidual.quasidual import (
    alpha,
    construct,
    optimal_spectrum_via_r,
    parseval_dual_exists,
    reconstruction_error,
    tight_dual_bound,
    worst_case_error,
)
from services.spectral.spectral import (
    evaluate,
    frame_bounds_model,
    polar_distances,
    u_n,
)
from utils.formatters import (
    format_norm,
    format_optional,
    format_spectrum,
    format_tolerances,
    format_vectors,
    jsonable,
)
from utils.frame_io import read_frame, read_model, write_frame
from utils.validators import (
    validate_input_path,
    validate_norm_flag,
    validate_output_path,
    validate_samples,
    validate_seed,
)

# Настраиваем логгер
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 4


@dataclass
class CommandResult:
    """Отчет команды и код завершения"""
    report: Report
    exit_code: int = EXIT_OK


Handler = Callable[[Namespace, Dict[str, Any]], Awaitable[CommandResult]]


def _parse_norm(flag: str) -> UINormSpec:
    ok, error = validate_norm_flag(flag)
    if not ok:
        raise UsageError(error)
    return UINormSpec.from_flag(flag)


def _load_frame(args: Namespace) -> Frame:
    ok, error = validate_input_path(args.frame_file)
    if not ok:
        raise ParseError(error)
    return read_frame(args.frame_file, csv=getattr(args, "csv", False))


def _report(command: str, config: Config, inputs: Dict[str, Any], result: Dict[str, Any]) -> Report:
    return Report(
        command=command,
        version=VERSION,
        tolerances=format_tolerances(config.tolerances()),
        input=jsonable(inputs),
        result=jsonable(result),
    )


async def cmd_analyze(args: Namespace, data: Dict[str, Any]) -> CommandResult:
    """
    Анализ фрейма: размерности, границы, спектр Грама, существование
    парсевалевой двойственной системы, α и каноническая двойственная система
    """
    config: Config = data["config"]
    tol = config.tolerances()
    norm = _parse_norm(args.norm)
    F = _load_frame(args)

    bounds = frame_bounds(F)
    result = {
        "n": F.n,
        "m": F.m,
        "excess": excess(F),
        "frame_bounds": {"lower": bounds.lower, "upper": bounds.upper},
        "gramian_spectrum": format_spectrum(gramian_spectrum(F)),
        "parseval_dual_exists": parseval_dual_exists(F, tol),
        "is_parseval": is_parseval(F, tol),
        "coisometry_residual": coisometry_residual(F),
        "norm": norm.flag,
        "norm_name": format_norm(norm),
        "alpha": alpha(F, norm, tol),
        "tight_dual_bound": format_optional(tight_dual_bound(F, tol)),
        "canonical_dual": format_vectors(canonical_dual(F).synthesis),
    }
    return CommandResult(_report(
        "analyze", config,
        {"frame_file": args.frame_file, "norm": norm.flag, "csv": args.csv},
        result,
    ))


async def cmd_quasidual(args: Namespace, data: Dict[str, Any]) -> CommandResult:
    """
    Построение парсевалевой квазидвойственной системы X; при --out
    X записывается в файл, иначе векторы включаются в отчет
    """
    config: Config = data["config"]
    tol = config.tolerances()
    norm = _parse_norm(args.norm)
    if args.out is not None:
        ok, error = validate_output_path(args.out)
        if not ok:
            raise UsageError(error)
    F = _load_frame(args)

    constructed = construct(F, norm, tol)
    X = Frame(constructed.X)
    check = optimal_spectrum_via_r(constructed.d.lam, F.n, tol)

    result = {
        "n": F.n,
        "m": F.m,
        "norm": norm.flag,
        "d": format_spectrum(constructed.d.d),
        "r": constructed.d.r,
        "deviations": list(check.values),
        "deviations_consistent": check.consistent,
        "alpha": constructed.alpha_value,
        "reconstruction_error": reconstruction_error(F, X, norm),
        "worst_case_error": worst_case_error(F, X),
        "coisometry_residual": coisometry_residual(X),
        "parseval_dual_exists": parseval_dual_exists(F, tol),
    }
    if args.out is not None:
        write_frame(args.out, constructed.X)
        result["out"] = args.out
    else:
        result["quasidual"] = format_vectors(constructed.X)

    return CommandResult(_report(
        "quasidual", config,
        {"frame_file": args.frame_file, "norm": norm.flag, "out": args.out, "csv": args.csv},
        result,
    ))


async def cmd_spectral(args: Namespace, data: Dict[str, Any]) -> CommandResult:
    """Вычисление α, оценок, достижимости и β по спектральной модели"""
    config: Config = data["config"]
    tol = config.tolerances()
    ok, error = validate_input_path(args.model_file)
    if not ok:
        raise ParseError(error)
    model = read_model(args.model_file)

    report = evaluate(model, tol)
    bounds = frame_bounds_model(model)
    scalar_distance, polar_distance = polar_distances(model)
    result = {
        "excess": "inf" if model.infinite_excess else model.excess,
        "alpha": report.alpha,
        "attained": report.attained.value,
        "beta": report.beta,
        "branch": report.branch,
        "bounds": list(report.bounds) if report.bounds is not None else None,
        "attainment_conditions": report.attainment_conditions,
        "frame_bounds": {"lower": bounds.lower, "upper": bounds.upper},
        "polar_distances": {"scalar": scalar_distance, "polar": polar_distance},
    }
    if not model.infinite_excess:
        result["u_next"] = u_n(model, model.excess + 1)

    return CommandResult(_report("spectral", config, {"model_file": args.model_file}, result))


async def cmd_certify(args: Namespace, data: Dict[str, Any]) -> CommandResult:
    """
    Сертификация α случайными коизометриями; код завершения 4 при нарушениях
    """
    config: Config = data["config"]
    service: CertificationService = data["certification"]
    norm = _parse_norm(args.norm)
    samples = config.default_samples if args.samples is None else args.samples
    for ok, error in (validate_samples(samples), validate_seed(args.seed)):
        if not ok:
            raise UsageError(error)
    F = _load_frame(args)

    report = await service.certify(F, norm, samples, args.seed)
    result = {
        "n": F.n,
        "m": F.m,
        "norm": norm.flag,
        "samples": report.samples,
        "seed": report.seed,
        "alpha": report.alpha_claimed,
        "min_error_sampled": report.min_error_sampled,
        "refined_error": report.refined_error,
        "violations": report.violations,
        "passed": report.passed,
    }
    exit_code = EXIT_OK if report.passed else EXIT_VIOLATION
    if not report.passed:
        logger.warning(f"Certification found {report.violations} violations for norm {norm.flag}")

    return CommandResult(
        _report(
            "certify", config,
            {"frame_file": args.frame_file, "norm": norm.flag, "samples": samples,
             "seed": args.seed, "csv": args.csv},
            result,
        ),
        exit_code,
    )


def _add_frame_arguments(parser) -> None:
    parser.add_argument("frame_file", help="JSON frame file (or CSV with --csv)")
    parser.add_argument("--csv", action="store_true", help="read a real frame from CSV, one vector per row")


def register_handlers(subparsers) -> None:
    """
    Регистрация подкоманд и их обработчиков

    Args:
        subparsers: объект add_subparsers() корневого парсера
    """
    analyze = subparsers.add_parser("analyze", help="frame bounds, Gramian spectrum, Parseval dual existence")
    _add_frame_arguments(analyze)
    analyze.add_argument("--norm", default="op", help="op | s<p> | sinf | kf<k>")
    analyze.set_defaults(handler=cmd_analyze)

    quasidual = subparsers.add_parser("quasidual", help="construct a Parseval quasi-dual frame")
    _add_frame_arguments(quasidual)
    quasidual.add_argument("--norm", default="op", help="op | s<p> | sinf | kf<k>")
    quasidual.add_argument("--out", default=None, help="write the quasi-dual frame to this file")
    quasidual.set_defaults(handler=cmd_quasidual)

    spectral = subparsers.add_parser("spectral", help="evaluate alpha on a spectral model")
    spectral.add_argument("model_file", help="JSON spectral model file")
    spectral.set_defaults(handler=cmd_spectral)

    certify = subparsers.add_parser("certify", help="randomized certification of alpha")
    _add_frame_arguments(certify)
    certify.add_argument("--norm", default="op", help="op | s<p> | sinf | kf<k>")
    certify.add_argument("--samples", type=int, default=None, help="number of sampled coisometries")
    certify.add_argument("--seed", type=int, default=0, help="random seed")
    certify.set_defaults(handler=cmd_certify)
