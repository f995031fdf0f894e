"""
命令行入口 bm-sync

子命令：gen / solve / certify / oracle / conditions / adversary / sweep / verify。
报告为 JSON（键顺序固定），给定 --report 时写文件，否则输出到标准输出。
退出码：0 成功，1 用法错误，2 不变量或复核失败，3 I/O 错误。
"""
import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from .certificates import brute_force_opt, certify, check_exact_recovery
from .conditions import evaluate_instance
from .config import AppConfig, ConfigManager, Settings, SolverConfig, load_sweep_spec
from .errors import BmSyncError, ExitCode, InvalidParameterError, StorageError, exit_code_for
from .experiments import emit_summary, run_sweep, verify
from .instances import apply_monotone_adversary, generate, load_factor, load_instance, save_factor, save_instance
from .solver import default_rank, multi_start
from .utils.logger import get_logger, set_log_level

logger = get_logger(__name__)

MODEL_FIELDS = ("n", "sigma", "p", "q", "delta", "centering")


class _Parser(argparse.ArgumentParser):
    """参数错误按用法错误（退出码 1）处理"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise InvalidParameterError(message, field="argv")


def _jsonable(value: Any) -> Any:
    """NaN/Inf → null，numpy 标量 → Python 标量"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def emit_report(report: Dict[str, Any], path: Optional[str] = None) -> None:
    """写出 JSON 报告"""
    text = json.dumps(_jsonable(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    except OSError as e:
        raise StorageError(f"Failed to write report {path}: {e}") from e
    logger.info(f"Report written to {path}")


def _solver_config(base: SolverConfig, args: argparse.Namespace) -> SolverConfig:
    updates = {
        "max_iters": args.max_iters,
        "grad_tol": args.grad_tol,
        "curvature_tol": args.curv_tol,
    }
    data = base.model_dump()
    data.update({k: v for k, v in updates.items() if v is not None})
    return SolverConfig(**data)


def cmd_gen(args: argparse.Namespace, app: AppConfig) -> int:
    params: Dict[str, Any] = {"model": args.model}
    for name in MODEL_FIELDS:
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    inst = generate(params, args.seed)
    save_instance(inst, args.out)
    emit_report({**inst.to_dict(), "out": str(args.out)}, args.report)
    return ExitCode.SUCCESS


def cmd_solve(args: argparse.Namespace, app: AppConfig) -> int:
    inst = load_instance(args.input)
    r = args.r if args.r is not None else default_rank(inst.n)
    starts = args.starts if args.starts is not None else app.starts
    cfg = _solver_config(app.solver, args)

    result = multi_start(inst.cost, r, cfg, starts=starts, seed=args.seed)
    best = result.best
    if args.y_out:
        save_factor(best.point, args.y_out, metadata={"seed": args.seed, "r": r, "starts": starts})

    report: Dict[str, Any] = {
        "r": r,
        "starts": starts,
        "seed": args.seed,
        "best_index": result.best_index,
        "best": best.to_dict(),
        "start_objectives": [res.objective_value for res in result.results],
        "start_statuses": [res.status.value for res in result.results],
    }
    if inst.truth is not None:
        report["recovery"] = check_exact_recovery(best.point, inst.truth).to_dict()
    emit_report(report, args.report)
    return ExitCode.SUCCESS


def cmd_certify(args: argparse.Namespace, app: AppConfig) -> int:
    inst = load_instance(args.input)
    Y = load_factor(args.y)
    if Y.n != inst.n:
        raise InvalidParameterError(f"factor has {Y.n} rows, instance has n = {inst.n}", field="y")
    report: Dict[str, Any] = {"certificate": certify(inst.cost, Y, dense_limit=app.solver.dense_limit).to_dict()}
    if inst.truth is not None:
        report["recovery"] = check_exact_recovery(Y, inst.truth).to_dict()
    emit_report(report, args.report)
    return ExitCode.SUCCESS


def cmd_oracle(args: argparse.Namespace, app: AppConfig) -> int:
    inst = load_instance(args.input)
    labels, value = brute_force_opt(inst.cost)
    report: Dict[str, Any] = {
        "n": inst.n,
        "value": value,
        "labels": [int(v) for v in labels.entries],
    }
    if inst.truth is not None:
        report["matches_truth"] = labels.equals_up_to_sign(inst.truth)
    emit_report(report, args.report)
    return ExitCode.SUCCESS


def cmd_conditions(args: argparse.Namespace, app: AppConfig) -> int:
    inst = load_instance(args.input)
    r = args.r if args.r is not None else default_rank(inst.n)
    report = evaluate_instance(inst, r).to_dict()
    emit_report({"r": r, **report}, args.report)
    return ExitCode.SUCCESS


def cmd_adversary(args: argparse.Namespace, app: AppConfig) -> int:
    inst = apply_monotone_adversary(load_instance(args.input), args.strength, args.density, args.seed)
    save_instance(inst, args.out)
    emit_report({**inst.to_dict(), "out": str(args.out)}, args.report)
    return ExitCode.SUCCESS


def cmd_sweep(args: argparse.Namespace, app: AppConfig) -> int:
    spec = load_sweep_spec(args.spec)
    jobs = args.jobs if args.jobs is not None else app.jobs
    result = run_sweep(spec, out_dir=args.out, jobs=jobs, resume=args.resume)
    summary = emit_summary(result)
    if not summary.empty:
        logger.info("Per-cell recovery frequencies:\n" + summary.to_string(index=False))
    return ExitCode.SUCCESS


def cmd_verify(args: argparse.Namespace, app: AppConfig) -> int:
    report = verify(args.dir)
    emit_report({"checked": report.checked, "mismatches": report.mismatches, "ok": report.ok},
                args.report)
    return ExitCode.SUCCESS if report.ok else ExitCode.VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bm-sync", description="Burer–Monteiro Z2 synchronization experiments")
    parser.add_argument("--log-level", default=None, help="DEBUG / INFO / WARNING / ERROR")
    parser.add_argument("--config", default=None, help="application config file (YAML or JSON)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--model", required=True, choices=["gaussian", "erbern", "sbm"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--centering", choices=["mean_estimate", "known_pq"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("solve", help="run the Riemannian ascent from one or more starts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--grad-tol", type=float)
    p.add_argument("--curv-tol", type=float)
    p.add_argument("--y-out", help="save the best factor for certify --y")
    p.add_argument("--report")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("certify", help="certify a saved factor")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("oracle", help="brute-force optimum (n <= 22)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("conditions", help="evaluate the matching deterministic condition")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_conditions)

    p = sub.add_parser("adversary", help="apply a monotone adversary")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--strength", type=float, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_adversary)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="re-check recorded recoveries from saved artifacts")
    p.add_argument("--dir", required=True)
    p.add_argument("--report")
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主入口函数"""
    try:
        args = build_parser().parse_args(argv)
        settings = Settings()
        set_log_level(args.log_level or settings.log_level)

        app = ConfigManager(args.config or settings.config_path).get_config()
        if settings.jobs is not None:
            app = app.model_copy(update={"jobs": settings.jobs})
        return args.handler(args, app)

    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return ExitCode.USAGE
    except (BmSyncError, ValidationError, OSError, ValueError) as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e}")
        return code


if __name__ == "__main__":
    sys.exit(main())
