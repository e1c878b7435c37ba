"""Command-line client for the cell-switching service.

Subcommands map one-to-one onto service endpoints and execute the same
handlers in-process by default; pass --server to talk to a running
instance instead. Outputs land in the --out directory: sweep.csv,
compare.csv or demo.txt.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import httpx
from pydantic import BaseModel, ValidationError

from .harness import DEFAULT_DEMO_SEED, SweepSpec
from .objectives import Formulation
from .scenario import ScenarioConfig
from .service import handlers, schemas
from .solvers import SearchSpaceError


def _floats_csv(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _ints_csv(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _weights(text: str) -> tuple[float, float, float]:
    parts = _floats_csv(text)
    if len(parts) != 3:
        raise ValueError(f"--weights needs three comma-separated values, got {text!r}")
    return parts  # type: ignore[return-value]


def _load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    return ScenarioConfig.model_validate_json(Path(path).read_text())


def _post(server: str, route: str, request: BaseModel, response_cls):
    with httpx.Client(base_url=server, timeout=600.0) as client:
        reply = client.post(route, json=json.loads(request.model_dump_json()))
    if reply.status_code != 200:
        detail = reply.json().get("detail", reply.text)
        raise RuntimeError(f"server returned {reply.status_code}: {detail}")
    return response_cls.model_validate(reply.json())


def _dispatch(args, route: str, request: BaseModel, response_cls, local_handler):
    if args.server:
        return _post(args.server, route, request, response_cls)
    return local_handler(request)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_gnuplot(csv_text: str, path: Path) -> None:
    reader = csv.reader(io.StringIO(csv_text))
    rows = list(reader)
    lines = ["# " + " ".join(rows[0])]
    for row in rows[1:]:
        lines.append(" ".join(cell if cell != "" else "-" for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    spec = SweepSpec(
        bel_values=_floats_csv(args.bel_list),
        user_counts=_ints_csv(args.users_list),
        formulations=(Formulation(args.formulation),),
        wsm_weight_sets=(_weights(args.weights),) if args.weights else SweepSpec().wsm_weight_sets,
        solver=args.solver,
        seeds=(args.seed if args.seed is not None else config.seed,),
        snapshots=args.snapshots,
    )
    resp = _dispatch(
        args, "/sweep", schemas.SweepRequest(spec=spec, config=config),
        schemas.SweepResponse, handlers.handle_sweep,
    )
    out = _out_dir(args)
    csv_path = out / "sweep.csv"
    csv_path.write_text(resp.csv_text)
    if args.gnuplot:
        _write_gnuplot(resp.csv_text, out / "sweep.dat")
    print(f"wrote {resp.n_rows} rows to {csv_path}")
    return 0


def _cmd_compare(args) -> int:
    config = _load_config(args.config)
    spec = SweepSpec(
        user_counts=_ints_csv(args.users_list),
        seeds=(args.seed if args.seed is not None else config.seed,),
        snapshots=args.snapshots,
    )
    resp = _dispatch(
        args, "/compare", schemas.CompareRequest(spec=spec, config=config),
        schemas.CompareResponse, handlers.handle_compare,
    )
    out = _out_dir(args)
    csv_path = out / "compare.csv"
    csv_path.write_text(resp.csv_text)
    print(f"wrote {resp.n_rows} rows to {csv_path}")
    return 0


def _cmd_demo(args) -> int:
    config = _load_config(args.config) if args.config else None
    seed = args.seed if args.seed is not None else DEFAULT_DEMO_SEED
    resp = _dispatch(
        args, "/demo", schemas.DemoRequest(seed=seed, config=config),
        schemas.DemoResponse, handlers.handle_demo,
    )
    out = _out_dir(args)
    (out / "demo.txt").write_text(resp.report_text + "\n")
    print(resp.report_text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellswitch",
        description="Energy-aware cell switching: sweeps, solver comparison and demo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="scenario config JSON file")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=None, help="scenario seed")
        p.add_argument("--server", default=None, help="base URL of a running service")

    p_sweep = sub.add_parser("sweep", help="run the BEL / user-density sweep")
    common(p_sweep)
    p_sweep.add_argument("--solver", choices=("exhaustive", "greedy", "ga"), default="greedy")
    p_sweep.add_argument("--formulation", choices=("efm", "wsm", "ecm"), default="efm")
    p_sweep.add_argument("--weights", default=None, help="wsm weights a,b,v")
    p_sweep.add_argument("--bel-list", default="0,5,10,15,20,25,30",
                         help="comma-separated BEL values in dB")
    p_sweep.add_argument("--users-list", default="200,400,600,800,1000,1200",
                         help="comma-separated user counts")
    p_sweep.add_argument("--snapshots", type=int, default=10)
    p_sweep.add_argument("--gnuplot", action="store_true",
                         help="also write a gnuplot-friendly sweep.dat")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cmp = sub.add_parser("compare", help="benchmark the three solvers under ecm")
    common(p_cmp)
    p_cmp.add_argument("--users-list", default="200,400,600,800,1000,1200")
    p_cmp.add_argument("--snapshots", type=int, default=10)
    p_cmp.set_defaults(func=_cmd_compare)

    p_demo = sub.add_parser("demo", help="run the 3-SBS/10-user switch-off walkthrough")
    common(p_demo)
    p_demo.set_defaults(func=_cmd_demo)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError, SearchSpaceError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
