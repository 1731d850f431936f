"""Command-line front end.

``serve`` runs the HTTP service; ``players``, ``similar``, and ``matchup``
are thin clients that hit a running service and print its JSON; ``validate``
runs the simulation harness locally; ``demo-data`` writes a synthetic
tracking CSV so everything can be tried without real data.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _add_client_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--url", default="http://127.0.0.1:8710", help="service base URL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spraychart")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--data-dir", default=None, help="directory of tracking CSVs")
    serve.add_argument("--season", type=int, default=None, help="restrict to one season")
    serve.add_argument("--cache-dir", default=None, help="profile cache directory")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--stuff-ratio", type=float, default=None, dest="pitcher_stuff_ratio")
    serve.add_argument("--launch-ratio", type=float, default=None, dest="batter_launch_ratio")
    serve.add_argument("--min-pitcher-bip", type=int, default=None)
    serve.add_argument("--min-batter-bip", type=int, default=None)
    serve.add_argument("--pool-size", type=int, default=None)
    serve.add_argument("--grid-nx", type=int, default=None)
    serve.add_argument("--grid-ny", type=int, default=None)

    players = sub.add_parser("players", help="list profiled players")
    _add_client_args(players)

    similar = sub.add_parser("similar", help="comparable-player pool")
    _add_client_args(similar)
    similar.add_argument("player_id")
    similar.add_argument("--role", choices=("pitcher", "batter"), required=True)
    similar.add_argument("--season", type=int, default=None)
    similar.add_argument("--ratio", type=float, default=None)
    similar.add_argument("--vs-hand", choices=("L", "R"), default=None)
    similar.add_argument("--opponent-id", default=None)
    similar.add_argument("--top-n", type=int, default=10)

    matchup = sub.add_parser("matchup", help="blended matchup density and metrics")
    _add_client_args(matchup)
    matchup.add_argument("batter_id")
    matchup.add_argument("pitcher_id")
    matchup.add_argument("--season", type=int, default=None)
    matchup.add_argument("--stuff-ratio", type=float, default=None)
    matchup.add_argument("--launch-ratio", type=float, default=None)
    matchup.add_argument("--no-components", action="store_true", help="omit component surfaces")
    matchup.add_argument("--out", default=None, help="write the full JSON body to this file")

    validate = sub.add_parser("validate", help="run the simulation study locally")
    validate.add_argument("--replications", type=int, default=200)
    validate.add_argument("--scenario", default=None, help="run just one scenario by name")
    validate.add_argument("--json-out", default=None)
    validate.add_argument("--csv-out", default=None)
    validate.add_argument("--per-node", action="store_true", help="include per-node error fields")

    demo = sub.add_parser("demo-data", help="write a synthetic tracking CSV")
    demo.add_argument("out", help="output CSV path")
    demo.add_argument("--pitches", type=int, default=10_000)
    demo.add_argument("--pitchers", type=int, default=12)
    demo.add_argument("--batters", type=int, default=16)
    demo.add_argument("--seasons", type=int, nargs="+", default=[2024])
    demo.add_argument("--seed", type=int, default=7)

    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from spraychart.service.app import create_app
    from spraychart.service.config import ServiceConfig

    config = ServiceConfig.from_sources(
        data_dir=args.data_dir,
        season=args.season,
        cache_dir=args.cache_dir,
        host=args.host,
        port=args.port,
        pitcher_stuff_ratio=args.pitcher_stuff_ratio,
        batter_launch_ratio=args.batter_launch_ratio,
        min_pitcher_bip=args.min_pitcher_bip,
        min_batter_bip=args.min_batter_bip,
        pool_size=args.pool_size,
        grid_nx=args.grid_nx,
        grid_ny=args.grid_ny,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _get(url: str, path: str, params: dict) -> dict:
    import httpx

    resp = httpx.get(url.rstrip("/") + path, params=params, timeout=120.0)
    body = resp.json()
    if resp.status_code != 200:
        print(json.dumps(body, indent=2), file=sys.stderr)
        raise SystemExit(1)
    return body


def _cmd_players(args: argparse.Namespace) -> int:
    body = _get(args.url, "/players", {})
    for row in body["players"]:
        roles = "/".join(row["roles"])
        seasons = ",".join(str(s) for s in row["seasons"])
        print(f"{row['player_id']}  {row['name']:<24} {roles:<14} seasons={seasons} bip={row['bip']}")
    return 0


def _cmd_similar(args: argparse.Namespace) -> int:
    params = {"player_id": args.player_id, "role": args.role, "top_n": args.top_n}
    for key in ("season", "ratio", "vs_hand", "opponent_id"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    body = _get(args.url, "/similar", params)
    print(f"# {args.role} pool for {body['player_id']} (season {body['season']})")
    for row in body["pool"]:
        print(
            f"{row['player_id']}  {row['name']:<24} score={row['score']:.4f} "
            f"weight={row['weight']:.4f} n={row['n_matchup']}"
        )
    return 0


def _cmd_matchup(args: argparse.Namespace) -> int:
    import httpx

    payload = {
        "batter_id": args.batter_id,
        "pitcher_id": args.pitcher_id,
        "include_components": not args.no_components,
    }
    if args.season is not None:
        payload["season"] = args.season
    if args.stuff_ratio is not None:
        payload["pitcher_stuff_ratio"] = args.stuff_ratio
    if args.launch_ratio is not None:
        payload["batter_launch_ratio"] = args.launch_ratio
    resp = httpx.post(args.url.rstrip("/") + "/matchup", json=payload, timeout=300.0)
    body = resp.json()
    if resp.status_code != 200:
        print(json.dumps(body, indent=2), file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(json.dumps(body, indent=2))
    if body["status"] != "ok":
        print(f"insufficient data: {body.get('message', '')}", file=sys.stderr)
        return 2
    w = body["weights"]
    m = body["metrics"]
    print(f"{body['batter_name']} vs {body['pitcher_name']} (season {body['season']})")
    print(
        f"weights: direct={w['lambda']:.4f} (n={w['n']:.0f})  "
        f"pitcher-pool={w['lambda_p']:.4f} (n_p={w['n_p']:.1f})  "
        f"batter-pool={w['lambda_b']:.4f} (n_b={w['n_b']:.1f})"
    )
    print(f"xBABIP={m['xBABIP']:.4f}  xBsCON={m['xBsCON']:.4f}")
    d = m["display"]
    print(f"per 100 BIP: 1B={d['singles']} 2B={d['doubles']} 3B={d['triples']} HR={d['hr']}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    from spraychart.validation import default_scenarios, run_mse_trial, write_report_csv, write_report_json

    scenarios = default_scenarios()
    if args.scenario is not None:
        if args.scenario not in scenarios:
            print(f"unknown scenario {args.scenario!r}", file=sys.stderr)
            return 1
        scenarios = {args.scenario: scenarios[args.scenario]}
    reports = []
    for scenario in scenarios.values():
        report = run_mse_trial(scenario, replications=args.replications)
        reports.append(report)
        verdict = "blended wins" if report.blended_wins_at_2se else "no win at 2 SE"
        lam = "/".join(f"{v:.3f}" for v in report.lambda_mean)
        print(
            f"{scenario.name}: mse_blended={report.mse_blended:.3e} "
            f"mse_direct={report.mse_direct:.3e} diff={report.mean_diff:.3e} "
            f"(se={report.se_diff:.3e}) lambda_mean={lam} [{verdict}]"
        )
    if args.json_out:
        write_report_json(reports, args.json_out, include_per_node=args.per_node)
    if args.csv_out:
        write_report_csv(reports, args.csv_out)
    return 0


def _cmd_demo_data(args: argparse.Namespace) -> int:
    from spraychart.synthdata import write_dataset

    frame = write_dataset(
        args.out,
        n_pitches=args.pitches,
        n_pitchers=args.pitchers,
        n_batters=args.batters,
        seasons=tuple(args.seasons),
        seed=args.seed,
    )
    print(f"wrote {len(frame)} pitches to {args.out}")
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "players": _cmd_players,
    "similar": _cmd_similar,
    "matchup": _cmd_matchup,
    "validate": _cmd_validate,
    "demo-data": _cmd_demo_data,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
