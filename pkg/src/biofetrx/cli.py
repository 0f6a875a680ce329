"""Command-line client for the biofetrx service.

The CLI is a thin HTTP client: it loads a YAML scenario, posts it to the
service (an in-process instance by default, or a remote one via --server)
and writes the returned CSV/SVG artifacts. `serve` starts the service.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        mapping = yaml.safe_load(fh)
    if mapping is None:
        return {}
    if not isinstance(mapping, dict):
        raise SystemExit(f"config {path}: expected a YAML mapping at the top level")
    return mapping


def _client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise SystemExit(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _write(out_dir: str, name: str, text: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    target = out / name
    target.write_text(text, encoding="utf-8", newline="")
    return target


def cmd_sweep(args) -> int:
    payload = {"scenario": _load_config(args.config), "threads": args.threads,
               "mc_observable": args.observable}
    if args.trials is not None:
        payload["trials"] = args.trials
    if args.seed is not None:
        payload["seed"] = args.seed
    with _client(args.server) as client:
        body = _post(client, "/sweep", payload)
    target = _write(args.out, "sweep.csv", body["csv"])
    notes = [r["note"] for r in body["rows"] if r.get("note")]
    print(f"wrote {target} ({len(body['rows'])} points)")
    for note in notes:
        print(f"  warning: {note}", file=sys.stderr)
    return 0


def cmd_psd(args) -> int:
    payload = {"scenario": _load_config(args.config), "points": args.points,
               "svg": not args.no_svg}
    with _client(args.server) as client:
        body = _post(client, "/psd", payload)
    target = _write(args.out, "psd.csv", body["csv"])
    print(f"wrote {target}")
    if body.get("svg"):
        target = _write(args.out, "psd.svg", body["svg"])
        print(f"wrote {target}")
    for marker in body["markers"]:
        print(f"  {marker['label']}: {marker['frequency_hz']:.6g} Hz")
    return 0


def cmd_validate(args) -> int:
    payload = {"scenario": _load_config(args.config)}
    with _client(args.server) as client:
        body = _post(client, "/validate", payload)
    if body["valid"]:
        print(yaml.safe_dump(body["normalized"], sort_keys=False), end="")
        return 0
    for err in body["errors"]:
        print(f"invalid scenario: {err}", file=sys.stderr)
    return 2


def cmd_serve(args) -> int:
    import uvicorn
    uvicorn.run("biofetrx.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biofetrx",
                                     description="bioFET molecular-communication detector toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--config", metavar="PATH", help="YAML scenario file (defaults when omitted)")
        if needs_out:
            p.add_argument("--out", metavar="DIR", default=".", help="output directory")
        p.add_argument("--server", metavar="URL",
                       help="remote service URL (default: run in-process)")

    p = sub.add_parser("sweep", help="run a parameter sweep, write sweep.csv")
    common(p)
    p.add_argument("--seed", type=int, metavar="U64", help="override the master seed")
    p.add_argument("--trials", type=int, metavar="N", help="override Monte Carlo symbols per point")
    p.add_argument("--threads", type=int, default=1, metavar="N", help="parallel sweep points")
    p.add_argument("--observable", choices=("gaussian", "binomial"), default="gaussian",
                   help="TDD Monte Carlo observable construction")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("psd", help="emit model-PSD curves, write psd.csv/psd.svg")
    common(p)
    p.add_argument("--points", type=int, default=240, help="frequency grid size")
    p.add_argument("--no-svg", action="store_true", help="skip SVG rendering")
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("validate", help="validate a scenario and print the normalized form")
    common(p, needs_out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
