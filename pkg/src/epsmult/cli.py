"""Thin-client CLI: send a session file to the service and write reports.

Without ``--server`` the service app runs in-process over an ASGI
transport, so no socket is needed; with ``--server URL`` the same request
goes to a remote instance.  ``--serve`` starts the HTTP service.

Exit codes: 0 success, 2 parse/input error, 3 computation error,
4 acceptance mismatch in reproduce-example.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epsmult",
        description="Exact monomial-ideal experiments over affine semigroup rings",
    )
    parser.add_argument("--session", metavar="FILE", help="session file to run")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", metavar="DIR", help="directory for report files")
    parser.add_argument("--mmax", type=int, help="default sample depth for commands")
    parser.add_argument("--nmax", type=int, help="default outer depth for commands")
    parser.add_argument("--bound", type=int, help="truncation-window override")
    parser.add_argument("--seed", type=int,
                        help="seed, used only by randomized property suites")
    parser.add_argument("--server", metavar="URL",
                        help="send the session to a running service")
    parser.add_argument("--serve", action="store_true", help="start the HTTP service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    # No --server: drive the ASGI app in-process through the same HTTP
    # request path (routing, validation, serialization), no socket needed.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    return TestClient(app)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.serve:
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if not args.session:
        parser.print_usage(sys.stderr)
        print("epsmult: error: --session FILE is required", file=sys.stderr)
        return 2
    path = Path(args.session)
    if not path.is_file():
        print(f"epsmult: error: no session file {path}", file=sys.stderr)
        return 2

    payload = {"session": path.read_text(encoding="utf-8"), "format": args.format}
    for key in ("mmax", "nmax", "bound", "seed"):
        value = getattr(args, key)
        if value is not None:
            payload[key] = value

    with _client(args.server) as client:
        response = client.post("/session/run", json=payload)
    response.raise_for_status()
    data = response.json()

    if data.get("error"):
        print(json.dumps(data["error"], sort_keys=True), file=sys.stderr)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for report in data["reports"]:
            (out_dir / report["filename"]).write_text(
                report["content"], encoding="utf-8"
            )
    else:
        for report in data["reports"]:
            sys.stdout.write(f"# report: {report['filename']}\n")
            sys.stdout.write(report["content"])
    return int(data["exit_code"])


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
