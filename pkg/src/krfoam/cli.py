"""Command-line client for the report service.

By default the service runs in-process (no network); pass --server to talk to
a remote instance.  Output is deterministic JSON: same request, same bytes.

Exit codes: 0 success, 1 computation error, 2 parse/usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Dict, List, Optional

import httpx

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_PARSE = 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="krfoam",
        description="Equivariant link homology reports (homology, sl2 structure, "
                    "s-invariant, MOY polynomial, p-differential slash homology).")
    p.add_argument("--n", type=int, default=2, help="number of matrix-factorization colors N")
    p.add_argument("--field", default="q", help="'q' (rationals) or 'fp:<p>' (p odd prime)")
    p.add_argument("--t1", default="1/2", help="first twist parameter, exact rational a/b")
    p.add_argument("--t2", default="1/2", help="second twist parameter, exact rational a/b")
    p.add_argument("--qmin", type=int, default=None, help="(reserved) lower q window bound")
    p.add_argument("--qmax", type=int, default=9, help="upper q window bound for reports")
    p.add_argument("--framing", default="framed", choices=["framed", "unframed"])
    p.add_argument("--report", default="homology,sl2",
                   help="comma-separated: homology,sl2,s,pdg_e,pdg_f,moy,invariance-suite")
    p.add_argument("--pd", action="append", default=[],
                   help="PD code: a file path, or literal text like 'X[1,3,2,4] X[3,1,4,2]'; repeatable")
    p.add_argument("--braid", action="append", default=[],
                   help="braid word like 's1 s-2 s1'; closure is taken; repeatable")
    p.add_argument("--dot", action="append", default=[],
                   help="green dot 'kind:mult:family,pos,level', e.g. hollow:1:a,0,0; repeatable")
    p.add_argument("--json", dest="json_out", default=None, help="write output to this file")
    p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    return p


def _dots_payload(specs: List[str]) -> List[Dict[str, object]]:
    out = []
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad --dot {spec!r} (want kind:mult:family,pos,level)")
        kind, mult, arc_text = parts
        arc = arc_text.split(",")
        if len(arc) != 3:
            raise ValueError(f"bad --dot arc {arc_text!r}")
        out.append({"kind": kind, "mult": mult, "arc": [arc[0], int(arc[1]), int(arc[2])]})
    return out


def _requests_from_args(args) -> List[Dict[str, object]]:
    reports = [r.strip() for r in args.report.split(",") if r.strip()]
    base: Dict[str, object] = {
        "n": args.n, "field": args.field, "t1": args.t1, "t2": args.t2,
        "qmin": args.qmin, "qmax": args.qmax, "framing": args.framing,
        "reports": reports, "dots": _dots_payload(args.dot),
    }
    items: List[Dict[str, object]] = []
    for word in args.braid:
        items.append({**base, "braid": word})
    for pd in args.pd:
        text = pd
        if os.path.isfile(pd):
            with open(pd, "r", encoding="utf-8") as fh:
                text = fh.read()
        items.append({**base, "pd": text})
    if not items and reports == ["invariance-suite"]:
        items.append(dict(base))
    if not items:
        raise ValueError("no diagram given (use --braid or --pd)")
    return items


async def _post_all(payloads: List[Dict[str, object]], server: Optional[str]):
    if server:
        transport = None
        base_url = server.rstrip("/")
    else:
        from .service import app
        transport = httpx.ASGITransport(app=app)
        base_url = "http://krfoam.local"
    async with httpx.AsyncClient(transport=transport, base_url=base_url,
                                 timeout=300.0) as client:
        out = []
        for payload in payloads:
            resp = await client.post("/v1/report", json=payload)
            out.append((resp.status_code, resp.json()))
        return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        payloads = _requests_from_args(args)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    responses = asyncio.run(_post_all(payloads, args.server))

    items = []
    exit_code = EXIT_OK
    for status, body in responses:
        if status == 200:
            items.append(body)
        else:
            detail = body.get("detail", {}) if isinstance(body, dict) else {}
            kind = detail.get("kind", "compute") if isinstance(detail, dict) else "compute"
            message = detail.get("message", str(body)) if isinstance(detail, dict) else str(body)
            items.append({"schema": 1, "error": {"kind": kind, "message": message}})
            if kind == "parse":
                exit_code = EXIT_PARSE
            elif exit_code == EXIT_OK:
                exit_code = EXIT_COMPUTE

    doc = items[0] if len(items) == 1 else {"schema": 1, "batch": items}
    text = json.dumps(doc, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
