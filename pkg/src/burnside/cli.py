"""Command line client.

Talks to the HTTP service: in process through an ASGI transport by default,
or to a running server with --server.  The client owns all filesystem
access, resolving file arguments into self-contained JSON before posting,
so the service never reads paths.  Exit status: 0 success, 1 bad request
or bad input, 2 a verification that ran and failed.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

COMMANDS = (
    "basis",
    "multiply",
    "marks",
    "verify",
    "idempotents",
    "units",
    "partial",
    "verify_all",
)


class _Parser(argparse.ArgumentParser):
    # validation problems are exit 1; argparse's default of 2 means
    # "verification failed" here
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _group_spec(text: str):
    if text.endswith(".json") or os.path.sep in text:
        return _load_json(text)
    return text


def _functor_spec(text: str):
    if text.startswith("lattice:"):
        return _load_json(text[len("lattice:") :])
    if text.endswith(".json") or os.path.sep in text:
        return _load_json(text)
    return text


def _partial_spec(text: str):
    if text == "section":
        return text
    if text.startswith("file:"):
        return _load_json(text[len("file:") :])
    return _load_json(text)


def _element_spec(text: str):
    if text.lstrip("-").isdigit():
        return int(text)
    if text.startswith("{"):
        return json.loads(text)
    return _load_json(text)


def build_parser() -> argparse.ArgumentParser:
    par = _Parser(prog="burnside", description="lattice Burnside ring calculator")
    par.add_argument("--group", help="builtin name (C2, S3, D4, ...) or group JSON file")
    par.add_argument(
        "--functor",
        default="trivial",
        help="trivial | slice | conormal | lattice:<family.json>",
    )
    par.add_argument("--p", help="a prime, or 'inf'")
    par.add_argument("--partial", help="'section' or a pair-set JSON file")
    par.add_argument("--output", choices=("text", "json", "csv"), default="text")
    par.add_argument("--server", help="base URL of a running service; default in process")
    par.add_argument("--cap-order", type=int, help="refuse generated groups above this order")
    par.add_argument("--cap-rank", type=int, help="refuse unit search above this rank")
    par.add_argument("command", choices=COMMANDS)
    par.add_argument("args", nargs="*", help="multiply: two elements (index, JSON, or file)")
    return par


def _payload(ns) -> dict:
    req: dict = {"functor": _functor_spec(ns.functor)}
    if ns.group:
        req["group"] = _group_spec(ns.group)
    if ns.p:
        req["p"] = ns.p
    if ns.partial:
        req["partial"] = _partial_spec(ns.partial)
    if ns.cap_order:
        req["cap_order"] = ns.cap_order
    if ns.cap_rank:
        req["cap_rank"] = ns.cap_rank
    if ns.command == "multiply":
        if len(ns.args) != 2:
            raise SystemExit(_fail("multiply needs exactly two element arguments"))
        req["x"] = _element_spec(ns.args[0])
        req["y"] = _element_spec(ns.args[1])
    elif ns.args:
        raise SystemExit(_fail(f"{ns.command} takes no positional arguments"))
    if ns.command == "verify_all":
        if ns.group:
            req["groups"] = [req.pop("group")]
        if ns.functor != "trivial":
            req["functors"] = [req["functor"]]
        if ns.p:
            req["primes"] = [ns.p]
    return req


def _fail(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return 1


async def _post_local(path: str, payload: dict) -> httpx.Response:
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://burnside.internal", timeout=600.0
    ) as client:
        return await client.post(path, json=payload)


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=payload)
    return asyncio.run(_post_local(path, payload))


# -- rendering --------------------------------------------------------------


def _matrix_lines(matrix) -> list[str]:
    width = max((len(str(v)) for row in matrix for v in row), default=1)
    return [" ".join(str(v).rjust(width) for v in row) for row in matrix]


def _render_text(command: str, data: dict) -> str:
    lines: list[str] = []
    if command == "basis":
        lines.append(f"rank {data['rank']}")
        for i, label in enumerate(data["labels"]):
            lines.append(f"{i}: {label}")
    elif command == "marks":
        lines.extend(_matrix_lines(data["matrix"]))
    elif command == "multiply":
        lines.append(data["element"]["text"])
    elif command == "verify":
        lines.append(f"p={data['p']} rank={data['rank']} det={data['det']}")
        for name, good in data["checks"].items():
            lines.append(f"{name}: {'ok' if good else 'FAIL'}")
        lines.append("ok" if data["ok"] else "FAILED: " + ", ".join(data["failures"]))
    elif command == "idempotents":
        lines.append(f"{data['count']} idempotents over {data['domain']}")
        for i, e in enumerate(data["idempotents"]):
            lines.append(f"e{i} = {e['text']}")
    elif command == "units":
        lines.append(f"order {data['order']}, rank {data['rank']}")
        for i, u in enumerate(data["generators"]):
            lines.append(f"u{i} = {u['text']}")
    elif command == "partial":
        closed = "closed under product" if data["subring"] else "not product closed"
        lines.append(
            f"{data['pairs']} pairs, {data['rank']} orbit reps, {closed}, condition (A) holds"
        )
        for i, label in enumerate(data["labels"]):
            lines.append(f"{i}: {label}")
    elif command == "verify_all":
        for cell in data["cells"]:
            per_p = ", ".join(
                f"p={p} {'ok' if rep['ok'] else 'FAIL'}"
                for p, rep in cell["fundamental"].items()
            )
            units = cell["units"]
            utext = f"units {units['order']}" if isinstance(units, dict) else units
            status = "ok" if cell["ok"] else "FAILED"
            lines.append(
                f"{cell['group']} {cell['functor']}: {status} "
                f"(rank {cell['rank']}; {per_p}; {utext})"
            )
        lines.append("all cells ok" if data["ok"] else "FAILURES PRESENT")
    else:
        lines.append(json.dumps(data, indent=2, sort_keys=True))
    return "\n".join(lines)


def _render_csv(command: str, data: dict) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "basis":
        w.writerow(["pos", "subgroup", "elem", "label"])
        for i, (pair, label) in enumerate(zip(data["pairs"], data["labels"])):
            w.writerow([i, pair[0], pair[1], label])
    elif command == "marks":
        for row in data["matrix"]:
            w.writerow(row)
    elif command == "multiply":
        w.writerow(["pos", "coeff"])
        for pos, c in data["element"]["coeffs"].items():
            w.writerow([pos, c])
    elif command == "verify":
        w.writerow(["check", "value"])
        w.writerow(["p", data["p"]])
        w.writerow(["det", data["det"]])
        for name, good in data["checks"].items():
            w.writerow([name, "ok" if good else "fail"])
        w.writerow(["ok", "ok" if data["ok"] else "fail"])
    elif command == "idempotents":
        w.writerow(["index", "pos", "coeff"])
        for i, e in enumerate(data["idempotents"]):
            for pos, c in e["coeffs"].items():
                w.writerow([i, pos, c])
    elif command == "units":
        w.writerow(["order", data["order"]])
        w.writerow(["rank", data["rank"]])
        for i, u in enumerate(data["generators"]):
            for pos, c in u["coeffs"].items():
                w.writerow([f"u{i}", pos, c])
    elif command == "verify_all":
        w.writerow(["group", "functor", "rank", "ok"])
        for cell in data["cells"]:
            w.writerow([cell["group"], cell["functor"], cell["rank"], cell["ok"]])
    else:
        w.writerow(sorted(data))
    return buf.getvalue().rstrip("\n")


def render(command: str, data: dict, style: str) -> str:
    if style == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    if style == "csv":
        return _render_csv(command, data)
    return _render_text(command, data)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        payload = _payload(ns)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    try:
        resp = _post(ns.server, f"/{ns.command}", payload)
    except httpx.HTTPError as exc:
        return _fail(f"cannot reach service: {exc}")
    if resp.status_code != 200:
        try:
            body = resp.json()
            detail = f"{body.get('error', 'error')}: {body.get('detail', '')}"
        except ValueError:
            detail = resp.text
        return _fail(detail)
    data = resp.json()
    print(render(ns.command, data, ns.output))
    return 0 if data.get("ok", True) else 2


if __name__ == "__main__":
    sys.exit(main())
