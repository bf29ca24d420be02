"""Command line front end.

    adlv classify --group GL:5 --b blocks:1/2,1/3 --mu 2,0,0,0,0
    adlv oracle-count --b blocks:4/3 --mu 3,1,0 --q 2 --s 1,2
    adlv verify-gl5 --q 3
    adlv --job job.json

Reports go to stdout (JSON by default), diagnostics to stderr.  Exit codes:
0 success, 2 invalid job, 3 precision insufficient, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from . import classify as cl
from .errors import (ADLVError, BudgetExceeded, InconsistentClass, InconsistentInput, InvalidInput,
                     PrecisionInsufficient, UnsupportedDatum)
from .isocrystal import SigmaClass, SlopeBlock, fmt_fraction, levi_Mb, msb_blocks, mu_min
from .rootdata import RootDatum, dominance_leq

KINDS = ("classify", "mu-min", "dim", "oracle-enumerate", "oracle-reduce", "oracle-count", "verify-gl5")
FORMATS = ("json", "text")
ORACLE_KINDS = ("oracle-enumerate", "oracle-reduce", "oracle-count")

EXIT_OK, EXIT_INVALID, EXIT_PRECISION, EXIT_BUDGET = 0, 2, 3, 4


class JobError(InvalidInput):
    """A job that fails validation; ``field`` names the offending entry."""

    code = "invalid-job"

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


@dataclass(frozen=True)
class Job:
    kind: str
    group: Optional[str] = None
    b: Optional[tuple] = None  # ("blocks", ((m, h), ...)) or ("newton", (Fraction, ...), (int, ...))
    mu: Optional[tuple] = None
    closed: bool = False
    kappa: Optional[int] = None
    q: int = 2
    s: tuple = (1,)
    window: Optional[tuple] = None
    budget: Optional[int] = None
    format: str = "json"
    lattice: Optional[str] = None  # JSON text of a serialized lattice (oracle-reduce)
    samples: Optional[int] = None  # oracle-reduce: number of random members

    # -- derived objects -------------------------------------------------
    def datum(self) -> RootDatum:
        return parse_group(self.group)

    def sigma_class(self) -> SigmaClass:
        datum = self.datum()
        if self.b[0] == "blocks":
            return SigmaClass.from_blocks([SlopeBlock(m, h) for m, h in self.b[1]], datum)
        return SigmaClass.from_invariants(datum, self.b[1], self.b[2])

    def blocks(self) -> tuple:
        if self.b is None or self.b[0] != "blocks":
            raise JobError("b", "the lattice oracle needs a slope-block description of b")
        return tuple(SlopeBlock(m, h) for m, h in self.b[1])


# ---------------------------------------------------------------------------
# group, b and window strings


_GROUP_ISOGENY = {"GL": "GL", "SL": "simply-connected", "PGL": "adjoint"}


def parse_group(text: str) -> RootDatum:
    """GL:n, SL:n, PGL:n or TYPE:rank[:isogeny]; factors joined by 'x' share the isogeny."""
    if not text:
        raise JobError("group", "missing group")
    factors, isogeny = [], None
    for part in text.split("x"):
        bits = part.strip().split(":")
        head = bits[0].upper()
        try:
            if head in _GROUP_ISOGENY:
                if len(bits) != 2:
                    raise ValueError
                n = int(bits[1])
                if n < 1:
                    raise ValueError
                iso = _GROUP_ISOGENY[head]
                factors.append(("A", n - 1))
            else:
                if len(bits) not in (2, 3):
                    raise ValueError
                iso = bits[2] if len(bits) == 3 else "simply-connected"
                factors.append((head, int(bits[1])))
        except ValueError:
            raise JobError("group", f"cannot parse group factor {part!r}") from None
        if isogeny is not None and iso != isogeny:
            raise JobError("group", "all factors must share one isogeny type")
        isogeny = iso
    try:
        return RootDatum.from_cartan(factors, isogeny)
    except InvalidInput as exc:
        raise JobError("group", str(exc)) from None


def _parse_ints(text, field: str) -> tuple:
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [x for x in str(text).replace(" ", "").split(",") if x != ""]
    try:
        out = []
        for x in items:
            if isinstance(x, bool) or (isinstance(x, float) and not x.is_integer()):
                raise ValueError
            out.append(int(x))
        return tuple(out)
    except (TypeError, ValueError):
        raise JobError(field, f"expected integers, got {text!r}") from None


def _parse_fraction(text: str, field: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise JobError(field, f"bad rational {text!r}") from None


def parse_b(spec) -> tuple:
    """'blocks:1/2,1/3' | 'newton:1/2,1/2,0;kappa:1' | {"blocks": [[1, 2]]} | {"newton": [...], "kappa": [...]}."""
    if isinstance(spec, dict):
        if "blocks" in spec:
            blocks = []
            for item in spec["blocks"]:
                if isinstance(item, str):
                    item = item.split("/")
                pair = _parse_ints(item, "b")
                if len(pair) != 2:
                    raise JobError("b", f"block {item!r} is not a pair (m, h)")
                blocks.append(pair)
            return _checked_blocks(blocks)
        if "newton" in spec and "kappa" in spec:
            newton = tuple(_parse_fraction(x, "b") for x in spec["newton"])
            kap = spec["kappa"]
            kappa = _parse_ints(kap if isinstance(kap, (list, tuple)) else [kap], "b")
            return ("newton", newton, kappa)
        raise JobError("b", "b needs 'blocks' or both 'newton' and 'kappa'")
    if not isinstance(spec, str):
        raise JobError("b", f"unrecognized b specification {spec!r}")
    head, _, rest = spec.partition(":")
    if head == "blocks":
        blocks = []
        for item in rest.split(","):
            m, sep, h = item.partition("/")
            if not sep:
                raise JobError("b", f"block {item!r} must be written m/h")
            blocks.append(_parse_ints([m, h], "b"))
        return _checked_blocks(blocks)
    if head == "newton":
        parts = dict(p.split(":", 1) for p in spec.split(";") if ":" in p)
        if set(parts) != {"newton", "kappa"}:
            raise JobError("b", "newton specification needs newton:...;kappa:...")
        newton = tuple(_parse_fraction(x, "b") for x in parts["newton"].split(","))
        return ("newton", newton, _parse_ints(parts["kappa"], "b"))
    raise JobError("b", f"unrecognized b specification {spec!r}")


def _checked_blocks(blocks) -> tuple:
    out = []
    for m, h in blocks:
        try:
            SlopeBlock(m, h)
        except InvalidInput as exc:
            raise JobError("b", str(exc)) from None
        out.append((m, h))
    if not out:
        raise JobError("b", "no blocks given")
    return ("blocks", tuple(out))


def render_b(b: tuple) -> str:
    if b[0] == "blocks":
        return "blocks:" + ",".join(f"{m}/{h}" for m, h in b[1])
    return ("newton:" + ",".join(fmt_fraction(x) for x in b[1])
            + ";kappa:" + ",".join(str(k) for k in b[2]))


def parse_window(spec) -> tuple:
    if isinstance(spec, (list, tuple)):
        vals = _parse_ints(spec, "window")
    else:
        lo, sep, hi = str(spec).partition(":")
        if not sep:
            raise JobError("window", "window must be LO:HI")
        vals = _parse_ints([lo, hi], "window")
    if len(vals) != 2 or vals[0] >= vals[1]:
        raise JobError("window", f"window needs LO < HI, got {spec!r}")
    return vals


# ---------------------------------------------------------------------------
# parsing and validation


_FLAG_FIELDS = ("group", "b", "mu", "closed", "kappa", "q", "s", "window", "budget", "format")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adlv", description="Affine Deligne-Lusztig variety invariants and "
                                "a lattice-model oracle for GL_n.")
    p.add_argument("kind", nargs="?", help="one of " + ", ".join(KINDS))
    p.add_argument("--job", help="JSON job file ('-' for stdin)")
    p.add_argument("--group", help="GL:n, SL:n, PGL:n or TYPE:rank[:isogeny]")
    p.add_argument("--b", help="blocks:m/h,... or newton:x,...;kappa:k,...")
    p.add_argument("--mu", help="dominant coweight, comma separated")
    p.add_argument("--closed", action="store_true", default=None, help="use the closed union X_<=mu(b)")
    p.add_argument("--kappa", help="kappa of the enumerated lattices")
    p.add_argument("--q", help="residue field size")
    p.add_argument("--s", help="extension degree(s), comma separated")
    p.add_argument("--window", help="LO:HI, lattices with t^HI O^n <= L <= t^LO O^n")
    p.add_argument("--budget", help="maximal number of candidate lattices")
    p.add_argument("--format", help="json or text")
    p.add_argument("--lattice", help="serialized lattice (JSON) for oracle-reduce")
    p.add_argument("--samples", help="oracle-reduce: number of random window members")
    return p


_VALUE_FLAGS = tuple(f"--{name}" for name in _FLAG_FIELDS if name != "closed") + ("--lattice", "--samples")


def _attach_negative_values(argv: list) -> list:
    """Rewrite '--window -2:3' as '--window=-2:3' so argparse does not read -2:3 as an option."""
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        nxt = argv[k + 1] if k + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt is not None and re.match(r"-\d", nxt):
            out.append(f"{tok}={nxt}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


def _raw_from_args(ns) -> dict:
    raw = {}
    for name in _FLAG_FIELDS + ("lattice", "samples"):
        val = getattr(ns, name)
        if val is not None:
            raw[name] = val
    return raw


def _load_job_file(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        doc = json.loads(text)
    except OSError as exc:
        raise JobError("job", f"cannot read job file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise JobError("job", f"job file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise JobError("job", "job file must contain a JSON object")
    return doc


def _same(field: str, a, b) -> bool:
    try:
        return _normalize(field, a) == _normalize(field, b)
    except JobError:
        return False


def _normalize(field: str, value):
    if field == "b":
        return parse_b(value)
    if field == "mu":
        return _parse_ints(value, "mu")
    if field == "s":
        return _parse_ints([value] if isinstance(value, int) else value, "s")
    if field == "window":
        return parse_window(value)
    if field in ("kappa", "q", "budget", "samples"):
        vals = _parse_ints([value], field)
        return vals[0]
    if field == "closed":
        if not isinstance(value, bool):
            raise JobError("closed", f"expected a boolean, got {value!r}")
        return value
    if field == "lattice":
        return value if isinstance(value, str) else json.dumps(value, sort_keys=True)
    if field in ("group", "format", "kind"):
        if not isinstance(value, str):
            raise JobError(field, f"expected a string, got {value!r}")
        return value
    raise JobError(field, "unknown field")


def _canned_gl5(raw: dict) -> dict:
    out = {"group": "GL:5", "b": "blocks:1/2,1/3", "mu": "2,0,0,0,0"}
    out.update(raw)
    return out


def parse_job(argv=None, doc: Optional[dict] = None) -> Job:
    """Build a validated Job from command line arguments and/or a job document."""
    raw = {}
    kind = None
    if argv is not None:
        ns = build_parser().parse_args(_attach_negative_values(list(argv)))
        if ns.job:
            doc = _load_job_file(ns.job) if doc is None else doc
        flags = _raw_from_args(ns)
        kind = ns.kind
    else:
        flags = {}
    if doc is not None:
        unknown = set(doc) - set(f.name for f in fields(Job))
        if unknown:
            raise JobError(sorted(unknown)[0], "unknown job field")
        file_kind = doc.get("kind")
        if kind is not None and file_kind is not None and kind != file_kind:
            raise JobError("kind", f"command line kind {kind!r} conflicts with job file kind {file_kind!r}")
        kind = kind or file_kind
        raw.update({k: v for k, v in doc.items() if k != "kind" and v is not None})
    for k, v in flags.items():
        if k in raw and not _same(k, raw[k], v):
            raise JobError(k, "flag conflicts with the job file")
        raw[k] = v
    if kind is None:
        raise JobError("kind", "no job kind given")
    if kind not in KINDS:
        raise JobError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind == "verify-gl5":
        raw = _canned_gl5(raw)
    values = {k: _normalize(k, v) for k, v in raw.items()}
    if "budget" not in values and os.environ.get("ADLV_BUDGET"):
        values["budget"] = _normalize("budget", os.environ["ADLV_BUDGET"])
    if "b" in values and "group" not in values and values["b"][0] == "blocks":
        values["group"] = f"GL:{sum(h for _, h in values['b'][1])}"
    if "group" in values:
        values["group"] = _canonical_group(values["group"])
    job = Job(kind=kind, **values)
    validate(job)
    return job


def _canonical_group(text: str) -> str:
    parse_group(text)
    parts = []
    for part in text.split("x"):
        bits = part.strip().split(":")
        bits[0] = bits[0].upper()
        parts.append(":".join(bits))
    return "x".join(parts)


def validate(job: Job) -> None:
    if job.format not in FORMATS:
        raise JobError("format", f"format must be json or text, got {job.format!r}")
    if job.q < 2:
        raise JobError("q", "q must be a prime power >= 2")
    if not job.s or any(x < 1 for x in job.s):
        raise JobError("s", "extension degrees must be positive")
    if job.budget is not None and job.budget < 1:
        raise JobError("budget", "budget must be positive")
    if job.samples is not None and job.samples < 1:
        raise JobError("samples", "samples must be positive")
    if job.b is None:
        raise JobError("b", "missing b")
    if job.group is None:
        raise JobError("group", "missing group")
    try:
        cls = job.sigma_class()
    except (InvalidInput, InconsistentClass, UnsupportedDatum) as exc:
        raise JobError("b", str(exc)) from None
    needs_mu = job.kind not in ("mu-min",)
    if needs_mu and job.mu is None:
        raise JobError("mu", "missing mu")
    if job.mu is not None:
        if len(job.mu) != cls.datum.rank_total:
            raise JobError("mu", f"mu has length {len(job.mu)}, the group needs {cls.datum.rank_total}")
        if not cls.datum.is_dominant(job.mu):
            raise JobError("mu", "mu is not dominant")
    if job.kind in ORACLE_KINDS or job.kind in ("dim", "verify-gl5"):
        if not cls.datum.is_gl or len(cls.datum.gl_sizes) != 1:
            raise JobError("group", f"{job.kind} needs a group GL:n")
        job.blocks()
    if job.kind in ("oracle-enumerate", "oracle-reduce") and len(job.s) != 1:
        raise JobError("s", f"{job.kind} takes a single extension degree")
    if job.lattice is not None:
        if job.kind != "oracle-reduce":
            raise JobError("lattice", "a starting lattice is only used by oracle-reduce")
        try:
            json.loads(job.lattice)
        except json.JSONDecodeError:
            raise JobError("lattice", "lattice is not valid JSON") from None


def job_to_doc(job: Job) -> dict:
    doc = {"kind": job.kind}
    for f in fields(Job):
        if f.name == "kind":
            continue
        v = getattr(job, f.name)
        if v is None or v == f.default:
            continue
        if f.name == "b":
            v = render_b(v)
        elif f.name in ("mu", "s", "window"):
            v = list(v)
        doc[f.name] = v
    return doc


def render(job: Job) -> list:
    """Command line arguments reproducing the job."""
    argv = [job.kind]
    for name, v in job_to_doc(job).items():
        if name == "kind":
            continue
        if name == "closed":
            if v:
                argv.append("--closed")
            continue
        if name in ("mu", "s"):
            v = ",".join(str(x) for x in v)
        elif name == "window":
            v = f"{v[0]}:{v[1]}"
        argv += [f"--{name}", str(v)]
    return argv


# ---------------------------------------------------------------------------
# execution


def _window(job: Job, twist, mu, kappa):
    from .oracle.adlv import superbasic_window
    from .oracle.lattice import Window
    if job.window is not None:
        return Window(*job.window)
    try:
        return superbasic_window(twist, mu, kappa)
    except UnsupportedDatum:
        raise JobError("window", "an explicit window is needed unless b is a single superbasic block") from None


def _default_kappa(job: Job) -> int:
    return job.kappa if job.kappa is not None else 0


def run_classify(job: Job) -> dict:
    cls = job.sigma_class()
    rep = cl.classify(job.mu, cls).to_json()
    rep["input"] = {"group": job.group, "b": cls.to_json(), "mu": list(job.mu)}
    return rep


def run_mu_min(job: Job) -> dict:
    cls = job.sigma_class()
    mm = mu_min(cls)
    return {
        "input": {"group": job.group, "b": cls.to_json()},
        "mu_min": list(mm),
        "newton": [fmt_fraction(x) for x in cls.newton],
        "kappa": list(cls.kappa),
        "levi_Mb": sorted(levi_Mb(cls)),
        "msb_blocks": [[b.m, b.h] for b in msb_blocks(cls)],
        "newton_below_mu_min": dominance_leq(cls.datum, cls.newton, mm),
    }


def run_dim(job: Job) -> dict:
    cls = job.sigma_class()
    blocks = job.blocks()
    out = {"input": {"group": job.group, "b": cls.to_json(), "mu": list(job.mu)}}
    if len(blocks) == 1:
        out["dimension"] = cl.dim_superbasic(job.mu, blocks[0])
        out["method"] = "superbasic formula <rho, mu - nu> - (h - 1)/2"
        return out
    rep = cl.classify(job.mu, cls)
    if not rep.nonempty:
        raise InvalidInput("X_mu(b) is empty")
    out["dimension"] = rep.dimension
    out["method"] = ("Hodge-Newton reduction to a superbasic core" if rep.dimension is not None
                     else "unknown: the core is not a product of superbasic blocks")
    return out


def _twist(job: Job, s: int):
    from .oracle.adlv import FrobTwist
    from .oracle.field import get_field
    return FrobTwist.from_blocks(job.blocks(), get_field(job.q, s))


def run_enumerate(job: Job) -> dict:
    from .oracle.adlv import enumerate_window
    twist = _twist(job, job.s[0])
    kappa = _default_kappa(job)
    win = _window(job, twist, job.mu, kappa)
    members = enumerate_window(twist, job.mu, kappa, win, job.closed, job.budget)
    return {
        "input": {"b": render_b(job.b), "mu": list(job.mu), "closed": job.closed, "kappa": kappa,
                  "q": job.q, "s": job.s[0], "window": win.to_json()},
        "field": twist.field.to_json(),
        "count": len(members),
        "lattices": [L.to_json() for L in members],
    }


def run_reduce(job: Job) -> dict:
    from .oracle.adlv import enumerate_window, reduce_to_J
    from .oracle.lattice import Lattice
    twist = _twist(job, job.s[0])
    if twist.n != twist.element.blocks[0].h:
        raise JobError("b", "oracle-reduce needs a single superbasic block")
    if job.lattice is not None:
        try:
            starts = [Lattice.from_json(json.loads(job.lattice))]
        except (KeyError, TypeError, ValueError) as exc:
            raise JobError("lattice", f"malformed lattice: {exc}") from None
        if starts[0].field != twist.field or starts[0].n != twist.n:
            raise JobError("lattice", "lattice field or rank does not match the job")
        source = "given"
    else:
        kappa = _default_kappa(job)
        win = _window(job, twist, job.mu, kappa)
        members = enumerate_window(twist, job.mu, kappa, win, True, job.budget)
        if job.samples is not None and job.samples < len(members):
            members = random.Random(0).sample(members, job.samples)
        starts = members
        source = {"window": win.to_json(), "kappa": kappa, "closed": True}
    results = []
    for L in starts:
        red = reduce_to_J(L, twist, job.mu)
        doc = red.to_json()
        doc["start"] = L.to_json()
        results.append(doc)
    return {
        "input": {"b": render_b(job.b), "mu": list(job.mu), "q": job.q, "s": job.s[0], "source": source},
        "count": len(results),
        "max_steps": max((r["steps"] for r in results), default=0),
        "reductions": results,
    }


def run_count(job: Job) -> dict:
    from .oracle.adlv import count_points
    from .oracle.lattice import Window
    kappa = _default_kappa(job)
    win = Window(*job.window) if job.window is not None else None
    if win is None and (len(job.b[1]) != 1 or job.b[1][0][1] == 1):
        raise JobError("window", "an explicit window is needed unless b is a single superbasic block")
    pc = count_points(job.blocks(), job.mu, kappa, job.q, job.s, window=win, closed=job.closed,
                      budget=job.budget)
    out = pc.to_json()
    out["input"] = {"b": render_b(job.b), "mu": list(job.mu), "closed": job.closed, "kappa": kappa,
                    "window": list(job.window) if job.window else "auto"}
    return out


def run_verify_gl5(job: Job) -> dict:
    from .oracle.adlv import GL5_BLOCKS, GL5_MU, verify_gl5
    from .oracle.lattice import Window
    if tuple(job.blocks()) != GL5_BLOCKS or tuple(job.mu) != GL5_MU:
        raise JobError("b", "verify-gl5 checks the fixed datum blocks:1/2,1/3 with mu 2,0,0,0,0")
    cls = job.sigma_class()
    report = cl.classify(job.mu, cls).to_json()
    windows = [Window(*job.window)] if job.window is not None else None
    checks = [verify_gl5(job.q, s, windows, job.budget) for s in job.s]
    return {
        "classify": report,
        "oracle": [c.to_json() for c in checks],
        "claims": {
            "nonempty": report["nonempty"],
            "indecomposable": report["indecomposable"],
            "pi0_kind": report["pi0"]["kind"],
            "family_lattices_are_strict_members": all(c.family_members for c in checks),
            "window_members_are_family_translates": all(c.translates_only for c in checks),
        },
    }


RUNNERS = {
    "classify": run_classify,
    "mu-min": run_mu_min,
    "dim": run_dim,
    "oracle-enumerate": run_enumerate,
    "oracle-reduce": run_reduce,
    "oracle-count": run_count,
    "verify-gl5": run_verify_gl5,
}


def execute_job(job: Job) -> tuple[dict, int]:
    """Run a validated job; returns (report, exit code)."""
    try:
        report = RUNNERS[job.kind](job)
    except PrecisionInsufficient as exc:
        return _error_doc(exc), EXIT_PRECISION
    except BudgetExceeded as exc:
        return _error_doc(exc), EXIT_BUDGET
    except (InvalidInput, InconsistentClass, InconsistentInput, UnsupportedDatum) as exc:
        return _error_doc(exc), EXIT_INVALID
    report = {"kind": job.kind, "job": job_to_doc(job), "result": report}
    return report, EXIT_OK


def _error_doc(exc: ADLVError) -> dict:
    doc = {"error": exc.code, "message": str(exc)}
    if isinstance(exc, JobError):
        doc["field"] = exc.field
        doc["message"] = exc.message
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def _text_lines(doc, prefix=""):
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                yield f"{prefix}{k}:"
                yield from _text_lines(v, prefix + "  ")
            else:
                yield f"{prefix}{k}: {_flat(v)}"
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            if isinstance(v, (dict, list)) and not _is_flat(v):
                yield f"{prefix}[{i}]"
                yield from _text_lines(v, prefix + "  ")
            else:
                yield f"{prefix}- {_flat(v)}"


def _is_flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _is_flat(x)) for x in v)


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if v is None:
        return "unknown"
    return str(v)


def summarize(report: dict) -> str:
    """Human readable summary of a report."""
    res = report["result"]
    head = f"{report['kind']}"
    if report["kind"] == "classify":
        pi0 = res["pi0"]
        lines = [head,
                 f"  nonempty: {res['nonempty']}"]
        if res["nonempty"]:
            lines += [f"  HN-indecomposable: {res['indecomposable']}",
                      f"  HN trace: {res['hn_trace']}",
                      f"  pi_0 of the closed stratum: {pi0['kind']}",
                      f"  zero-dimensional: {res['zero_dimensional']}",
                      f"  dimension: {_flat(res['dimension'])}"]
        lines += [f"  note: {n}" for n in res["notes"]]
        return "\n".join(lines)
    return "\n".join([head] + list(_text_lines(res, "  ")))


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        job = parse_job(argv)
    except JobError as exc:
        print(dumps(_error_doc(exc)), file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INVALID if exc.code else EXIT_OK
    report, code = execute_job(job)
    if code != EXIT_OK:
        print(dumps(report), file=sys.stderr)
        return code
    if job.format == "json":
        print(dumps(report))
    else:
        print(summarize(report))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
