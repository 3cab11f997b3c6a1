"""HTTP facade over the engine.

POST /v1/report takes one diagram (braid word or PD code) plus a computation
config and returns a canonical JSON report: graded homology, sl2 module
structure, MOY polynomial, the s-invariant, the two p-differential slash
homologies, or the built-in invariance suite.  All exact scalars are
serialized as [numerator, denominator] integer pairs; the payload is fully
deterministic for a given request.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field as PField

from .ring import Field, Laurent
from .diagrams import LinkDiagram, parse_braid, parse_pd
from .webfoam import GreenDot
from .invariants import (
    euler_characteristic,
    invariance_suite,
    moy_polynomial,
    pdg_e_report,
    pdg_f_report,
    rasmussen_s,
    sl2_homology_report,
)

SCHEMA_VERSION = 1

VALID_REPORTS = ("homology", "sl2", "s", "pdg_e", "pdg_f", "moy", "invariance-suite")


class ParseError(ValueError):
    """Malformed input (diagram text, field spec, rationals, flags)."""


class ComputeError(RuntimeError):
    """Input parsed fine but the requested computation is unavailable/failed."""


def _parse_field(text: str) -> Field:
    if text == "q":
        return Field(0)
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ParseError(f"bad field spec {text!r}")
        try:
            return Field(p)
        except ValueError as exc:
            raise ParseError(str(exc))
    raise ParseError(f"bad field spec {text!r} (expected 'q' or 'fp:<p>')")


def _parse_fraction(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational for {name}: {text!r}")


def _ser_fraction(f: Fraction) -> List[int]:
    return [f.numerator, f.denominator]


def _ser_laurent(val: Laurent) -> List[List[int]]:
    return [[e, c] for e, c in sorted(val.items()) if c]


def _parse_dots(dots: List["DotSpec"]) -> List[GreenDot]:
    out = []
    for d in dots:
        if d.kind not in ("hollow", "solid"):
            raise ParseError(f"bad green dot kind {d.kind!r}")
        if len(d.arc) != 3:
            raise ParseError(f"bad green dot arc {d.arc!r}")
        mult = _parse_fraction(d.mult, "dot multiplicity")
        out.append(GreenDot(d.kind, mult, (str(d.arc[0]), int(d.arc[1]), int(d.arc[2]))))
    return out


class DotSpec(BaseModel):
    kind: str
    mult: str = "1"
    arc: List[object]


class ReportRequest(BaseModel):
    braid: Optional[str] = None
    pd: Optional[str] = None
    n: int = 2
    field: str = "q"
    t1: str = "1/2"
    t2: str = "1/2"
    qmin: Optional[int] = None
    qmax: int = 9
    framing: str = "framed"
    reports: List[str] = PField(default_factory=lambda: ["homology", "sl2"])
    dots: List[DotSpec] = PField(default_factory=list)


def _braid_signs(text: str) -> List[int]:
    signs = []
    for tok in text.split():
        if tok == "s1":
            signs.append(1)
        elif tok == "s-1":
            signs.append(-1)
        else:
            raise ComputeError(
                "p-differential e-theory needs a two-strand braid word (s1/s-1 letters)")
    return signs


def build_report(req: ReportRequest) -> Dict[str, object]:
    """Pure report assembly; raises ParseError / ComputeError."""
    field = _parse_field(req.field)
    t1 = _parse_fraction(req.t1, "t1")
    t2 = _parse_fraction(req.t2, "t2")
    if req.framing not in ("framed", "unframed"):
        raise ParseError(f"bad framing {req.framing!r}")
    for r in req.reports:
        if r not in VALID_REPORTS:
            raise ParseError(f"unknown report {r!r} (choose from {', '.join(VALID_REPORTS)})")
    if req.n < 1:
        raise ParseError("n must be a positive integer")

    diagram: Optional[LinkDiagram] = None
    needs_diagram = any(r != "invariance-suite" for r in req.reports)
    if needs_diagram:
        if (req.braid is None) == (req.pd is None):
            raise ParseError("provide exactly one of braid / pd")
        try:
            diagram = parse_braid(req.braid) if req.braid is not None else parse_pd(req.pd)
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"bad diagram: {exc}")

    dots = _parse_dots(req.dots)

    out: Dict[str, object] = {
        "schema": SCHEMA_VERSION,
        "input": {
            "braid": req.braid,
            "pd": req.pd,
            "n": req.n,
            "field": req.field,
            "t1": _ser_fraction(t1),
            "t2": _ser_fraction(t2),
            "qmax": req.qmax,
            "framing": req.framing,
            "reports": sorted(set(req.reports)),
        },
        "reports": {},
    }
    reports: Dict[str, object] = out["reports"]

    try:
        if "homology" in req.reports or "sl2" in req.reports:
            if req.n != 2:
                raise ComputeError("homology/sl2 reports are implemented for n = 2")
            rep = sl2_homology_report(diagram, field, req.qmax,
                                      framing=req.framing, dots=dots, t1=t1, t2=t2)
            if "homology" in req.reports:
                reports["homology"] = {
                    "kappa": rep["kappa"],
                    "window_qmax": rep["window_qmax"],
                    "gdims": rep["gdims"],
                }
            if "sl2" in req.reports:
                if field.char != 0 or t1 + t2 != 1:
                    raise ComputeError(
                        "sl2 decomposition needs field q and t1 + t2 = 1")
                reports["sl2"] = {
                    "kappa": rep["kappa"],
                    "decomposition": rep["decomposition"],
                    "gamma": rep["gamma"],
                    "z": rep["z"],
                }
        if "moy" in req.reports:
            reports["moy"] = {
                "n": req.n,
                "coeffs": _ser_laurent(moy_polynomial(diagram, req.n, framing=req.framing)),
            }
        if "s" in req.reports:
            if req.n != 2 or field.char != 0:
                raise ComputeError("the s-invariant report needs n = 2 over field q")
            reports["s"] = {"s": rasmussen_s(diagram)}
        if "pdg_e" in req.reports:
            if field.char == 0 or req.n != field.char:
                raise ComputeError("p-differential e-theory needs field fp:<p> with n = p")
            if req.braid is None:
                raise ComputeError("p-differential e-theory needs a braid input")
            rep = pdg_e_report(_braid_signs(req.braid), field.char)
            reports["pdg_e"] = {
                "p": rep["p"],
                "blocks": {str(t): bl for t, bl in sorted(rep["blocks"].items())},
                "slash": {str(t): bl for t, bl in sorted(rep["slash"].items())},
                "grothendieck_image": _ser_laurent(rep["image_mod_cyclotomic"]),
            }
        if "pdg_f" in req.reports:
            if field.char == 0 or req.n != 2:
                raise ComputeError("p-differential f-theory needs field fp:<p> with n = 2")
            rep = pdg_f_report(diagram, field.char, req.qmax, framing=req.framing)
            reports["pdg_f"] = {
                "p": rep["p"],
                "window": rep["window"],
                "blocks": {str(t): bl for t, bl in sorted(rep["blocks"].items())},
                "slash": {str(t): bl for t, bl in sorted(rep["slash"].items())},
                "slash_total_dim": rep["slash_total_dim"],
            }
        if "invariance-suite" in req.reports:
            reports["invariance-suite"] = invariance_suite(field, qmax=req.qmax)
    except (ParseError, ComputeError):
        raise
    except Exception as exc:
        raise ComputeError(str(exc))
    return out


app = FastAPI(title="krfoam")


@app.get("/healthz")
def healthz() -> Dict[str, str]:
    return {"status": "ok"}


@app.post("/v1/report")
def report(req: ReportRequest) -> Dict[str, object]:
    try:
        return build_report(req)
    except ParseError as exc:
        raise HTTPException(status_code=400, detail={"kind": "parse", "message": str(exc)})
    except ComputeError as exc:
        raise HTTPException(status_code=500, detail={"kind": "compute", "message": str(exc)})
