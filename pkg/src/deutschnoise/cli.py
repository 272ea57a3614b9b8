"""``deutschnoise`` command line: simulate, tomo, index, fit, report.

Every command writes either JSON lines (``--format json``, one object per
record, complex numbers as ``{"re", "im"}``) or a plain-text table
(``--format table``). Output depends only on the inputs and ``--seed``.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .channels import INTERPRETATIONS, ORDERS, GadParams, MaGates
from .deutsch import ORACLES, Oracle, ideal_output_state
from .fit import OBJECTIVES, FitDataset, FitResult, fit_gad, fit_joint, fit_staged, fit_unitary
from .metrics import isotropic_index
from .numkit import LinalgError
from .pipeline import (
    best_interpretations,
    interpretation_scan,
    model_state,
    paper_gad,
    published_dataset,
    success_probability,
)
from .qstate import ket
from .reference import matrix_from_entries, published_gad, published_index, published_success
from .tomography import (
    BASES,
    DEFAULT_SHOTS,
    PauliExpectations,
    TomographyError,
    expectations_from_records,
    is_physical,
    project_to_density,
    reconstruct,
    sample_counts,
)

__all__ = ["main", "build_parser"]

GATE_SETS = ("paper", "paper-sign-corrected", "identity")
MODELS = ("ideal", "gad", "ma-gad")

PROB_THRESHOLD = 1e-4
INDEX_THRESHOLD = 5e-4
FIDELITY_THRESHOLD = 2e-3


class CliError(Exception):
    pass


# ------------------------------------------------------------------ helpers


def _oracle_list(text: str) -> list[Oracle]:
    chosen = {Oracle.parse(t.strip()) for t in text.split(",") if t.strip()}
    return [o for o in ORACLES if o in chosen]


def _gates(name: str) -> MaGates:
    if name == "identity":
        return MaGates.identity()
    return MaGates.paper("sign-corrected" if name == "paper-sign-corrected" else "printed")


def _load_matrices(args) -> dict:
    if getattr(args, "ideal", False):
        return {o: ideal_output_state(o) for o in ORACLES}
    if args.matrices is None:
        return published_dataset()
    return io.read_matrices(args.matrices)


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        p = Path(path)
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            fh = p.open("w", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc}") from exc
        with fh:
            yield fh


def _fmt(v, digits: int = 4) -> str:
    if isinstance(v, float):
        return f"{v:.{digits}f}"
    if isinstance(v, complex):
        return f"{v.real:.{digits}f}{v.imag:+.{digits}f}i"
    return str(v)


def _table(rows: list[dict], columns: Sequence[str], digits: int = 4) -> str:
    cells = [[_fmt(r.get(c, ""), digits) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _matrix_text(m) -> str:
    m = np.asarray(m)
    return "[" + "; ".join(" ".join(_fmt(complex(z)) for z in row) for row in m) + "]"


def _emit(args, records: list[dict], columns: Sequence[str], title: str = "") -> None:
    with _output(args.out) as out:
        if args.format == "json":
            io.write_jsonl(records, out)
        else:
            if title:
                out.write(title + "\n")
            out.write(_table(records, columns) + "\n")


# ----------------------------------------------------------------- commands


def _noise_model(args):
    gad = None if args.model == "ideal" else GadParams(args.gamma, args.p)
    gates = _gates(args.gates) if args.model == "ma-gad" else None
    return gad, gates


def cmd_simulate(args) -> int:
    if args.shots < 1:
        raise CliError("--shots must be at least 1")
    gad, gates = _noise_model(args)
    if args.interpretation == "best" and gates is not None:
        chosen = {o: b[0] for o, b in best_interpretations(published_dataset(), gad, gates, args.order).items()}
    else:
        interp = "as-printed" if args.interpretation == "best" else args.interpretation
        chosen = {o: interp for o in ORACLES}
    records = []
    for o in _oracle_list(args.oracles):
        rho = model_state(o, gad, gates, chosen[o], args.order)
        oi = ORACLES.index(o)
        for bi, basis in enumerate(BASES):
            rec = sample_counts(rho, basis, args.shots, seed=[args.seed, oi, bi], oracle=o)
            meta = dict(rec.meta, model=args.model)
            if gates is not None:
                meta.update(gates=args.gates, interpretation=chosen[o], order=args.order)
            if gad is not None:
                meta.update(gamma=gad.gamma, p=gad.p)
            rec = dataclasses.replace(rec, seed=args.seed, device=args.device, meta=meta)
            records.append(rec.to_dict())
    rows = [dict(r, n0=r["counts"]["0"], n1=r["counts"]["1"]) for r in records]
    _emit(args, records if args.format == "json" else rows, ["oracle", "basis", "shots", "n0", "n1"])
    return 0


def _read_expectations(path) -> dict:
    out = {}
    for rec in io.read_jsonl(path):
        try:
            out[Oracle.parse(rec["oracle"])] = PauliExpectations(
                float(rec["ex"]), float(rec["ey"]), float(rec["ez"])
            )
        except KeyError as exc:
            raise io.RecordError(f"{path}: expectation record lacks {exc}") from exc
    return out


def cmd_tomo(args) -> int:
    meta: dict = {}
    if args.expectations:
        expectations = _read_expectations(args.expectations)
        for o in expectations:
            meta[o] = {"source": "expectations"}
    else:
        counts = []
        for path in args.counts:
            counts.extend(io.read_counts(path))
        if not counts:
            raise CliError("no counts records found")
        expectations = expectations_from_records(counts)
        for o in expectations:
            cells = [c for c in counts if c.oracle is o]
            seeds = sorted({c.seed for c in cells if c.seed is not None})
            meta[o] = {
                "source": "counts",
                "shots": {b: sum(c.shots for c in cells if c.basis == b) for b in BASES},
            }
            if len(seeds) == 1:
                meta[o]["seed"] = seeds[0]
    records = []
    for o, e in expectations.items():
        raw = reconstruct(e)
        projected = not is_physical(raw)
        rho = project_to_density(raw)
        records.append(io.matrix_record(o, rho, projected=projected, **meta[o]))
    rows = [
        {"oracle": r["oracle"], "matrix": _matrix_text(io.parse_matrix_record(r)[1]), "projected": r["projected"]}
        for r in records
    ]
    _emit(args, records if args.format == "json" else rows, ["oracle", "matrix", "projected"])
    return 0


def _index_rows(matrices: dict) -> list[dict]:
    rows = []
    for o in ORACLES:
        if o not in matrices:
            continue
        idx = isotropic_index(matrices[o], ket(str(o.ideal_bit)))
        rows.append({"oracle": o.value, "ideal_bit": o.ideal_bit, "weight": idx.weight, "alignment": idx.alignment})
    return rows


def cmd_index(args) -> int:
    rows = _index_rows(_load_matrices(args))
    _emit(args, rows, ["oracle", "ideal_bit", "weight", "alignment"])
    return 0


def _fit_summary(res: FitResult) -> dict:
    ref_g, ref_p = published_gad()
    d = {
        "method": res.method,
        "objective": res.objective_kind,
        "objective_value": res.objective_value,
        "gamma": res.gad.gamma,
        "p": res.gad.p,
        "delta_gamma": res.gad.gamma - ref_g,
        "delta_p": res.gad.p - ref_p,
        "mean_fidelity": res.mean_fidelity,
        "per_oracle_fidelity": {o.value: f for o, f in res.per_oracle_fidelity.items()},
        "p_identifiable": res.p_identifiable,
    }
    if res.gates is not None:
        d["gates"] = {"g0": io.matrix_to_json(res.gates.g0), "g1": io.matrix_to_json(res.gates.g1)}
        d["gate_angles"] = {
            f"g{b}": {"theta": gp.theta, "phi": gp.phi, "lam": gp.lam} for b, gp in enumerate(res.gate_params)
        }
    if res.notes:
        d["notes"] = list(res.notes)
    return d


def _ma_records(matrices: dict, gad: GadParams, gate_set: str, order: str, objective: str) -> list[dict]:
    gates = _gates(gate_set)
    scan = interpretation_scan(matrices, gad, gates, order)
    records = []
    for o in ORACLES:
        if o not in scan:
            continue
        fids = scan[o]
        best = max(INTERPRETATIONS, key=lambda k: (fids[k], -INTERPRETATIONS.index(k)))
        params, fitted = fit_unitary(matrices[o], o.ideal_bit, gad, objective)
        records.append(
            {
                "mode": "ma",
                "oracle": o.value,
                "gates": gate_set,
                "order": order,
                "gamma": gad.gamma,
                "p": gad.p,
                "interpretation_fidelity": fids,
                "best_interpretation": best,
                "best_fidelity": fids[best],
                "fitted_gate": {"theta": params.theta, "phi": params.phi, "lam": params.lam},
                "fitted_gate_fidelity": fitted,
            }
        )
    return records


def cmd_fit(args) -> int:
    matrices = _load_matrices(args)
    data = FitDataset.from_matrices(matrices)
    if args.mode == "gad":
        records = [dict(_fit_summary(fit_gad(data, args.objective)), mode="gad")]
    elif args.mode == "ma":
        gad = GadParams(args.gamma, args.p)
        records = _ma_records(matrices, gad, args.gates, args.order, args.objective)
    else:
        missing = [o.value for o in ORACLES if o not in data.oracles]
        if missing:
            raise CliError(f"joint fit needs all four oracles; missing {', '.join(missing)}")
        records = [
            dict(_fit_summary(fit_staged(data, args.objective)), mode="joint"),
            dict(_fit_summary(fit_joint(data, args.objective)), mode="joint"),
        ]
    if args.format == "json":
        _emit(args, records, [])
        return 0
    if args.mode == "ma":
        rows = [
            dict(
                oracle=r["oracle"],
                best_interpretation=r["best_interpretation"],
                best_fidelity=r["best_fidelity"],
                fitted_gate_fidelity=r["fitted_gate_fidelity"],
                **{k: v for k, v in r["interpretation_fidelity"].items()},
            )
            for r in records
        ]
        cols = ["oracle", *INTERPRETATIONS, "best_interpretation", "best_fidelity", "fitted_gate_fidelity"]
    else:
        rows = [dict(r, **{f"F_{k}": v for k, v in r["per_oracle_fidelity"].items()}) for r in records]
        cols = ["method", "objective", "gamma", "p", "delta_gamma", "delta_p", "mean_fidelity"]
    _emit(args, rows, cols)
    return 0


def _report(args) -> tuple[list[dict], bool]:
    matrices = _load_matrices(args)
    probs_ref = published_success()
    idx_ref = published_index()
    gad = paper_gad()
    ok = True
    records: list[dict] = []

    for o in ORACLES:
        if o not in matrices:
            continue
        prob = success_probability(matrices[o], o.ideal_bit)
        delta = prob - probs_ref[o.value]
        ok &= abs(delta) <= args.prob_threshold
        records.append(
            {
                "section": "states",
                "oracle": o.value,
                "ideal_bit": o.ideal_bit,
                "matrix": io.matrix_to_json(matrices[o]),
                "success_probability": prob,
                "published": probs_ref[o.value],
                "delta": delta,
            }
        )

    best = best_interpretations(matrices, gad, _gates("paper"), "ma-then-gad")
    corrected = interpretation_scan(matrices, gad, _gates("paper-sign-corrected"), "ma-then-gad")
    for row in _index_rows(matrices):
        o = Oracle.parse(row["oracle"])
        ref = idx_ref[o.value]
        interp, fid = best[o]
        rec = dict(
            row,
            section="index",
            fidelity=fid,
            interpretation=interp,
            fidelity_sign_corrected_adjoint=corrected[o]["adjoint"],
            published_weight=ref["weight"],
            published_alignment=ref["alignment"],
            published_fidelity=ref["fidelity"],
            delta_weight=row["weight"] - ref["weight"],
            delta_alignment=row["alignment"] - ref["alignment"],
            delta_fidelity=fid - ref["fidelity"],
        )
        ok &= abs(rec["delta_weight"]) <= args.index_threshold
        ok &= abs(rec["delta_alignment"]) <= args.index_threshold
        ok &= abs(rec["delta_fidelity"]) <= args.fidelity_threshold
        records.append(rec)

    data = FitDataset.from_matrices(matrices)
    for kind in OBJECTIVES:
        records.append(dict(_fit_summary(fit_gad(data, kind)), section="fit"))
    if len(data.entries) == 4:
        records.append(dict(_fit_summary(fit_staged(data)), section="fit"))
        records.append(dict(_fit_summary(fit_joint(data)), section="fit"))

    records.append(
        {
            "section": "summary",
            "passed": bool(ok),
            "thresholds": {
                "success_probability": args.prob_threshold,
                "weight_alignment": args.index_threshold,
                "fidelity": args.fidelity_threshold,
            },
        }
    )
    return records, bool(ok)


def cmd_report(args) -> int:
    records, ok = _report(args)
    with _output(args.out) as out:
        if args.format == "json":
            io.write_jsonl(records, out)
        else:
            states = [dict(r, matrix=_matrix_text(matrix_from_entries(r["matrix"]))) for r in records if r["section"] == "states"]
            out.write("Output states and success probabilities\n")
            out.write(_table(states, ["oracle", "matrix", "ideal_bit", "success_probability", "published", "delta"]) + "\n\n")
            index = [r for r in records if r["section"] == "index"]
            out.write("Isotropic index and model fidelity (published gad, paper gates, MA then GAD)\n")
            out.write(
                _table(
                    index,
                    [
                        "oracle", "ideal_bit", "weight", "published_weight", "alignment",
                        "published_alignment", "fidelity", "interpretation", "published_fidelity",
                        "fidelity_sign_corrected_adjoint",
                    ],
                )
                + "\n\n"
            )
            fits = [r for r in records if r["section"] == "fit"]
            out.write("Fitted parameters (deltas against the published gamma, p)\n")
            out.write(_table(fits, ["method", "objective", "gamma", "p", "delta_gamma", "delta_p", "mean_fidelity"]) + "\n\n")
            out.write(f"all deltas within thresholds: {'yes' if ok else 'NO'}\n")
    return 0 if ok or not args.gate else 1


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ref_gamma, ref_p = published_gad()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "table"), default="json")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--matrices", default=None, help="matrix JSON lines (default: published ibmqx4 states)")
    source.add_argument("--ideal", action="store_true", help="use error-free output states instead")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--gamma", type=float, default=ref_gamma)
    model.add_argument("--p", type=float, default=ref_p)
    model.add_argument("--gates", choices=GATE_SETS, default="paper")
    model.add_argument("--order", choices=ORDERS, default="ma-then-gad")

    parser = argparse.ArgumentParser(prog="deutschnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, model], help="simulate tomography counts")
    p.add_argument("--oracles", default=",".join(o.value for o in ORACLES))
    p.add_argument("--model", choices=MODELS, default="ma-gad")
    p.add_argument("--interpretation", choices=(*INTERPRETATIONS, "best"), default="best")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--device", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tomo", parents=[common], help="reconstruct density matrices")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--counts", nargs="+", help="counts JSON lines file(s)")
    g.add_argument("--expectations", help="JSON lines of {oracle, ex, ey, ez}")
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("index", parents=[common, source], help="isotropic weight and alignment")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("fit", parents=[common, source, model], help="fit noise-model parameters")
    p.add_argument("--mode", choices=("gad", "ma", "joint"), default="joint")
    p.add_argument("--objective", choices=OBJECTIVES, default="fidelity")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("report", parents=[common, source], help="compare against the published tables")
    p.add_argument("--prob-threshold", type=float, default=PROB_THRESHOLD)
    p.add_argument("--index-threshold", type=float, default=INDEX_THRESHOLD)
    p.add_argument("--fidelity-threshold", type=float, default=FIDELITY_THRESHOLD)
    p.add_argument("--gate", action=argparse.BooleanOptionalAction, default=True,
                   help="exit non-zero when a delta exceeds its threshold")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, TomographyError, io.RecordError, LinalgError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
