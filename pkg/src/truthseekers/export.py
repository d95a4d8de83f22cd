"""Flat-file renderings: trajectory CSV, analysis and certificate JSON,
plain-text reports and the SVG trajectory plot.

External files number agents from 1 and the truth vertex as 0, so column
``x_1`` is agent 0 of the library and a label 0 in an analysis column is the
truth. Exact mode writes ``p/q``; decimal mode rounds to 12 significant
digits and is lossy.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from decimal import Context, Decimal
from fractions import Fraction

from .structure import TRUTH, analyze

__all__ = [
    "analysis_records",
    "certificate_record",
    "certificate_text",
    "fixture_report_text",
    "fraction_text",
    "plot_svg",
    "read_trajectory_csv",
    "to_json",
    "trajectory_csv",
    "value_table",
]

_DECIMAL = Context(prec=12)


def fraction_text(v: Fraction, exact: bool = True) -> str:
    v = Fraction(v)
    if exact:
        return _long_str(v)
    d = _DECIMAL.divide(Decimal(v.numerator), Decimal(v.denominator))
    return format(d.normalize(_DECIMAL), "f") if abs(d.adjusted()) < 12 else str(d)


def _long_str(v) -> str:
    try:
        return str(v)
    except ValueError:
        # past the interpreter's default cap on int -> str digits; exact output is wanted here
        old = sys.get_int_max_str_digits()
        sys.set_int_max_str_digits(0)
        try:
            return str(v)
        finally:
            sys.set_int_max_str_digits(old)


def _label(v: int) -> int:
    return 0 if v == TRUTH else v + 1


def _labels(vs) -> list:
    return sorted(_label(v) for v in vs)


ANALYSIS_COLUMNS = ("l_hat", "u_hat", "ell1", "ell2", "hope_members")


def trajectory_csv(traj, exact: bool = True, analysis: bool = False) -> str:
    """One row per step: t, x_1..x_n and optionally the hope-interval columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t"] + [f"x_{i + 1}" for i in range(traj.config.n)]
    if analysis:
        header += list(ANALYSIS_COLUMNS)
        snaps = analyze(traj)
    w.writerow(header)
    for t, s in enumerate(traj.states):
        row = [t] + [fraction_text(v, exact) for v in s.x]
        if analysis:
            hope = snaps[t].hope
            row += [_label(hope.extremal.l_hat), _label(hope.extremal.u_hat),
                    fraction_text(hope.ell1, exact), fraction_text(hope.ell2, exact), len(hope.members)]
        w.writerow(row)
    return buf.getvalue()


def read_trajectory_csv(text: str):
    """(ts, series) from a trajectory CSV; series[i] holds column x_{i+1} as floats."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:1] != ["t"]:
        raise ValueError("not a trajectory export: missing header starting with 't'")
    cols = [k for k, name in enumerate(rows[0]) if name.startswith("x_")]
    if not cols:
        raise ValueError("no x_ columns in trajectory export")
    ts, series = [], [[] for _ in cols]
    for line, row in enumerate(rows[1:], start=2):
        try:
            ts.append(int(row[0]))
            for s, k in zip(series, cols):
                s.append(float(Fraction(row[k])))
        except (ValueError, IndexError, ZeroDivisionError):
            raise ValueError(f"line {line}: malformed row") from None
    return ts, series


def analysis_records(traj) -> list:
    """Per-step hope interval and neighbourhood sets as JSON-ready dicts."""
    out = []
    for s, snap in zip(traj.states, analyze(traj)):
        hope, sets, ext = snap.hope, snap.sets, snap.hope.extremal
        out.append({
            "t": s.t,
            "l_tilde": _label(ext.l_tilde),
            "u_tilde": _label(ext.u_tilde),
            "l_hat": _label(ext.l_hat),
            "u_hat": _label(ext.u_hat),
            "lower": _long_str(hope.lower),
            "upper": _long_str(hope.upper),
            "ell1": _long_str(hope.ell1),
            "ell2": _long_str(hope.ell2),
            "hope_members": _labels(hope.members),
            "lost": _labels(hope.lost),
            "components": sorted(_labels(c) for c in snap.graph.components),
            "sets": {
                name: _labels(getattr(sets, name))
                for name in ("near", "middle", "far", "near_upper", "middle_upper", "far_upper",
                             "near1", "middle1", "far1", "near2", "middle2", "far2")
            },
        })
    return out


def _verdict_record(v) -> dict:
    return {
        "status": v.status,
        "checked": v.checked,
        "note": v.note,
        "findings": [{"t": f.t, "lookahead": f.lookahead, "detail": f.detail} for f in v.findings],
    }


def certificate_record(cert) -> dict:
    env = cert.envelope
    return {
        "gamma": str(cert.gamma),
        "horizon": cert.horizon,
        "truth_seekers": [k + 1 for k in cert.seekers],
        "windows": [list(w) for w in cert.windows],
        "interruption_count": cert.interruption_count,
        "converged": cert.converged,
        "tail_window": cert.tail_window,
        "first_distraction": cert.first_distraction,
        "distances": [_long_str(d) for d in cert.distances],
        "envelope": None if env is None else {
            "T2": env.T2, "reached": env.reached, "S": env.S, "post_ok": env.post_ok,
        },
        "fixed_point_at": cert.stability.fixed_point_at if cert.stability else None,
        "monitors": {k: _verdict_record(v) for k, v in sorted(cert.monitor_verdicts.items())},
    }


def certificate_text(cert) -> str:
    lines = [
        f"gamma               {cert.gamma}",
        f"horizon             {cert.horizon}",
        f"truth seekers       {', '.join(str(k + 1) for k in cert.seekers) or 'none'}",
    ]
    if cert.seekers:
        lines += [
            f"gamma windows       {', '.join(f'[{a}, {b}]' for a, b in cert.windows) or 'none'}",
            f"interruptions       {cert.interruption_count}",
            f"first distraction   {cert.first_distraction if cert.first_distraction is not None else 'none'}",
            f"converged           {'yes' if cert.converged else 'no'} (tail window {cert.tail_window})",
        ]
        env = cert.envelope
        if env is not None:
            lines.append(f"T2                  {env.T2}" + ("" if env.reached else " (beyond horizon)"))
    else:
        lines.append("certificate         vacuous (no truth seekers)")
    if cert.stability and cert.stability.fixed_point_at is not None:
        lines.append(f"fixed point from    t = {cert.stability.fixed_point_at}")
    lines.append("monitors")
    for name, v in sorted(cert.monitor_verdicts.items()):
        extra = f" first violation t={v.first_violation}" if v.findings else ""
        note = f" ({v.note})" if v.note else ""
        lines.append(f"  {name:<18}{v.status:<8} checked={v.checked}{extra}{note}")
    return "\n".join(lines) + "\n"


def to_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _eps_units(v: Fraction, eps: Fraction) -> str:
    return f"{Fraction(v) / eps}"


def value_table(traj, columns, eps: Fraction, last=None) -> str:
    """Opinions in units of eps, one column per group of agents that move together."""
    head = ["t"] + ["=".join(f"x_{i + 1}" for i in group) for group in columns]
    body = []
    states = traj.states if last is None else traj.states[:last + 1]
    for t, s in enumerate(states):
        cells = [str(t)]
        for group in columns:
            vals = {s.x[i] for i in group}
            cells.append(" / ".join(_eps_units(v, eps) for v in sorted(vals)))
        body.append(cells)
    widths = [max(len(r[k]) for r in [head] + body) for k in range(len(head))]
    fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(head)] + [fmt(r) for r in body]) + "\n"


def fixture_report_text(fx, report, stability=None) -> str:
    lines = [f"fixture {fx.id}: {report.horizon} steps"]
    if fx.columns is not None:
        lines.append(f"opinions in units of eps = {fx.epsilon}:")
        lines.append(value_table(report.trajectory, fx.columns, fx.epsilon, fx.table_until).rstrip("\n"))
    if stability is not None and stability.fixed_point_at is not None:
        lines.append(f"fixed point from t = {stability.fixed_point_at}")
    if report.diffs:
        lines.append(f"MISMATCH: {len(report.diffs)} oracle differences")
        for t, i, want, got in report.diffs[:20]:
            lines.append(f"  t={t} x_{i + 1}: expected {want}, got {got}")
    else:
        lines.append("oracle: exact match")
    for b in report.bound_failures[:20]:
        lines.append(f"BOUND: {b}")
    if fx.bounds is not None and not report.bound_failures:
        lines.append("bounds: hold")
    if report.printed_mismatches:
        t, i, want, got = report.printed_mismatches[0]
        lines.append(f"printed closed form inconsistent with iteration at {len(report.printed_mismatches)} entries;"
                     f" first t={t} x_{i + 1}: printed {want}, iterated {got}")
    for note in fx.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def plot_svg(ts, series, h=None, epsilon=None, title=None) -> str:
    """Opinion polylines over time, with the truth line h and its eps band when given."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "truthseekers"
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        if h is not None:
            h = float(h)
            if epsilon is not None:
                e = float(epsilon)
                ax.axhspan(h - e, h + e, color="0.9", zorder=0)
            ax.axhline(h, color="0.3", linestyle="--", linewidth=1, zorder=1)
        for ys in series:
            ax.plot(ts, ys, color="black", linewidth=0.8, marker=".", markersize=3, zorder=2)
        ax.set_xlabel("t")
        ax.set_ylabel("opinion")
        if title:
            ax.set_title(title)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return buf.getvalue()
