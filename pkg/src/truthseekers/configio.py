"""YAML config files.

Layout::

    n: 2
    h: 1/2
    epsilon: 1/4
    alpha: 1/2
    beta: 1/2
    mode: strict            # optional, strict | relaxed
    agents:
      - {x0: 1/2, kind: truth_seeker, alpha_rule: {constant: 1/2}}
      - {x0: 1/64, kind: ignorant, alpha_rule: {constant: 0}}
    weights: uniform        # or {matrix: ...}, {table: ..., tail: ...},
                            #    {named_rule: NAME, params: {...}}, {rules: ...}

Rationals are integers or ``p/q`` strings; decimals are rejected. Scalars are
read from the raw YAML text, so ``1/3`` never passes through a float.
Alpha rules: ``{constant: v}``, ``{table: [...], tail: v}``,
``{periodic: [...]}``, ``{switch: {on, start, stop, off}}``,
``{geometric: {offset, scale, ratio}}``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import yaml

from .model import BetaSchedule, ConfigError, SystemConfig, agent_kinds
from .schedules import Constant, Geometric, Periodic, Schedule, Switch, Table, as_fraction

__all__ = ["ConfigParseError", "config_from_data", "config_to_data", "load_config", "parse_config", "render_config"]


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


def _err(node, message):
    mark = getattr(node, "start_mark", None)
    if mark is None:
        return ConfigParseError(message)
    return ConfigParseError(message, mark.line + 1, mark.column + 1)


# -- node helpers --------------------------------------------------------------


def _mapping(node, what):
    if not isinstance(node, yaml.MappingNode):
        raise _err(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            raise _err(k, "keys must be plain scalars")
        if k.value in out:
            raise _err(k, f"duplicate key {k.value!r}")
        out[k.value] = v
    return out


def _seq(node, what):
    if not isinstance(node, yaml.SequenceNode):
        raise _err(node, f"{what} must be a list")
    return node.value


def _text(node, what):
    if not isinstance(node, yaml.ScalarNode):
        raise _err(node, f"{what} must be a scalar")
    return node.value


def _rational(node, what) -> Fraction:
    raw = _text(node, what)
    try:
        return as_fraction(raw)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise _err(node, f"{what}: {exc}") from None


def _int(node, what) -> int:
    raw = _text(node, what)
    try:
        return int(raw)
    except ValueError:
        raise _err(node, f"{what} must be an integer, got {raw!r}") from None


def _require(m, key, parent, what):
    if key not in m:
        raise _err(parent, f"{what}: missing key {key!r}")
    return m[key]


def _only(m, allowed, parent, what):
    extra = set(m) - set(allowed)
    if extra:
        raise _err(m[sorted(extra)[0]], f"{what}: unexpected key {sorted(extra)[0]!r}")


# -- schedules -------------------------------------------------------------------


def _schedule_from_node(node, what) -> Schedule:
    m = _mapping(node, what)
    forms = [k for k in ("constant", "table", "periodic", "switch", "geometric") if k in m]
    if len(forms) != 1:
        raise _err(node, f"{what}: give exactly one of constant/table/periodic/switch/geometric")
    form = forms[0]
    body = m[form]
    if form == "constant":
        _only(m, ["constant"], node, what)
        return Constant(_rational(body, what))
    if form == "table":
        _only(m, ["table", "tail"], node, what)
        values = [_rational(v, what) for v in _seq(body, what)]
        if not values:
            raise _err(body, f"{what}: empty table")
        tail = _rational(m["tail"], what) if "tail" in m else None
        return Table(tuple(values), tail)
    _only(m, [form], node, what)
    if form == "periodic":
        values = [_rational(v, what) for v in _seq(body, what)]
        if not values:
            raise _err(body, f"{what}: empty periodic rule")
        return Periodic(tuple(values))
    if form == "switch":
        s = _mapping(body, what)
        _only(s, ["on", "start", "stop", "off"], body, what)
        stop = _int(s["stop"], what) if "stop" in s else None
        off = _rational(s["off"], what) if "off" in s else Fraction(0)
        try:
            return Switch(_rational(_require(s, "on", body, what), what),
                          _int(_require(s, "start", body, what), what), stop, off)
        except ValueError as exc:
            raise _err(body, f"{what}: {exc}") from None
    g = _mapping(body, what)
    _only(g, ["offset", "scale", "ratio"], body, what)
    try:
        return Geometric(*(_rational(_require(g, k, body, what), what) for k in ("offset", "scale", "ratio")))
    except ValueError as exc:
        raise _err(body, f"{what}: {exc}") from None


def _q(v: Fraction):
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _schedule_to_data(s: Schedule) -> dict:
    if isinstance(s, Constant):
        return {"constant": _q(s.value)}
    if isinstance(s, Table):
        return {"table": [_q(v) for v in s.values], "tail": _q(s.tail)}
    if isinstance(s, Periodic):
        return {"periodic": [_q(v) for v in s.values]}
    if isinstance(s, Switch):
        d = {"on": _q(s.on), "start": s.start}
        if s.stop is not None:
            d["stop"] = s.stop
        d["off"] = _q(s.off)
        return {"switch": d}
    if isinstance(s, Geometric):
        return {"geometric": {"offset": _q(s.offset), "scale": _q(s.scale), "ratio": _q(s.ratio)}}
    raise TypeError(f"cannot render schedule {s!r}")


# -- weights ---------------------------------------------------------------------


def _matrix(node, n, what):
    rows = _seq(node, what)
    if len(rows) != n:
        raise _err(node, f"{what}: expected {n} rows, got {len(rows)}")
    out = []
    for r in rows:
        vals = [_rational(v, what) for v in _seq(r, what)]
        if len(vals) != n:
            raise _err(r, f"{what}: expected {n} entries per row, got {len(vals)}")
        out.append(vals)
    return out


def _weights_from_node(node, n) -> BetaSchedule:
    if isinstance(node, yaml.ScalarNode):
        if node.value != "uniform":
            raise _err(node, f"weights: unknown form {node.value!r}")
        return BetaSchedule.uniform(n)
    m = _mapping(node, "weights")
    if "matrix" in m:
        _only(m, ["matrix"], node, "weights")
        return BetaSchedule.from_matrix(_matrix(m["matrix"], n, "weights.matrix"))
    if "table" in m:
        _only(m, ["table", "tail"], node, "weights")
        mats = [_matrix(t, n, "weights.table") for t in _seq(m["table"], "weights.table")]
        if not mats:
            raise _err(m["table"], "weights.table: empty")
        tail = _matrix(m["tail"], n, "weights.tail") if "tail" in m else None
        return BetaSchedule.from_table(mats, tail)
    if "named_rule" in m:
        _only(m, ["named_rule", "params"], node, "weights")
        params = {}
        if "params" in m:
            for k, v in _mapping(m["params"], "weights.params").items():
                params[k] = _int(v, f"weights.params.{k}")
        try:
            return BetaSchedule.named(_text(m["named_rule"], "weights.named_rule"), n, **params)
        except (ConfigError, TypeError) as exc:
            raise _err(m["named_rule"], str(exc)) from None
    if "rules" in m:
        _only(m, ["rules"], node, "weights")
        rows = _seq(m["rules"], "weights.rules")
        if len(rows) != n:
            raise _err(m["rules"], f"weights.rules: expected {n} rows")
        grid = []
        for r in rows:
            entries = _seq(r, "weights.rules")
            if len(entries) != n:
                raise _err(r, f"weights.rules: expected {n} entries per row")
            grid.append([_schedule_from_node(e, "weights.rules") for e in entries])
        return BetaSchedule.from_rules(grid)
    raise _err(node, "weights: expected uniform, matrix, table, named_rule or rules")


def _weights_to_data(b: BetaSchedule):
    if b.kind == "uniform":
        return "uniform"
    if b.kind == "matrix":
        return {"matrix": [[_q(s.value) for s in row] for row in b.entries]}
    if b.kind == "table":
        length = len(b.entries[0][0].values)
        return {
            "table": [[[_q(s.values[t]) for s in row] for row in b.entries] for t in range(length)],
            "tail": [[_q(s.tail) for s in row] for row in b.entries],
        }
    if b.kind == "named":
        d: dict[str, Any] = {"named_rule": b.name}
        if b.params:
            d["params"] = dict(b.params)
        return d
    return {"rules": [[_schedule_to_data(s) for s in row] for row in b.entries]}


# -- whole config ----------------------------------------------------------------

_TOP = ("n", "h", "epsilon", "alpha", "beta", "mode", "agents", "weights")


def _config_from_node(root) -> SystemConfig:
    m = _mapping(root, "config")
    _only(m, _TOP, root, "config")
    n = _int(_require(m, "n", root, "config"), "n")
    if n < 1:
        raise _err(m["n"], "n must be positive")
    params = {k: _rational(_require(m, k, root, "config"), k) for k in ("h", "epsilon", "alpha", "beta")}
    mode = _text(m["mode"], "mode") if "mode" in m else "strict"
    agents_node = _require(m, "agents", root, "config")
    agents = _seq(agents_node, "agents")
    if len(agents) != n:
        raise _err(agents_node, f"agents: expected {n} entries, got {len(agents)}")
    x0, rules, declared = [], [], []
    for k, a in enumerate(agents):
        am = _mapping(a, f"agents[{k}]")
        _only(am, ["x0", "kind", "alpha_rule"], a, f"agents[{k}]")
        x0.append(_rational(_require(am, "x0", a, f"agents[{k}]"), f"agents[{k}].x0"))
        rules.append(_schedule_from_node(_require(am, "alpha_rule", a, f"agents[{k}]"), f"agents[{k}].alpha_rule"))
        declared.append(am.get("kind"))
    weights = _weights_from_node(_require(m, "weights", root, "config"), n)
    try:
        config = SystemConfig(n, params["h"], params["epsilon"], params["alpha"], params["beta"],
                              tuple(rules), weights, tuple(x0), mode)
        kinds = agent_kinds(config).kinds
    except ConfigError as exc:
        raise _err(root, str(exc)) from None
    for k, (node, kind) in enumerate(zip(declared, kinds)):
        if node is not None and _text(node, "kind") != kind.value:
            raise _err(node, f"agents[{k}].kind: declared {node.value!r} but alpha_rule makes it {kind.value!r}")
    return config


def parse_config(text: str) -> SystemConfig:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ConfigParseError(str(exc.problem or exc), mark.line + 1 if mark else None,
                               mark.column + 1 if mark else None) from None
    if root is None:
        raise ConfigParseError("empty config")
    return _config_from_node(root)


def load_config(path) -> SystemConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def config_to_data(config: SystemConfig) -> dict:
    kinds = agent_kinds(config).kinds
    return {
        "n": config.n,
        "h": _q(config.h),
        "epsilon": _q(config.epsilon),
        "alpha": _q(config.alpha),
        "beta": _q(config.beta),
        "mode": config.mode,
        "agents": [
            {"x0": _q(x), "kind": kind.value, "alpha_rule": _schedule_to_data(rule)}
            for x, kind, rule in zip(config.x0, kinds, config.alpha_schedule)
        ],
        "weights": _weights_to_data(config.beta_schedule),
    }


def config_from_data(data: dict) -> SystemConfig:
    return parse_config(yaml.safe_dump(data, sort_keys=False))


def render_config(config: SystemConfig) -> str:
    return yaml.safe_dump(config_to_data(config), sort_keys=False, default_flow_style=None, width=100)
