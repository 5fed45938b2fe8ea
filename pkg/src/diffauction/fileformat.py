"""Instance files and text renderings of outcomes and property reports.

An instance file is a JSON document with a mandatory ``format`` tag::

    {
      "format": "diffauction-instance/1",
      "k": 3,
      "reserve": 40,
      "value_cap": 100,
      "seller_followers": [0, 1],
      "buyers": [
        {"id": 0, "label": "i1", "value": 30, "followers": [2]},
        ...
      ]
    }

``reserve``, ``value_cap`` and ``label`` are optional. Money is a JSON integer
or a string ``"p/q"``. :func:`serialize_instance` writes the canonical layout
above, so canonical files survive a parse/serialize round trip byte for byte.
"""
from __future__ import annotations

import io
import json
import re
from fractions import Fraction

from .mechanisms import Outcome
from .network import AuctionInstance, BuyerType, InstanceError
from .properties import PropertyReport

FORMAT_TAG = "diffauction-instance/1"
_KEYS = {"format", "k", "reserve", "value_cap", "seller_followers", "buyers"}
_BUYER_KEYS = {"id", "label", "value", "followers"}


class InstanceFormatError(InstanceError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(field)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)
        self.field = field
        self.line = line


def _line_of(text: str, pattern: str) -> int | None:
    m = re.search(pattern, text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _money(x, field, line=None):
    if isinstance(x, bool):
        raise InstanceFormatError(f"expected money, got {x!r}", field, line)
    if isinstance(x, int):
        value = x
    elif isinstance(x, str) and re.fullmatch(r"\d+(/\d+)?", x.strip()):
        value = Fraction(x.strip())
        if value.denominator == 1:
            value = int(value)
    else:
        raise InstanceFormatError(f"expected an integer or 'p/q' string, got {x!r}", field, line)
    if value < 0:
        raise InstanceFormatError(f"negative value {value}", field, line)
    return value


def _id_list(x, field, line=None) -> list:
    if not isinstance(x, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in x):
        raise InstanceFormatError("expected a list of buyer ids", field, line)
    if len(set(x)) != len(x):
        raise InstanceFormatError("duplicate buyer id", field, line)
    return x


def parse_instance(text: str) -> AuctionInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(e.msg, line=e.lineno) from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level must be an object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise InstanceFormatError(f"unknown keys {sorted(unknown)}")
    if doc.get("format") != FORMAT_TAG:
        raise InstanceFormatError(f"missing or unsupported format tag (want {FORMAT_TAG!r})", "format")
    for key in ("k", "seller_followers", "buyers"):
        if key not in doc:
            raise InstanceFormatError("required field missing", key)
    k = doc["k"]
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InstanceFormatError("k must be a positive integer", "k", _line_of(text, r'"k"'))
    reserve = _money(doc["reserve"], "reserve") if "reserve" in doc else None
    cap = _money(doc["value_cap"], "value_cap") if "value_cap" in doc else None
    buyers = doc["buyers"]
    if not isinstance(buyers, list):
        raise InstanceFormatError("expected a list", "buyers")
    n = len(buyers)
    by_id = {}
    for pos, b in enumerate(buyers):
        field = f"buyers[{pos}]"
        if not isinstance(b, dict):
            raise InstanceFormatError("expected an object", field)
        line = _line_of(text, r'"id"\s*:\s*%d\b' % b["id"]) if isinstance(b.get("id"), int) else None
        if set(b) - _BUYER_KEYS:
            raise InstanceFormatError(f"unknown keys {sorted(set(b) - _BUYER_KEYS)}", field, line)
        for key in ("id", "value", "followers"):
            if key not in b:
                raise InstanceFormatError("required field missing", f"{field}.{key}", line)
        i = b["id"]
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < n:
            raise InstanceFormatError(f"ids must be dense 0..{n - 1}, got {i!r}", f"{field}.id", line)
        if i in by_id:
            raise InstanceFormatError(f"duplicate id {i}", f"{field}.id", line)
        followers = _id_list(b["followers"], f"{field}.followers", line)
        for j in followers:
            if not 0 <= j < n:
                raise InstanceFormatError(f"dangling buyer id {j}", f"{field}.followers", line)
            if j == i:
                raise InstanceFormatError("buyer follows itself", f"{field}.followers", line)
        by_id[i] = (BuyerType(_money(b["value"], f"{field}.value", line), frozenset(followers)), b.get("label"))
    direct = _id_list(doc["seller_followers"], "seller_followers", _line_of(text, r'"seller_followers"'))
    for j in direct:
        if not 0 <= j < n:
            raise InstanceFormatError(f"dangling buyer id {j}", "seller_followers", _line_of(text, r'"seller_followers"'))
    labels = [by_id[i][1] for i in range(n)]
    if any(x is not None for x in labels):
        if any(x is None for x in labels):
            raise InstanceFormatError("either every buyer has a label or none does", "buyers")
        labels = tuple(labels)
    else:
        labels = None
    try:
        return AuctionInstance(
            k=k,
            seller_followers=frozenset(direct),
            types=tuple(by_id[i][0] for i in range(n)),
            value_cap=cap,
            reserve=reserve,
            labels=labels,
        )
    except InstanceError as e:
        raise InstanceFormatError(str(e)) from None


def _dump_money(x):
    return x if isinstance(x, int) else str(x)


def serialize_instance(instance: AuctionInstance) -> str:
    out = io.StringIO()
    out.write("{\n")
    out.write(f'  "format": {json.dumps(FORMAT_TAG)},\n')
    out.write(f'  "k": {instance.k},\n')
    if instance.reserve is not None:
        out.write(f'  "reserve": {json.dumps(_dump_money(instance.reserve))},\n')
    if instance.value_cap is not None:
        out.write(f'  "value_cap": {json.dumps(_dump_money(instance.value_cap))},\n')
    out.write(f'  "seller_followers": {json.dumps(sorted(instance.seller_followers))},\n')
    if not instance.types:
        out.write('  "buyers": []\n}\n')
        return out.getvalue()
    out.write('  "buyers": [\n')
    lines = []
    for i, t in enumerate(instance.types):
        entry = {"id": i}
        if instance.labels is not None:
            entry["label"] = instance.labels[i]
        entry["value"] = _dump_money(t.value)
        entry["followers"] = sorted(t.followers)
        lines.append("    " + json.dumps(entry))
    out.write(",\n".join(lines))
    out.write("\n  ]\n}\n")
    return out.getvalue()


def instance_to_dict(instance: AuctionInstance) -> dict:
    return json.loads(serialize_instance(instance))


# --- outcome rendering ---------------------------------------------------------


def _fmt(x) -> str:
    return "inf" if x == float("inf") else str(x)


def format_outcome(instance: AuctionInstance, outcome: Outcome, mechanism: str, reserve=None) -> str:
    lines = [f"mechanism: {mechanism}"]
    if reserve is not None:
        lines.append(f"reserve: {reserve}")
    lines.append("buyer\tlabel\tallocated\tpayment")
    for i in range(instance.n):
        lines.append(f"{i}\t{instance.label(i)}\t{outcome.allocated[i]}\t{_fmt(outcome.payment[i])}")
    w = outcome.winners
    lines.append("winners: " + ",".join(instance.label(i) for i in w))
    lines.append("payments: " + ",".join(_fmt(outcome.payment[i]) for i in w))
    lines.append(f"surplus: {outcome.surplus}")
    lines.append(f"revenue: {outcome.revenue}")
    return "\n".join(lines) + "\n"


def format_outcome_csv(instance: AuctionInstance, outcome: Outcome, mechanism: str) -> str:
    rows = ["mechanism,buyer,label,allocated,payment"]
    for i in range(instance.n):
        rows.append(f"{mechanism},{i},{instance.label(i)},{outcome.allocated[i]},{_fmt(outcome.payment[i])}")
    return "\n".join(rows) + "\n"


def format_comparison(instance: AuctionInstance, outcomes: dict) -> str:
    names = list(outcomes)
    lines = ["\t".join(["metric", *names])]
    lines.append("\t".join(["winners", *(",".join(instance.label(i) for i in outcomes[m].winners) or "-" for m in names)]))
    lines.append("\t".join(["payments", *(",".join(_fmt(outcomes[m].payment[i]) for i in outcomes[m].winners) or "-" for m in names)]))
    lines.append("\t".join(["surplus", *(str(outcomes[m].surplus) for m in names)]))
    lines.append("\t".join(["revenue", *(str(outcomes[m].revenue) for m in names)]))
    return "\n".join(lines) + "\n"


# --- property reports ------------------------------------------------------------


def _jsonable(x):
    from .network import ReportProfile

    if isinstance(x, AuctionInstance):
        return instance_to_dict(x)
    if isinstance(x, ReportProfile):
        return {"values": [_jsonable(v) for v in x.values], "forwarded": [sorted(f) for f in x.forwarded]}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def format_report(rep: PropertyReport) -> str:
    lines = [f"[{rep.verdict}] {rep.name}"]
    info = {k: v for k, v in rep.info.items() if k not in ("strict", "hiding_example")}
    if info:
        lines.append("info: " + json.dumps(_jsonable(info), sort_keys=True))
    if rep.witness is not None:
        lines.append("witness: " + json.dumps(_jsonable(rep.witness), sort_keys=True))
    return "\n".join(lines) + "\n"
