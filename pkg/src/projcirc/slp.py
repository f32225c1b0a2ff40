"""Straight-line-program text format and DOT export.

Line-based UTF-8 with ``#`` comments::

    blocks x:3 y:2
    field gf 101        # or: field q
    g1 = input x 0
    g3 = sum 2*g1 3*g1  # parallel edges allowed
    g4 = prod 1*g3 1*g2
    outputs g4

Exactly one ``blocks``, one ``field`` and one ``outputs`` line.  Weights
are field-element literals (decimal for GF(p), ``a/b`` for rationals) and
are canonicalized on parse.
"""

from __future__ import annotations

from .circuit import INPUT, PROD, SUM, BlockSpec, Circuit, CircuitBuilder, validate
from .errors import DuplicateId, SlpSyntaxError, UnknownGateRef
from .field import GF, QQ, FieldDescriptor


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_slp(text: str) -> Circuit:
    blocks = None
    field = None
    builder = None
    names = {}
    outputs = None
    seen_outputs_line = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "blocks":
            if blocks is not None:
                raise SlpSyntaxError(line_no, "duplicate blocks line")
            try:
                pairs = [t.split(":") for t in tokens[1:]]
                blocks = BlockSpec.of(*((n, int(c)) for n, c in pairs))
            except (ValueError, IndexError):
                raise SlpSyntaxError(line_no, f"malformed blocks line {line!r}") from None
        elif head == "field":
            if field is not None:
                raise SlpSyntaxError(line_no, "duplicate field line")
            if tokens[1:] == ["q"]:
                field = QQ()
            elif len(tokens) == 3 and tokens[1] == "gf":
                try:
                    field = GF(int(tokens[2]))
                except ValueError:
                    raise SlpSyntaxError(line_no, "bad modulus") from None
            else:
                raise SlpSyntaxError(line_no, f"malformed field line {line!r}")
        elif head == "outputs":
            if seen_outputs_line:
                raise SlpSyntaxError(line_no, "duplicate outputs line")
            seen_outputs_line = True
            outputs = []
            for t in tokens[1:]:
                if t not in names:
                    raise UnknownGateRef(f"line {line_no}: unknown gate {t!r}")
                outputs.append(names[t])
        else:
            if blocks is None or field is None:
                raise SlpSyntaxError(line_no, "gate line before blocks/field header")
            if builder is None:
                builder = CircuitBuilder(blocks, field)
            if len(tokens) < 3 or tokens[1] != "=":
                raise SlpSyntaxError(line_no, f"malformed gate line {line!r}")
            name, op = tokens[0], tokens[2]
            if name in names:
                raise DuplicateId(f"line {line_no}: gate {name!r} already defined")
            if op == "input":
                if len(tokens) != 5:
                    raise SlpSyntaxError(line_no, "input lines read: id = input block index")
                try:
                    names[name] = builder.var(tokens[3], int(tokens[4]))
                except Exception:
                    raise SlpSyntaxError(line_no, f"bad input reference {line!r}") from None
            elif op in ("sum", "prod"):
                terms = []
                for t in tokens[3:]:
                    if "*" not in t:
                        raise SlpSyntaxError(line_no, f"term {t!r} is not weight*gate")
                    w, _, ref = t.rpartition("*")
                    if ref not in names:
                        raise UnknownGateRef(f"line {line_no}: unknown gate {ref!r}")
                    try:
                        terms.append((field.elem(w), names[ref]))
                    except (ValueError, ZeroDivisionError):
                        raise SlpSyntaxError(line_no, f"bad weight {w!r}") from None
                if not terms:
                    raise SlpSyntaxError(line_no, "gate with no inputs")
                add = builder.add_sum if op == "sum" else builder.add_prod
                names[name] = add(terms)
            else:
                raise SlpSyntaxError(line_no, f"unknown gate kind {op!r}")
    if blocks is None:
        raise SlpSyntaxError(0, "missing blocks line")
    if field is None:
        raise SlpSyntaxError(0, "missing field line")
    if outputs is None:
        raise SlpSyntaxError(0, "missing outputs line")
    if builder is None:
        builder = CircuitBuilder(blocks, field)
    builder.set_outputs(outputs)
    return builder.build()


def serialize_slp(c: Circuit) -> str:
    lines = ["blocks " + " ".join(f"{n}:{cnt}" for n, cnt in c.blocks.blocks)]
    lines.append(f"field {c.field}")
    for g in range(c.nvars):
        b, i = c.blocks.var_of_gate(g)
        lines.append(f"g{g} = input {c.blocks.names[b]} {i}")
    starts = c.starts()
    for g in range(c.nvars, c.ngates):
        op = "sum" if c.kinds[g] == SUM else "prod"
        terms = " ".join(
            f"{c.field.elem(c.weights[i]).literal()}*g{c.edge_src[i]}"
            for i in range(starts[g], starts[g + 1])
        )
        lines.append(f"g{g} = {op} {terms}")
    lines.append("outputs " + " ".join(f"g{g}" for g in c.outputs))
    return "\n".join(lines) + "\n"


_KIND_NAMES = {INPUT: "in", SUM: "sum", PROD: "prod"}


def export_dot(c: Circuit) -> str:
    """Read-only Graphviz view: nodes labeled kind:degree, edges by weight."""
    report = validate(c)
    lines = ["digraph circuit {"]
    for g in range(c.ngates):
        label = f"{_KIND_NAMES[int(c.kinds[g])]}:{','.join(map(str, report.degree(g)))}"
        if c.kinds[g] == INPUT:
            b, i = c.blocks.var_of_gate(g)
            label = f"{c.blocks.names[b]}{i}:{','.join(map(str, report.degree(g)))}"
        shape = "doublecircle" if g in c.outputs else "circle"
        lines.append(f'  g{g} [label="{label}" shape={shape}];')
    for e in range(c.nedges):
        w = c.field.elem(c.weights[e]).literal()
        lines.append(f'  g{c.edge_src[e]} -> g{c.edge_dst[e]} [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
