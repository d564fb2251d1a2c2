"""DOT diagram emission for system models and simulation traces.

Model diagrams group components into one cluster per host, label each
component with the principal it runs as, and draw the most privileged
principal's components in a distinct fill from administrator-level ones.
Resources get shapes by kind; channel edges carry encryption labels, access
edges carry mode letters.  Trace diagrams draw the parties and one edge per
fired transaction in sequence order.  Output is deterministic text.
"""

from __future__ import annotations

from portsec.archmodel import ResourceKind, SystemModel
from portsec.simulator import ShipmentTrace

_RESOURCE_SHAPES = {
    ResourceKind.FILE: "note",
    ResourceKind.DATABASE: "cylinder",
    ResourceKind.DATABASE_TABLE: "cylinder",
    ResourceKind.LOG: "note",
    ResourceKind.CONFIG: "note",
    ResourceKind.CREDENTIAL_STORE: "box3d",
    ResourceKind.DEVICE: "component",
}


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _label(*parts: str) -> str:
    """Multi-line node label: each part on its own line."""
    escaped = [p.replace("\\", "\\\\").replace('"', '\\"') for p in parts]
    return '"' + "\\n".join(escaped) + '"'


def render_model_dot(model: SystemModel) -> str:
    ranks = {p.name: p.rank for p in model.principals}
    top_rank = max(ranks.values()) if ranks else 0

    lines = [
        "digraph system_model {",
        "  rankdir=LR;",
        "  node [fontname=Helvetica];",
    ]

    for index, host in enumerate(model.hosts):
        lines.append(f"  subgraph cluster_host_{index} {{")
        lines.append(f"    label={_quote(host.name)};")
        lines.append("    style=rounded;")
        for component in model.components:
            if component.host != host.name:
                continue
            privileged = ranks.get(component.runs_as, 0) == top_rank
            fill = "orange" if privileged else "palegreen"
            label = _label(component.id, f"({component.runs_as})")
            lines.append(
                f"    {_quote(component.id)} [shape=box, style=filled, "
                f"fillcolor={fill}, label={label}];"
            )
        lines.append("  }")

    for resource in model.resources:
        shape = _RESOURCE_SHAPES[resource.kind]
        label = _label(resource.id, f"[{resource.value.value}]")
        lines.append(
            f"  {_quote(resource.id)} [shape={shape}, label={label}];"
        )

    for entry in model.entry_points:
        auth = "auth" if entry.authenticated else "no auth"
        label = _label(entry.id, f"({entry.actor_role}, {auth})")
        lines.append(
            f"  {_quote(entry.id)} [shape=ellipse, style=dashed, "
            f"label={label}];"
        )
        lines.append(f"  {_quote(entry.id)} -> {_quote(entry.component)};")

    for channel in model.channels:
        security = "encrypted" if channel.encrypted else "cleartext"
        carries = ",".join(sorted(p.value for p in channel.carries))
        label = f"{security}: {carries}" if carries else security
        style = "" if channel.encrypted else ", color=red"
        lines.append(
            f"  {_quote(channel.source)} -> {_quote(channel.target)} "
            f"[label={_quote(label)}{style}];"
        )

    for access in model.access:
        modes = "".join(m.value[0] for m in sorted(access.modes, key=lambda m: m.value))
        lines.append(
            f"  {_quote(access.component)} -> {_quote(access.resource)} "
            f"[style=dashed, label={_quote(modes)}];"
        )

    lines.append("}")
    return "\n".join(lines) + "\n"


def render_dot(subject: SystemModel | ShipmentTrace) -> str:
    """Render either input kind to DOT text."""
    if isinstance(subject, SystemModel):
        return render_model_dot(subject)
    if isinstance(subject, ShipmentTrace):
        return render_trace_dot(subject)
    raise TypeError(f"cannot render {type(subject).__name__}")


def render_trace_dot(trace: ShipmentTrace) -> str:
    from portsec import catalog as cat

    lines = [
        "digraph shipment_trace {",
        "  rankdir=LR;",
        "  node [shape=box, fontname=Helvetica];",
    ]
    parties = sorted({a.value for a in cat.Actor})
    for party in parties:
        lines.append(f"  {_quote(party)};")
    for event in trace.events:
        spec = cat.transaction(event.transaction)
        dropped = event.effect.get("type") == "dropped"
        label = f"{event.seq}: {spec.id}"
        style = ", style=dotted" if dropped else ""
        lines.append(
            f"  {_quote(spec.from_actor.value)} -> {_quote(spec.to_actor.value)} "
            f"[label={_quote(label)}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
