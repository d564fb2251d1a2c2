"""Attack/impact surfaces, attack paths, cut points and asset ranking.

The analysis graph has one node per entry point, component and resource.
Edges run entry -> component (the entry's target), component -> component
(one per distinct channel pair) and component -> resource (one per access
edge, any mode).  Paths are node-simple sequences from an entry point to a
resource at or above a value threshold; a path may not revisit a node even
through a different component on the same host.  Channels count for
reachability whether or not they are encrypted; encryption is a
confidentiality property handled by the weakness rules.

A channel into a component whose principal strictly outranks the caller's is
annotated as an escalation step on every path that traverses it.

All functions are pure over an immutable model and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

from portsec.archmodel import EntryPoint, Resource, SystemModel, ValueLevel

DEFAULT_MAX_LENGTH = 12
DEFAULT_MAX_PATHS = 10_000


@dataclass(frozen=True)
class AccessGraph:
    nodes: tuple[str, ...]
    kinds: dict[str, str]  # node id -> "entry" | "component" | "resource"
    adjacency: dict[str, tuple[str, ...]]  # sorted successors
    escalations: frozenset[tuple[str, str]]

    def successors(self, node: str) -> tuple[str, ...]:
        return self.adjacency.get(node, ())


@dataclass(frozen=True)
class AttackPath:
    nodes: tuple[str, ...]
    entry: str
    resource: str
    target_value: ValueLevel
    escalations: tuple[tuple[str, str], ...] = ()

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    @property
    def length(self) -> int:
        return len(self.nodes) - 1


@dataclass(frozen=True)
class PathEnumeration:
    paths: tuple[AttackPath, ...]
    truncated: bool


@dataclass(frozen=True)
class PairCuts:
    entry: str
    resource: str
    paths: tuple[AttackPath, ...]
    cuts: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class CutReport:
    pairs: tuple[PairCuts, ...]
    truncated: bool


def build_graph(model: SystemModel) -> AccessGraph:
    kinds: dict[str, str] = {}
    for entry in model.entry_points:
        kinds[entry.id] = "entry"
    for component in model.components:
        kinds[component.id] = "component"
    for resource in model.resources:
        kinds[resource.id] = "resource"

    successors: dict[str, set[str]] = {node: set() for node in kinds}
    for entry in model.entry_points:
        successors[entry.id].add(entry.component)
    for channel in model.channels:
        successors[channel.source].add(channel.target)
    for access in model.access:
        successors[access.component].add(access.resource)

    ranks = {p.name: p.rank for p in model.principals}
    escalations = set()
    for channel in model.channels:
        caller = model.components_by_id[channel.source]
        callee = model.components_by_id[channel.target]
        if ranks[callee.runs_as] > ranks[caller.runs_as]:
            escalations.add((channel.source, channel.target))

    return AccessGraph(
        nodes=tuple(sorted(kinds)),
        kinds=kinds,
        adjacency={node: tuple(sorted(targets)) for node, targets in successors.items()},
        escalations=frozenset(escalations),
    )


def attack_surface(model: SystemModel) -> dict[str, list[EntryPoint]]:
    """All entry points, split by whether they require authentication."""
    ordered = sorted(model.entry_points, key=lambda e: e.id)
    return {
        "unauthenticated": [e for e in ordered if not e.authenticated],
        "authenticated": [e for e in ordered if e.authenticated],
    }


def impact_surface(model: SystemModel, threshold: ValueLevel = ValueLevel.HIGH) -> list[Resource]:
    """Resources valued at or above the threshold, most valuable first."""
    hits = [r for r in model.resources if r.value.weight >= threshold.weight]
    return sorted(hits, key=lambda r: (-r.value.weight, r.id))


def enumerate_paths(
    model: SystemModel,
    max_length: int = DEFAULT_MAX_LENGTH,
    max_paths: int = DEFAULT_MAX_PATHS,
    threshold: ValueLevel = ValueLevel.HIGH,
) -> PathEnumeration:
    """Every simple path from an entry point to an impact-surface resource.

    Paths are produced in lexicographic node-id order.  `max_length` bounds
    the number of edges; enumeration stops at `max_paths` with the truncation
    flag set.
    """
    if max_length < 2:
        raise ValueError(f"max_length must be at least 2, got {max_length}")
    if max_paths < 1:
        raise ValueError(f"max_paths must be at least 1, got {max_paths}")

    graph = build_graph(model)
    values = {r.id: r.value for r in model.resources}
    targets = {r.id for r in impact_surface(model, threshold)}

    paths: list[AttackPath] = []
    truncated = False

    def record(nodes: list[str]) -> bool:
        escalations = tuple(
            edge for edge in zip(nodes, nodes[1:]) if edge in graph.escalations
        )
        paths.append(AttackPath(
            nodes=tuple(nodes),
            entry=nodes[0],
            resource=nodes[-1],
            target_value=values[nodes[-1]],
            escalations=escalations,
        ))
        return len(paths) < max_paths

    def extend(nodes: list[str], visited: set[str]) -> bool:
        if len(nodes) - 1 >= max_length:
            return True
        for successor in graph.successors(nodes[-1]):
            if successor in visited:
                continue
            if graph.kinds[successor] == "resource":
                if successor in targets:
                    nodes.append(successor)
                    keep_going = record(nodes)
                    nodes.pop()
                    if not keep_going:
                        return False
                continue
            nodes.append(successor)
            visited.add(successor)
            keep_going = extend(nodes, visited)
            nodes.pop()
            visited.discard(successor)
            if not keep_going:
                return False
        return True

    for entry in sorted(e.id for e in model.entry_points):
        if not extend([entry], {entry}):
            truncated = True
            break

    return PathEnumeration(paths=tuple(paths), truncated=truncated)


def _reachable(graph: AccessGraph, source: str, target: str,
               removed_edge: tuple[str, str] | None = None) -> bool:
    stack = [source]
    seen = {source}
    while stack:
        node = stack.pop()
        if node == target:
            return True
        for successor in graph.successors(node):
            if removed_edge == (node, successor) or successor in seen:
                continue
            seen.add(successor)
            stack.append(successor)
    return False


def cut_points(model: SystemModel, enumeration: PathEnumeration | list[AttackPath]) -> CutReport:
    """Per (entry, resource) pair, the edges on every enumerated path that,
    when removed, verifiably disconnect the pair."""
    if isinstance(enumeration, PathEnumeration):
        paths = enumeration.paths
        truncated = enumeration.truncated
    else:
        paths = tuple(enumeration)
        truncated = False

    graph = build_graph(model)
    grouped: dict[tuple[str, str], list[AttackPath]] = {}
    for path in paths:
        grouped.setdefault((path.entry, path.resource), []).append(path)

    pairs = []
    for (entry, resource), pair_paths in sorted(grouped.items()):
        common = set(pair_paths[0].edges)
        for path in pair_paths[1:]:
            common &= set(path.edges)
        verified = tuple(
            edge for edge in sorted(common)
            if not _reachable(graph, entry, resource, removed_edge=edge)
        )
        pairs.append(PairCuts(entry, resource, tuple(pair_paths), verified))
    return CutReport(pairs=tuple(pairs), truncated=truncated)


@dataclass(frozen=True)
class RankedAsset:
    resource: str
    value: ValueLevel
    reach_count: int


def rank_assets(model: SystemModel) -> list[RankedAsset]:
    """Resources ordered by value, then by how many entry points can reach them."""
    graph = build_graph(model)
    entries = [e.id for e in model.entry_points]
    ranked = []
    for resource in model.resources:
        reach = sum(1 for entry in entries if _reachable(graph, entry, resource.id))
        ranked.append(RankedAsset(resource.id, resource.value, reach))
    ranked.sort(key=lambda a: (-a.value.weight, -a.reach_count, a.resource))
    return ranked
