"""
Minimal resolution dual graphs

Resolves a DuVal germ in split normal form by iterated point blow-ups.
Exceptional curves are the rational factors of each tangent cone; curves
that pass through a singular point of the blow-up are carried into its
resolution, curves meeting at smooth points are joined by an edge. A marked
smooth curve is tracked the same way and records which node it meets.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .blowup import blowup_coordinate_center
from .classifier import DuValType, classify_duval
from .errors import InputNotNormalForm, NotApplicable, StrictTransformMissesGraph
from .ideals import Ideal
from .poly import Poly, VarSet
from .sympy_bridge import factor, nullspace, solve_points

logger = logging.getLogger(__name__)

MAX_DEPTH = 8
CURVE = 'Gamma'

ProjectivePoint = Tuple[Fraction, ...]


@dataclass
class DualGraph:
    """ADE tree of exceptional curves E1..En"""

    kind: DuValType
    nodes: Tuple[str, ...] = ()
    edges: Tuple[Tuple[str, str], ...] = ()
    curve_attachment: Optional[str] = None

    def neighbors(self, label: str) -> List[str]:
        return sorted({b if a == label else a for a, b in self.edges if label in (a, b)},
                      key=self.nodes.index)

    def degree(self, label: str) -> int:
        return len(self.neighbors(label))

    def is_tree(self) -> bool:
        if not self.nodes:
            return True
        if len(self.edges) != len(self.nodes) - 1:
            return False
        seen, stack = set(), [self.nodes[0]]
        while stack:
            node = stack.pop()
            if node not in seen:
                seen.add(node)
                stack.extend(self.neighbors(node))
        return len(seen) == len(self.nodes)

    def describe(self) -> dict:
        return {
            'type': str(self.kind),
            'nodes': list(self.nodes),
            'adjacency': {n: self.neighbors(n) for n in self.nodes},
            'curve_attachment': self.curve_attachment,
        }


def standard_graph(kind: DuValType) -> DualGraph:
    """Canonically labelled graph: longest arm first, then the branch node, then the other arms"""
    n = kind.subscript
    labels = tuple(f"E{i}" for i in range(1, n + 1))
    if kind.tag == 'A':
        arms = None
    elif kind.tag == 'D':
        arms = (n - 3, 1, 1)
    elif kind.tag in ('E6', 'E7', 'E8'):
        arms = {'E6': (2, 2, 1), 'E7': (3, 2, 1), 'E8': (4, 2, 1)}[kind.tag]
    else:
        raise NotApplicable(f"{kind} has no dual graph")
    if arms is None:
        edges = tuple((labels[i], labels[i + 1]) for i in range(n - 1))
        return DualGraph(kind, labels, edges)
    first, second, third = arms
    branch = labels[first]
    edges = [(labels[i], labels[i + 1]) for i in range(first)]
    position = first + 1
    for length in (second, third):
        previous = branch
        for _ in range(length):
            edges.append((previous, labels[position]))
            previous = labels[position]
            position += 1
    return DualGraph(kind, labels, tuple(edges))


def _projective_points(equations_for_chart, names: Sequence[str], varset: VarSet) -> List[ProjectivePoint]:
    """Collect points chart by chart, keeping each point in the first chart that sees it"""
    points = []
    for i, c in enumerate(names):
        equations = equations_for_chart(c) + [Poly.variable(varset, v) for v in names[:i]]
        found = solve_points(equations, varset)
        if found.irrational:
            raise InputNotNormalForm(f"irrational points on the exceptional curve (chart {c}); "
                                     "bring the germ to a split normal form")
        if found.positive_dimensional:
            raise InputNotNormalForm(f"non-isolated locus in chart {c}")
        for pt in found.rational:
            points.append(tuple(Fraction(1) if v == c else pt[v] for v in names))
    return points


def _chart_of(point: ProjectivePoint) -> int:
    return next(i for i, v in enumerate(point) if v)


def _normalize(vector: Sequence[Fraction]) -> ProjectivePoint:
    lead = vector[_chart_of(vector)]
    return tuple(Fraction(v) / lead for v in vector)


def _direction(curve: Ideal) -> ProjectivePoint:
    """Tangent direction of a smooth curve given by linear forms"""
    names = curve.varset.names
    rows = []
    for g in curve.generators:
        if g.total_degree != 1 or not g.homogeneous_part(1) == g:
            raise InputNotNormalForm(f"tracked curves must be given by linear forms, got {g}")
        rows.append({j: g.coefficient({n: 1}) for j, n in enumerate(names)})
    kernel = nullspace(rows, len(names))
    if len(kernel) != 1:
        raise InputNotNormalForm(f"{curve} is not a smooth curve through the origin")
    return _normalize(kernel[0])


def _value_at(h: Poly, point: ProjectivePoint) -> Fraction:
    return h.evaluate(dict(zip(h.varset.names, point)))


class _Resolver:
    """Accumulates nodes and edges over the recursion"""

    def __init__(self, max_depth: int = MAX_DEPTH):
        self.max_depth = max_depth
        self.counter = 0
        self.nodes: List[str] = []
        self.edges: Set[Tuple[str, str]] = set()
        self.attachments: Set[str] = set()

    def _new_label(self) -> str:
        self.counter += 1
        label = f"C{self.counter}"
        self.nodes.append(label)
        return label

    def _join(self, a: str, b: str):
        if a == CURVE or b == CURVE:
            self.attachments.add(b if a == CURVE else a)
        elif a != b:
            self.edges.add(tuple(sorted((a, b), key=lambda s: int(s[1:]))))

    def resolve(self, f: Poly, tracked: List[Tuple[str, Ideal]], depth: int = 0):
        kind = classify_duval(f)
        if not kind.is_duval:
            raise InputNotNormalForm(f"{f} is not a DuVal germ ({kind})")
        if depth >= self.max_depth:
            raise InputNotNormalForm(f"resolution of {f} exceeds depth {self.max_depth}")
        varset = f.varset
        names = varset.names
        _, factors = factor(f.lowest_form())
        cones = [h for h, _ in factors if not h.is_constant()]
        if kind.tag == 'A' and kind.n >= 2 and len(cones) < 2:
            raise InputNotNormalForm(f"tangent cone of {f} does not split over QQ")
        curves = [(self._new_label(), h) for h in cones]
        charts = {c: blowup_coordinate_center(f, names, c) for c in names}
        logger.debug("resolve depth %d: %s is %s, new curves %s", depth, f, kind, [l for l, _ in curves])

        def singular_equations(c):
            strict = charts[c].strict_transform
            return [strict, Poly.variable(varset, c)] + [strict.partial(v) for v in names]

        children: Dict[ProjectivePoint, List[Tuple[str, Ideal]]] = {
            p: [] for p in _projective_points(singular_equations, names, varset)}

        def carry(point: ProjectivePoint, label: str, ideal: Ideal):
            if all(label != l for l, _ in children[point]):
                children[point].append((label, ideal))

        def local_ideal(point: ProjectivePoint, h: Optional[Poly]) -> Ideal:
            c = names[_chart_of(point)]
            shift = {v: p for v, p in zip(names, point) if v != c}
            if h is None:
                return Ideal(tuple(Poly.variable(varset, v) for v in names if v != c))
            affine = h.restrict({c: 1}).translate(shift)
            return Ideal((Poly.variable(varset, c), affine))

        for label, h in curves:
            for point in children:
                if not _value_at(h, point):
                    carry(point, label, local_ideal(point, h))

        for (a, ha), (b, hb) in combinations(curves, 2):
            for point in _projective_points(lambda c: [ha.restrict({c: 1}), hb.restrict({c: 1}),
                                                       Poly.variable(varset, c) - 1], names, varset):
                if point not in children:
                    self._join(a, b)

        for label, ideal in tracked:
            point = _direction(ideal)
            if point in children:
                carry(point, label, local_ideal(point, None))
                continue
            hits = [l for l, h in curves if not _value_at(h, point)]
            if not hits:
                raise StrictTransformMissesGraph(f"curve {label} does not meet the exceptional divisor of {f}")
            for hit in hits:
                self._join(label, hit)

        for point, carried in sorted(children.items()):
            c = names[_chart_of(point)]
            shift = {v: p for v, p in zip(names, point) if v != c}
            local = charts[c].strict_transform.translate(shift)
            self.resolve(local, carried, depth + 1)


def _relabel(kind: DuValType, nodes: List[str], edges: Set[Tuple[str, str]]) -> Dict[str, str]:
    """Map internal labels onto the canonical E1..En labelling of the type"""
    order = {label: i for i, label in enumerate(nodes)}
    adjacency = {n: set() for n in nodes}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)

    def walk(start: str, avoid: Optional[str]) -> List[str]:
        path, previous, current = [], avoid, start
        while True:
            path.append(current)
            following = [n for n in adjacency[current] if n != previous]
            if len(following) != 1:
                return path
            previous, current = current, following[0]

    branches = [n for n in nodes if len(adjacency[n]) >= 3]
    if not branches:
        ends = sorted((n for n in nodes if len(adjacency[n]) <= 1), key=order.get)
        sequence = walk(ends[0], None)
    else:
        branch = branches[0]
        arms = [walk(start, branch) for start in sorted(adjacency[branch], key=order.get)]
        arms.sort(key=lambda arm: -len(arm))
        sequence = list(reversed(arms[0])) + [branch] + [n for arm in arms[1:] for n in arm]
    if len(sequence) != len(nodes):
        raise InputNotNormalForm(f"resolution graph of type {kind} is not an ADE tree")
    return {label: f"E{i}" for i, label in enumerate(sequence, start=1)}


def minimal_resolution_dual_graph(f: Poly, curve: Optional[Ideal] = None,
                                  which: Optional[DuValType] = None) -> DualGraph:
    """
    Dual graph of the minimal resolution of f = 0 at the origin

    Args:
        f: Germ in a split normal form (tangent cones factor over QQ)
        curve: Optional smooth curve through the origin, given by linear forms
        which: Expected type; classified when omitted

    Returns:
        DualGraph with canonical labels and the curve attachment node

    Raises:
        InputNotNormalForm: a tangent cone does not split or the tree is not
            of the expected type. Without a curve, germs whose cones do not
            split get the standard graph of their type instead.
    """
    kind = which or classify_duval(f)
    if kind.tag == 'Smooth':
        return DualGraph(kind)
    if not kind.is_duval:
        raise NotApplicable(f"{f} is not a DuVal germ")
    resolver = _Resolver()
    tracked = [(CURVE, curve)] if curve is not None else []
    try:
        resolver.resolve(f, tracked)
    except InputNotNormalForm:
        if curve is not None:
            raise
        logger.debug("%s does not resolve over QQ; using the standard %s graph", f, kind)
        return standard_graph(kind)

    if len(resolver.nodes) != kind.subscript:
        raise InputNotNormalForm(f"resolution produced {len(resolver.nodes)} curves for type {kind}")
    mapping = _relabel(kind, resolver.nodes, resolver.edges)
    nodes = tuple(sorted(mapping.values(), key=lambda s: int(s[1:])))
    edges = tuple(sorted(tuple(sorted((mapping[a], mapping[b]), key=lambda s: int(s[1:])))
                         for a, b in resolver.edges))
    attachment = None
    if curve is not None:
        if len(resolver.attachments) != 1:
            raise InputNotNormalForm(f"curve meets {len(resolver.attachments)} exceptional curves")
        attachment = mapping[resolver.attachments.pop()]
    graph = DualGraph(kind, nodes, edges, attachment)
    if not graph.is_tree():
        raise InputNotNormalForm(f"resolution graph of {f} is not a tree")
    return graph


def curve_position(f: Poly, curve: Ideal) -> str:
    """
    DF_l or DF_r position of a smooth curve on a D-type germ

    DF_l when the curve meets the end of the long arm (E1), DF_r when it
    meets one of the two fork ends. On D4 every end is a fork end.

    Raises:
        NotApplicable: the germ is not of type D
        StrictTransformMissesGraph: the curve misses the singular point
    """
    kind = classify_duval(f)
    if kind.tag != 'D':
        raise NotApplicable(f"curve position is defined for D-type germs, got {kind}")
    for g in curve.generators:
        if g.constant_term:
            raise StrictTransformMissesGraph(f"{curve} does not pass through the singular point")
    graph = minimal_resolution_dual_graph(f, curve, kind)
    n = kind.n
    position = int(graph.curve_attachment[1:])
    if n == 4 and position != 2:
        return 'DF_r'
    if position == 1:
        return 'DF_l'
    if position in (n - 1, n):
        return 'DF_r'
    raise InputNotNormalForm(f"curve meets the inner node {graph.curve_attachment}")


def surface_crepant_count(f: Poly) -> int:
    """Number of exceptional curves of the minimal resolution (all crepant)"""
    kind = classify_duval(f)
    if kind.tag == 'Smooth':
        return 0
    if not kind.is_duval:
        raise NotApplicable(f"{f} is not a DuVal germ")
    return len(minimal_resolution_dual_graph(f, which=kind).nodes)
