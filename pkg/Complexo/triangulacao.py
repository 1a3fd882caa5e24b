"""Triangulações simpliciais de 3-variedades fechadas: incidência, graus, validação e geradores."""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

import numpy as np

from Utilidades.erros import ComplexError, DomainError

logger = logging.getLogger(__name__)

# Graus que separam os dois lados da dicotomia do fluxo.
DEGREE_HIGH = 23
DEGREE_LOW = 22


@dataclass(frozen=True)
class Complex:
    """
    Complexo simplicial: N vértices e a lista ordenada de tetraedros (quádruplas de índices).
    Incidência, arestas, triângulos e graus são derivados na construção.
    """

    vertex_count: int
    tetrahedra: tuple
    incident: tuple = field(init=False, repr=False, compare=False)
    edges: tuple = field(init=False, repr=False, compare=False)
    triangles: tuple = field(init=False, repr=False, compare=False)
    degrees: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n <= 0:
            raise ComplexError(f"vertex_count deve ser inteiro positivo, recebeu {n!r}")
        object.__setattr__(self, "vertex_count", int(n))
        tets = []
        seen = {}
        for idx, tet in enumerate(self.tetrahedra):
            tet = tuple(int(v) for v in tet)
            if len(tet) != 4:
                raise ComplexError(f"Tetraedro {idx} tem {len(tet)} vértices")
            for v in tet:
                if v < 0 or v >= n:
                    raise ComplexError(f"Tetraedro {idx}: índice {v} fora de [0, {n})")
            if len(set(tet)) != 4:
                raise ComplexError(f"Tetraedro {idx}: vértices repetidos {tet}")
            key = frozenset(tet)
            if key in seen:
                raise ComplexError(f"Tetraedro {idx} duplica o tetraedro {seen[key]}: {tet}")
            seen[key] = idx
            tets.append(tet)
        object.__setattr__(self, "tetrahedra", tuple(tets))
        self._build_incidence()

    def _build_incidence(self):
        incident = [[] for _ in range(self.vertex_count)]
        edges = set()
        triangles = set()
        for idx, tet in enumerate(self.tetrahedra):
            for v in tet:
                incident[v].append(idx)
            edges.update(tuple(sorted(e)) for e in combinations(tet, 2))
            triangles.update(tuple(sorted(t)) for t in combinations(tet, 3))
        isolated = [v for v, inc in enumerate(incident) if not inc]
        if isolated:
            raise ComplexError(f"Vértices sem tetraedro incidente: {isolated}")
        object.__setattr__(self, "incident", tuple(tuple(inc) for inc in incident))
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "triangles", tuple(sorted(triangles)))
        object.__setattr__(self, "degrees", tuple(len(inc) for inc in incident))
        logger.debug(f"_build_incidence: N={self.vertex_count}, "
                     f"{len(self.tetrahedra)} tetraedros, {len(edges)} arestas, {len(triangles)} triângulos")

    @property
    def tetra_count(self):
        return len(self.tetrahedra)

    def rebuilt(self):
        """Novo Complex reconstruído a partir da lista de tetraedros."""
        return Complex(self.vertex_count, self.tetrahedra)

    def without(self, tet_index):
        """Cópia sem o tetraedro de índice tet_index (mesmo N)."""
        tets = tuple(t for idx, t in enumerate(self.tetrahedra) if idx != tet_index)
        return Complex(self.vertex_count, tets)


def tetra_degrees(c):
    """d_i: número de tetraedros que contêm o vértice i."""
    return c.degrees


@dataclass
class ValidationReport:
    """Resultado de validate(): cada verificação de variedade fechada e os graus."""

    triangle_pairing_ok: bool
    bad_triangles: list
    edge_links_ok: bool
    bad_edges: list
    vertex_links_ok: bool
    vertex_link_euler: list
    bad_vertices: list
    d_min: int
    d_max: int

    @property
    def degree_at_least_23(self):
        return self.d_min >= DEGREE_HIGH

    @property
    def degree_at_most_22(self):
        return self.d_max <= DEGREE_LOW

    @property
    def tetra_regular(self):
        return self.d_min == self.d_max

    @property
    def passed(self):
        return self.triangle_pairing_ok and self.edge_links_ok and self.vertex_links_ok

    def failed_checks(self):
        names = []
        if not self.triangle_pairing_ok:
            names.append("triangle_pairing")
        if not self.edge_links_ok:
            names.append("edge_links")
        if not self.vertex_links_ok:
            names.append("vertex_links")
        return names

    def to_dict(self):
        return {
            "passed": self.passed,
            "failed_checks": self.failed_checks(),
            "triangle_pairing_ok": self.triangle_pairing_ok,
            "bad_triangles": [list(t) for t in self.bad_triangles],
            "edge_links_ok": self.edge_links_ok,
            "bad_edges": [list(e) for e in self.bad_edges],
            "vertex_links_ok": self.vertex_links_ok,
            "vertex_link_euler": list(self.vertex_link_euler),
            "bad_vertices": list(self.bad_vertices),
            "d_min": self.d_min,
            "d_max": self.d_max,
            "degree_at_least_23": self.degree_at_least_23,
            "degree_at_most_22": self.degree_at_most_22,
            "tetra_regular": self.tetra_regular,
        }


def _connected(vertices, edges):
    if not vertices:
        return False
    adj = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == set(vertices)


class ManifoldValidator:
    """Verificações combinatórias de que um Complex triangula uma 3-variedade fechada."""

    def check_triangle_pairing(self, c):
        """Cada triângulo deve estar em exatamente dois tetraedros."""
        counts = Counter()
        for tet in c.tetrahedra:
            for tri in combinations(sorted(tet), 3):
                counts[tri] += 1
        bad = sorted(tri for tri, n in counts.items() if n != 2)
        logger.debug(f"check_triangle_pairing: {len(counts)} triângulos, {len(bad)} com multiplicidade != 2")
        return not bad, bad

    def check_edge_links(self, c):
        """O link de cada aresta deve ser um único ciclo."""
        links = defaultdict(list)
        for tet in c.tetrahedra:
            for a, b in combinations(sorted(tet), 2):
                rest = tuple(sorted(v for v in tet if v != a and v != b))
                links[(a, b)].append(rest)
        bad = []
        for edge, link_edges in sorted(links.items()):
            valence = Counter(v for e in link_edges for v in e)
            is_cycle = (len(link_edges) >= 3
                        and len(set(link_edges)) == len(link_edges)
                        and all(n == 2 for n in valence.values())
                        and len(valence) == len(link_edges)
                        and _connected(set(valence), link_edges))
            if not is_cycle:
                bad.append(edge)
        logger.debug(f"check_edge_links: {len(links)} arestas, {len(bad)} com link que não é ciclo")
        return not bad, bad

    def check_vertex_links(self, c):
        """O link de cada vértice deve ser uma superfície conexa com característica de Euler 2."""
        euler = []
        bad = []
        for v in range(c.vertex_count):
            tris = [tuple(sorted(u for u in c.tetrahedra[t] if u != v)) for t in c.incident[v]]
            link_edges = Counter(e for tri in tris for e in combinations(tri, 2))
            link_vertices = {u for tri in tris for u in tri}
            chi = len(link_vertices) - len(link_edges) + len(tris)
            euler.append(chi)
            surface = all(n == 2 for n in link_edges.values())
            if chi != 2 or not surface or not _connected(link_vertices, list(link_edges)):
                bad.append(v)
        logger.debug(f"check_vertex_links: {len(bad)} vértices com link inválido")
        return not bad, euler, bad

    def validate(self, c):
        """Executa as três verificações e monta o ValidationReport."""
        pairing_ok, bad_triangles = self.check_triangle_pairing(c)
        edges_ok, bad_edges = self.check_edge_links(c)
        vertices_ok, euler, bad_vertices = self.check_vertex_links(c)
        report = ValidationReport(
            triangle_pairing_ok=pairing_ok,
            bad_triangles=bad_triangles,
            edge_links_ok=edges_ok,
            bad_edges=bad_edges,
            vertex_links_ok=vertices_ok,
            vertex_link_euler=euler,
            bad_vertices=bad_vertices,
            d_min=min(c.degrees),
            d_max=max(c.degrees),
        )
        logger.info(f"validate: N={c.vertex_count}, {c.tetra_count} tetraedros, "
                    f"aprovado={report.passed}, d_min={report.d_min}, d_max={report.d_max}")
        return report


def validate(c):
    """Relatório de variedade fechada; falhas são entradas do relatório, nunca exceções."""
    return ManifoldValidator().validate(c)


def _even_permutations(n):
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        if inversions % 2 == 0:
            yield perm


class TriangulationGenerator:
    """Triangulações de S³ embutidas, usadas como substrato de testes do fluxo."""

    KINDS = ("pentachoron", "sixteen_cell", "six_hundred_cell")

    def generate(self, kind):
        """
        Interface para selecionar uma triangulação embutida.

        Parâmetros:
        - kind: "pentachoron", "sixteen_cell" ou "six_hundred_cell"
          ("six_hundred_cell_optional" é aceito como sinônimo).
        """
        if kind == "pentachoron":
            return self.pentachoron()
        elif kind == "sixteen_cell":
            return self.sixteen_cell()
        elif kind in ("six_hundred_cell", "six_hundred_cell_optional"):
            return self.six_hundred_cell()
        else:
            raise DomainError(f"Tipo de triangulação desconhecido: {kind}")

    def pentachoron(self):
        """Bordo do 4-simplexo: 5 vértices, as 5 quádruplas, todo d_i = 4."""
        return Complex(5, tuple(combinations(range(5), 4)))

    def sixteen_cell(self):
        """
        Bordo do politopo cruzado de dimensão 4: o vértice 2a é +e_a e 2a+1 é -e_a;
        os 16 tetraedros escolhem um vértice de cada par antipodal. Todo d_i = 8.
        """
        tets = tuple(tuple(2 * a + s for a, s in enumerate(signs)) for signs in product((0, 1), repeat=4))
        return Complex(8, tets)

    def six_hundred_cell(self):
        """
        Bordo do 600-cell: 120 vértices unitários, arestas entre pares com produto interno φ/2,
        tetraedros = 4-cliques do grafo de arestas. Todo d_i = 20.
        """
        phi = (1.0 + math.sqrt(5.0)) / 2.0
        points = []
        for a in range(4):
            for s in (1.0, -1.0):
                p = [0.0] * 4
                p[a] = s
                points.append(p)
        points.extend([0.5 * s for s in signs] for signs in product((1.0, -1.0), repeat=4))
        base = (phi, 1.0, 1.0 / phi, 0.0)
        for perm in _even_permutations(4):
            for signs in product((1.0, -1.0), repeat=3):
                values = list(base[:3])
                values = [0.5 * v * s for v, s in zip(values, signs)] + [0.0]
                p = [0.0] * 4
                for src, dst in enumerate(perm):
                    p[dst] = values[src]
                points.append(p)
        pts = np.array(points)
        gram = pts @ pts.T
        adjacency = np.abs(gram - phi / 2.0) < 1e-9
        neighbors = [set(np.flatnonzero(adjacency[v]).tolist()) for v in range(len(pts))]
        tets = []
        for a in range(len(pts)):
            for b in sorted(w for w in neighbors[a] if w > a):
                common_ab = neighbors[a] & neighbors[b]
                for c in sorted(w for w in common_ab if w > b):
                    for d in sorted(w for w in common_ab & neighbors[c] if w > c):
                        tets.append((a, b, c, d))
        logger.debug(f"six_hundred_cell: {len(pts)} vértices, {len(tets)} tetraedros")
        return Complex(len(pts), tuple(tets))


def generate(kind):
    """Atalho para TriangulationGenerator().generate(kind)."""
    return TriangulationGenerator().generate(kind)


@dataclass(frozen=True)
class Packing:
    """Empacotamento por bolas: um raio positivo por vértice."""

    radii: tuple

    def __post_init__(self):
        values = tuple(float(x) for x in self.radii)
        if not values:
            raise DomainError("Packing vazio")
        for i, x in enumerate(values):
            if not math.isfinite(x) or x <= 0.0:
                raise DomainError(f"Raio r_{i} = {x} não é positivo")
        object.__setattr__(self, "radii", values)

    @classmethod
    def uniform(cls, n, t):
        """t·𝟙 com n vértices."""
        return cls((float(t),) * int(n))

    def __len__(self):
        return len(self.radii)

    def __getitem__(self, i):
        return self.radii[i]

    def as_array(self):
        return np.array(self.radii, dtype=float)

    def check_length(self, c):
        """Confere que há um raio por vértice de c; devolve o próprio Packing."""
        if len(self.radii) != c.vertex_count:
            raise DomainError(f"Packing com {len(self.radii)} raios para complexo com N={c.vertex_count}")
        return self
