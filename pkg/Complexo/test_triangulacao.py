import pytest

from Complexo.triangulacao import Complex, Packing, TriangulationGenerator, generate, tetra_degrees, validate
from Utilidades.erros import ComplexError, DomainError


@pytest.mark.parametrize("kind, n, tets, degree", [
    ("pentachoron", 5, 5, 4),
    ("sixteen_cell", 8, 16, 8),
    ("six_hundred_cell", 120, 600, 20),
])
def test_builtin_triangulations(kind, n, tets, degree):
    c = generate(kind)
    assert c.vertex_count == n
    assert c.tetra_count == tets
    assert set(tetra_degrees(c)) == {degree}
    report = validate(c)
    assert report.passed
    assert report.failed_checks() == []
    assert report.degree_at_most_22
    assert not report.degree_at_least_23
    assert report.tetra_regular
    assert report.vertex_link_euler == [2] * n


def test_generator_alias_and_unknown_kind():
    assert generate("six_hundred_cell_optional").tetra_count == 600
    with pytest.raises(DomainError):
        TriangulationGenerator().generate("torus")


def test_cyclic_boundary_has_degree_24(cyclic15):
    assert cyclic15.tetra_count == 90
    assert set(cyclic15.degrees) == {24}
    report = validate(cyclic15)
    assert report.passed
    assert report.degree_at_least_23
    assert report.d_min == 24


def test_degree_sum_identity(rng, subdivide):
    c = subdivide(generate("sixteen_cell"), rng, 7)
    assert sum(tetra_degrees(c)) == 4 * c.tetra_count
    assert c.vertex_count == 15
    assert validate(c).passed
    assert not validate(c).tetra_regular


def test_incidence_lists():
    c = generate("pentachoron")
    assert c.incident[0] == (0, 1, 2, 3)
    assert len(c.edges) == 10
    assert len(c.triangles) == 10


@pytest.mark.parametrize("n, tets", [
    (0, ((0, 1, 2, 3),)),
    (4, ((0, 1, 2, 4),)),
    (4, ((0, 1, 2, 2),)),
    (4, ((0, 1, 2, 3), (3, 2, 1, 0))),
    (5, ((0, 1, 2, 3),)),
    (4, ((0, 1, 2),)),
])
def test_invalid_complexes(n, tets):
    with pytest.raises(ComplexError):
        Complex(n, tets)


def test_missing_tetrahedron_fails_pairing():
    c = generate("pentachoron").without(0)
    report = validate(c)
    assert not report.passed
    assert "triangle_pairing" in report.failed_checks()
    assert len(report.bad_triangles) == 4


def test_pinched_vertex_fails_vertex_links():
    first = [tuple(v for v in range(5) if v != skip) for skip in range(5)]
    second = [tuple(v for v in (0, 5, 6, 7, 8) if v != skip) for skip in (0, 5, 6, 7, 8)]
    report = validate(Complex(9, tuple(first + second)))
    assert report.failed_checks() == ["vertex_links"]
    assert report.bad_vertices == [0]
    assert report.vertex_link_euler[0] == 4


def test_report_to_dict_flags():
    data = validate(generate("pentachoron")).to_dict()
    assert data["passed"] is True
    assert data["d_max"] == 4
    assert data["degree_at_most_22"] is True


def test_packing():
    p = Packing.uniform(5, 1.0)
    assert len(p) == 5 and p[3] == 1.0
    assert p.as_array().sum() == pytest.approx(5.0)
    assert p.check_length(generate("pentachoron")) is p
    with pytest.raises(DomainError):
        p.check_length(generate("sixteen_cell"))
    with pytest.raises(DomainError):
        Packing((1.0, 0.0))
    with pytest.raises(DomainError):
        Packing(())


def test_rebuilt_incidence_is_idempotent(rng, subdivide):
    c = subdivide(generate("sixteen_cell"), rng, 5)
    once = c.rebuilt()
    twice = once.rebuilt()
    assert once == c and twice == c
    for other in (once, twice):
        assert other.incident == c.incident
        assert other.edges == c.edges
        assert other.triangles == c.triangles
        assert other.degrees == c.degrees


def test_triangle_in_three_tetrahedra_fails_pairing():
    penta = tuple(tuple(v for v in range(5) if v != skip) for skip in range(5))
    report = validate(Complex(6, penta + ((0, 1, 2, 5),)))
    assert report.failed_checks() == ["triangle_pairing", "edge_links", "vertex_links"]
    assert report.bad_triangles == [(0, 1, 2), (0, 1, 5), (0, 2, 5), (1, 2, 5)]
    assert report.bad_edges == [(0, 1), (0, 2), (0, 5), (1, 2), (1, 5), (2, 5)]
    data = report.to_dict()
    assert data["bad_edges"][0] == [0, 1]
