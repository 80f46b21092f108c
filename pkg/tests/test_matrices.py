import itertools

import pytest

import reference_tables as ref
from nmodal.matrices import (
    BOX, BOX1, BOX2, IMP, NEG, SYSTEMS, UnknownSystem, apply_multiop, designated, matrix_for,
    mk_implication_condition, mkt4_modality_condition, render_table, table_json,
)

UNIMODAL_SYSTEMS = ["M", "MK", "MKT", "MKT4"]


def _cells(m):
    for conn, table in m.tables.items():
        for args, cell in table.items():
            yield conn, args, cell


def test_value_sets():
    assert set(matrix_for("MKT").values) == {(1, 1), (1, 0), (0, 0)}
    assert len(matrix_for("M").values) == 4
    assert len(matrix_for("M2").values) == 8


def test_unknown_system():
    with pytest.raises(UnknownSystem):
        matrix_for("XYZ")


@pytest.mark.parametrize("name", UNIMODAL_SYSTEMS)
def test_tables_match_reference(name):
    m = matrix_for(name)
    values = ref.VALUES[name]
    for z, row in zip(values, ref.IMPLICATION[name]):
        for w, token in zip(values, row.split()):
            assert m.apply(IMP, z, w) == ref.cell(token, values), (z, w)
    for z, row in zip(values, ref.UNARY[name]):
        neg, box = row.split()
        assert m.apply(NEG, z) == ref.cell(neg, values)
        assert m.apply(BOX, z) == ref.cell(box, values)


def test_m2_first_modality_matches_reference():
    m = matrix_for("M2")
    for z, token in zip(ref.V8, ref.BIMODAL_ROWS["#1"].split()):
        assert m.apply(BOX1, z) == ref.cell(token, ref.V8)


def test_m2_operations_follow_defining_equations():
    m = matrix_for("M2")
    fiber = {b: frozenset(z for z in ref.V8 if z[0] == b) for b in (0, 1)}
    for z in ref.V8:
        assert m.apply(NEG, z) == fiber[1 - z[0]]
        assert m.apply(BOX1, z) == fiber[z[1]]
        assert m.apply(BOX2, z) == fiber[z[2]]
        for w in ref.V8:
            assert m.apply(IMP, z, w) == fiber[int(z[0] <= w[0])]


def test_m2_second_modality_reference_row_disagrees_with_definition():
    # the transcribed row reads the negated second coordinate; the definition reads z3
    m = matrix_for("M2")
    differing = [
        z for z, token in zip(ref.V8, ref.BIMODAL_ROWS["#2"].split())
        if m.apply(BOX2, z) != ref.cell(token, ref.V8)
    ]
    assert differing == [(1, 1, 1), (1, 0, 0), (0, 1, 1), (0, 0, 0)]


def test_apply_examples():
    assert apply_multiop(matrix_for("M"), NEG, [(1, 1)]) == {(0, 0), (0, 1)}
    assert apply_multiop(matrix_for("MK"), IMP, [(1, 1), (1, 0)]) == {(1, 0)}
    assert apply_multiop(matrix_for("MKT4"), BOX, [(1, 1)]) == {(1, 1)}
    box1 = apply_multiop(matrix_for("M2"), BOX1, [(1, 0, 1)])
    assert box1 == {(0, a, b) for a in (0, 1) for b in (0, 1)}


def test_apply_rejects_foreign_values():
    with pytest.raises(ValueError):
        matrix_for("MKT").apply(BOX, (0, 1))
    with pytest.raises(ValueError):
        matrix_for("M").apply(IMP, (1, 1))


def test_designation():
    assert designated(matrix_for("M"), (1, 0))
    assert not designated(matrix_for("M"), (0, 1))
    assert designated(matrix_for("M2"), (1, 0, 0))


@pytest.mark.parametrize("name", SYSTEMS)
def test_cells_nonempty_and_inside_value_set(name):
    m = matrix_for(name)
    for _, _, cell in _cells(m):
        assert cell and cell <= set(m.values)


@pytest.mark.parametrize("name", SYSTEMS)
def test_first_coordinates_are_classical(name):
    m = matrix_for(name)
    for conn, args, cell in _cells(m):
        if conn == NEG:
            expected = 1 - args[0][0]
        elif conn == IMP:
            expected = int(args[0][0] <= args[1][0])
        elif conn == BOX2:
            expected = args[0][2]
        else:
            expected = args[0][1]
        assert {w[0] for w in cell} == {expected}, (conn, args)


@pytest.mark.parametrize("finer, coarser", [("MK", "M"), ("MKT", "MK"), ("MKT4", "MKT")])
def test_refinement(finer, coarser):
    f, c = matrix_for(finer), matrix_for(coarser)
    for conn, args, cell in _cells(f):
        assert cell <= c.apply(conn, *args)


def test_mk_side_condition_generates_implication():
    mk, m = matrix_for("MK"), matrix_for("M")
    for z, w in itertools.product(mk.values, repeat=2):
        expected = {x for x in m.apply(IMP, z, w) if mk_implication_condition(z, w, x)}
        assert mk.apply(IMP, z, w) == expected


def test_mkt4_side_condition_holds_everywhere():
    m = matrix_for("MKT4")
    for z in m.values:
        for x in m.apply(BOX, z):
            assert mkt4_modality_condition(z, x)
        expected = {x for x in m.values if mkt4_modality_condition(z, x)}
        assert m.apply(BOX, z) == expected


def test_render_table():
    assert "(0,1) | (1,*) (1,*) (1,*) (1,*)" in render_table(matrix_for("M")).splitlines()
    mkt = render_table(matrix_for("MKT")).splitlines()
    header = mkt.index(next(line for line in mkt if line.startswith("-> |")))
    assert len(mkt[header + 1:mkt.index("", header)]) == 3
    m2 = render_table(matrix_for("M2")).splitlines()
    arrow = next(line for line in m2 if line.startswith("-> |"))
    assert len(arrow.split("|")[1].split()) == 8


def test_render_is_deterministic():
    assert render_table(matrix_for("MK")) == render_table(matrix_for("MK"))


def test_table_json_round_trip():
    import json

    data = json.loads(table_json(matrix_for("MKT4")))
    assert data["values"] == [[1, 1], [1, 0], [0, 0]]
    assert data["tables"]["#"]["(1,1)"] == [[1, 1]]
