import pytest

from nvkernel.instance_io import ParseError, parse_instance, serialize_instance

HEAD = "atmost-nvalue 1\nvalues range 1 6\nn 2\n"


def test_roundtrip(sample):
    assert parse_instance(serialize_instance(sample)) == sample


def test_sparse_universe_uses_list():
    inst = parse_instance("atmost-nvalue 1\nvalues list 4 6 9 10\nn 1\nvar a 4-6 10-10\n")
    text = serialize_instance(inst)
    assert "values list 4 6 9 10" in text
    assert parse_instance(text) == inst


def test_comments_and_negative_budget():
    inst = parse_instance("# kernel\natmost-nvalue 1\nvalues range 1 2\nn -1  # spent\nvar a 1-1\n")
    assert inst.budget == -1


@pytest.mark.parametrize("body,line", [
    ("var a 1-9\n", 4),
    ("var a 3-2\n", 4),
    ("var a 1-2 3-4\n", 4),
    ("var a 1-3 2-5\n", 4),
    ("var a\n", 4),
    ("var a 1-1\nvar a 2-2\n", 5),
    ("foo 1\n", 4),
    ("var a x-2\n", 4),
])
def test_errors_carry_line_numbers(body, line):
    with pytest.raises(ParseError) as exc:
        parse_instance(HEAD + body)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_missing_header():
    with pytest.raises(ParseError) as exc:
        parse_instance("values range 1 3\n")
    assert exc.value.line == 1
