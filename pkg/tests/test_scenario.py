import pytest

from starcore.cli import EXAMPLES, example_source
from starcore.errors import ParseError, UsageError
from starcore.scenario import parse_ideal, parse_ring, parse_scenario, run_scenario

SMALL = """
ring R = F(7)[x, y, z] / (x^3 + y^3 + z^3);
ideal J = (y, z);
ideal U = (x^2);
ideal I = J + U;
tau = m;
check member x^2*y, J expect true;
check sq: equal J + (x^3), J expect true;
"""


def test_parse_small():
    scn = parse_scenario(SMALL, "small")
    assert scn.ring.p == 7 and scn.has_input()
    assert [c.label for c in scn.checks][1] == "sq"
    report, failed = run_scenario(scn)
    assert failed == [] and report["scenario"]["checks_passed"]
    assert set(report) == {"scenario", "ring", "verdicts", "criteria", "ideals", "timings"}


def test_p_override():
    assert parse_scenario(SMALL, p=11).ring.p == 11


@pytest.mark.parametrize("src, where", [
    ("", None),
    ("# only a comment\n", None),
    ("ring R = F(7)[x, y];\nideal A = (x);\nideal A = (y);\n", 3),
    ("ring R = F(7)[x, y];\nideal x = (y);\n", 2),
    ("ring R = F(7)[x, y];\nwibble;\n", 2),
    ("ring R = F(7)[x, y];\nideal A = (x +);\n", 2),
    ("ring R = F(7)[x, y];\nflag whatever;\n", 2),
    ("ring R = F(7)[x, y];\nideal A = B;\n", 2),
    ("ring R = F(7)[x, y];\nideal J = (x);\n", None),
])
def test_parse_errors(src, where):
    with pytest.raises(UsageError) as info:
        parse_scenario(src)
    if where is not None:
        assert isinstance(info.value, ParseError)
        assert info.value.line == where and info.value.column >= 1


def test_duplicate_label():
    src = "ring R = F(7)[x];\ncheck a: member x, (x) expect true;\ncheck a: member x, (x) expect true;\n"
    with pytest.raises(ParseError):
        parse_scenario(src)


def test_failed_check_is_reported():
    src = "ring R = F(7)[x, y];\ncheck bad: member y, (x) expect true;\n"
    report, failed = run_scenario(parse_scenario(src))
    assert failed == ["bad"] and report["verdicts"]["checks"]["bad"] is False


def test_input_checks_need_input():
    src = "ring R = F(7)[x, y];\ncheck criteria expect Inconclusive;\n"
    with pytest.raises(UsageError):
        run_scenario(parse_scenario(src))


@pytest.mark.parametrize("name", EXAMPLES)
def test_bundled_examples_pass(name):
    report, failed = run_scenario(parse_scenario(example_source(name), name), strict=False)
    assert failed == []


def test_ideal_expressions():
    R = parse_ring("F(7)[x, y] / (x*y)")
    assert R.p == 7 and len(R.relations) == 1
    assert parse_ideal("(x+y)*y", R).equals(R.ideal("y^2"))
    assert parse_ideal("x, y", R).equals(R.maximal())
    src = "ring R = F(5)[x, y];\nideal A = (x, y)^[5];\nideal B = (x^2) : (x);\ncheck equal A, (x^5, y^5) expect true;\ncheck equal B, (x) expect true;\n"
    assert run_scenario(parse_scenario(src))[1] == []
