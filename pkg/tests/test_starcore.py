import pytest

from starcore.closure import ClosureConfig, TestIdealInput
from starcore.core import (
    Conclusion,
    StarReductionInput,
    chain_conditions,
    check_criteria,
    core_bracket,
    frobenius_scaling,
    mainsop_input,
    reduction_family,
    reduction_number_experiment,
    reduction_number_one,
    special_conditions,
    tau_lower_bound_check,
    tau_lower_bound_members,
)
from starcore.errors import ResourceError, UsageError
from starcore.ideals import QuotientRing

from conftest import fermat


def make(R, J, U, tau, cfg=None, certify=False):
    return StarReductionInput.build(R, J, U, TestIdealInput(tau), cfg, certify=certify)


@pytest.fixture
def cubic_input(cubic7):
    return make(cubic7, ["y", "z"], ["x^2"], cubic7.maximal())


def test_cubic_confirmed(cubic_input):
    rep = check_criteria(cubic_input)
    assert rep.conclusion is Conclusion.CONFIRMED
    br = core_bracket(cubic_input, rep)
    assert br.formula.equals(br.alt_formula) and br.formula.equals(br.finite_intersection)
    assert br.finite_intersection.contains(br.lower)


def test_quintic_inconclusive(quintic7):
    inp = make(quintic7, ["y", "z"], ["x^2"], quintic7.maximal() ** 3)
    rep = check_criteria(inp)
    assert rep.conclusion is Conclusion.INCONCLUSIVE
    assert rep.hypothesis_a2 == [False] and rep.hypothesis_b == [False]
    assert "b[0]" in rep.witnesses


def test_decic_b_fails(decic7):
    inp = make(decic7, ["x^5", "y^7", "z^8"], ["x*y^3*z^6"], decic7.maximal() ** 8)
    rep = check_criteria(inp)
    assert rep.hypothesis_b == [False]
    assert rep.conclusion is not Conclusion.CONFIRMED


def test_xyz_bracket(xyz7):
    inp = make(xyz7, ["x + y*z"], ["y*z"], xyz7.ideal("x*y", "x*z", "y*z"))
    br = core_bracket(inp)
    assert br.finite_intersection.equals(xyz7.ideal("x^2", "y^2*z^2"))


def test_trivial_s_zero(cubic7):
    inp = make(cubic7, ["y", "z"], [], cubic7.maximal())
    br = core_bracket(inp)
    J = cubic7.ideal("y", "z")
    for ideal in (br.formula, br.alt_formula, br.finite_intersection):
        assert ideal.equals(J)
    assert br.formula.contains(br.lower)
    assert reduction_number_one(inp)
    assert tau_lower_bound_check(inp)


def test_reduction_family(cubic_input, xyz7):
    fam = reduction_family(cubic_input)
    assert len(fam) == 3
    assert fam[1].equals(cubic_input.ring.ideal("y + x^2", "z"))
    assert fam[2].equals(cubic_input.ring.ideal("y", "z + x^2"))
    inp = make(xyz7, ["x"], ["y*z"], xyz7.ideal("x*y", "x*z", "y*z"))
    full = reduction_family(inp, "full_field")
    assert len(full) == 7
    assert full[3].equals(xyz7.ideal("x + 3*y*z"))
    with pytest.raises(ResourceError):
        reduction_family(inp, "full_field", cap=6)
    with pytest.raises(UsageError):
        reduction_family(inp, "bogus")


def test_reduction_number(cubic_input):
    assert reduction_number_one(cubic_input)
    F = QuotientRing("xy", 7)
    assert not reduction_number_one(make(F, ["x^5", "y^5"], ["x*y"], F.maximal()))
    assert reduction_number_one(make(F, ["x^2", "y^2"], ["x*y"], F.maximal()))


def test_tau_lower_bound(cubic_input, cubic7):
    assert tau_lower_bound_members(cubic_input) == [True, True, True]
    # with tau = R the bound asks I <= K for each member
    inp = make(cubic7, ["y", "z"], ["x^2"], cubic7.unit())
    assert tau_lower_bound_members(inp)[0] is False


def test_chain_conditions(cubic_input, xyz7):
    rep = chain_conditions(cubic_input, cubic_input.J)
    assert rep["label"] == "relative to certified *sp generators"
    assert rep["sp_cap_K_in_mI"]
    with pytest.raises(UsageError):
        chain_conditions(cubic_input, cubic_input.I)
    with pytest.raises(UsageError):
        chain_conditions(cubic_input, cubic7_outside(cubic_input))
    inp = make(xyz7, ["x"], ["y*z"], xyz7.ideal("x*y", "x*z", "y*z"))
    assert chain_conditions(inp, xyz7.ideal("x + y*z"))["I_eq_sp_plus_K"]


def cubic7_outside(inp):
    return inp.ring.ideal("x")


def test_special_and_scaling(cubic_input):
    a, b = special_conditions(cubic_input, 7)
    assert a == [True, True] and b == [True]
    res = frobenius_scaling(cubic_input, [0, 1])
    assert [r.q for r in res.rows] == [1, 7]
    assert res.threshold == 0
    assert res.rows[0].criteria.to_dict() == check_criteria(cubic_input).to_dict()
    for row in res.rows:
        if row.criteria.confirmed:
            assert row.bracket.formula.equals(row.bracket.finite_intersection)
    with pytest.raises(UsageError):
        frobenius_scaling(cubic_input, [-1])


def test_certification_refuses_proved_out(cubic7):
    with pytest.raises(UsageError):
        make(cubic7, ["y", "z"], ["x"], cubic7.maximal(), certify=True)


def test_certification_warns_on_unknown(cubic7):
    inp = make(cubic7, ["y", "z"], ["x^2"], cubic7.maximal(), certify=True)
    assert inp.warnings and inp.u_verdicts[0].status.value == "Unknown"


def test_minimal_generators_used(cubic7):
    inp = make(cubic7, ["y", "z", "y + z"], ["x^2"], cubic7.maximal())
    assert inp.n == 2


def test_mainsop(quintic7):
    tau = TestIdealInput(quintic7.maximal() ** 3)
    inp, hyp = mainsop_input(quintic7, ["x^3", "y^3"], 2, ["x*y*z^4"], tau, ClosureConfig(gorenstein_parameter=True))
    assert hyp == {"x1_in_tau": True, "x2_in_tau": True, "t_at_least_2": True}
    assert inp.J.equals(quintic7.ideal("x^6", "y^6"))
    assert inp.colon.equals(quintic7.ideal("z", "x^2", "y^2"))
    br = core_bracket(inp)
    assert br.formula.equals(br.alt_formula) and br.formula.equals(br.finite_intersection)
    with pytest.raises(UsageError):
        mainsop_input(quintic7, ["x^3", "y^3"], 1, ["z"], tau)


def test_reduction_number_experiment_is_deterministic():
    a = reduction_number_experiment(trials=3, seed=5)
    assert a == reduction_number_experiment(trials=3, seed=5)
    assert all(isinstance(r["reduction_number_one"], bool) for r in a)
