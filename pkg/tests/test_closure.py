import pytest

from starcore.closure import (
    ClosureConfig,
    Rule,
    Status,
    TestIdealInput,
    degree_criterion,
    evaluate_rules,
    replay,
    star_independent,
    star_member,
    starsp_member,
)
from starcore.errors import UsageError

from conftest import fermat


def test_gorenstein_parameter_rule(quintic7):
    R = quintic7
    tau = TestIdealInput(R.maximal() ** 3, "m^3")
    v = star_member("x^2", R.ideal("y", "z"), tau, ClosureConfig(gorenstein_parameter=True))
    assert (v.status, v.rule) == (Status.PROVED_IN, Rule.GORENSTEIN_PARAMETER_COLON)
    assert replay(v, R)
    # without the flag nothing proves it
    v = star_member("x^2", R.ideal("y", "z"), tau)
    assert v.status is not Status.PROVED_IN


def test_members_are_in_closure(cubic7):
    tau = TestIdealInput(cubic7.maximal())
    v = star_member("y^2 + z", cubic7.ideal("y", "z"), tau)
    assert (v.status, v.rule) == (Status.PROVED_IN, Rule.ALREADY_IN_IDEAL)


def test_test_ideal_refutation(cubic7):
    v = star_member("x", cubic7.ideal("y", "z"), TestIdealInput(cubic7.maximal()))
    assert (v.status, v.rule) == (Status.PROVED_OUT, Rule.TEST_IDEAL_REFUTATION)
    assert replay(v, cubic7)
    assert replay(v.to_dict(), cubic7)


def test_unknown_keeps_evidence(cubic7):
    v = star_member("x^2", cubic7.ideal("y", "z"), TestIdealInput(cubic7.maximal()))
    assert v.status is Status.UNKNOWN and v.rule is Rule.EVIDENCE_ONLY
    assert max(row.q for row in v.evidence) == 49
    assert not replay(v, cubic7)


def test_degree_criterion_examples(decic7):
    D = decic7
    J = D.ideal("x^5", "y^7", "z^8")
    assert degree_criterion(D("x*y^3*z^6"), J)
    assert not degree_criterion(D("x"), J)
    Q = fermat(5, 7)
    assert not degree_criterion(Q("x^2*y^3"), Q.ideal("x^5", "y^5", "z^5"))
    # p | k makes the rule inapplicable
    D5 = fermat(10, 5)
    assert not degree_criterion(D5("x*y^3*z^6"), D5.ideal("x^5", "y^7", "z^8"))
    # not pure powers
    assert not degree_criterion(D("x*y^3*z^6"), D.ideal("x^5 + y^5", "y^7", "z^8"))


def test_degree_criterion_caveat(decic7):
    tau = TestIdealInput(decic7.maximal() ** 8)
    v = star_member("x*y^3*z^6", decic7.ideal("x^5", "y^7", "z^8"), tau)
    assert v.rule is Rule.DEGREE_CRITERION
    assert any("algebraic closure" in c for c in v.caveats)
    assert replay(v, decic7)


def test_starsp_examples(decic7, cubic7):
    tau = TestIdealInput(decic7.maximal() ** 8)
    J = decic7.ideal("x^5", "y^7", "z^8")
    v = starsp_member("x*y^3*z^6", J, tau)
    assert (v.status, v.rule) == (Status.PROVED_IN, Rule.DEGREE_CRITERION)
    assert v.closure == "*sp" and replay(v, decic7)
    v = starsp_member("x^6", J, tau)
    assert (v.status, v.rule) == (Status.PROVED_IN, Rule.ALREADY_IN_IDEAL)
    v = starsp_member("x", cubic7.ideal("y", "z"), TestIdealInput(cubic7.maximal()))
    assert v.status is Status.PROVED_OUT


def test_starsp_unknown_evidence_bound(cubic7):
    v = starsp_member("x^2", cubic7.ideal("y", "z"), TestIdealInput(cubic7.maximal()))
    assert v.status is Status.UNKNOWN
    sp_rows = [r for r in v.evidence if "m^[" in r.check]
    assert sp_rows and all(r.q * 7 <= 49 for r in sp_rows)


def test_star_independent(cubic7, decic7):
    out = star_independent(["y", "z"], TestIdealInput(cubic7.maximal()))
    assert [v.status for v in out] == [Status.PROVED_OUT] * 2
    F = cubic7
    out = star_independent(["x", "x^2"], TestIdealInput(F.maximal()))
    assert out[1].status is Status.PROVED_IN
    out = star_independent(["x^5", "y^7", "z^8"], TestIdealInput(decic7.maximal() ** 8))
    assert all(v.status is Status.PROVED_OUT for v in out)
    with pytest.raises(UsageError):
        star_independent([], TestIdealInput(F.maximal()))


def test_zero_test_ideal(cubic7):
    with pytest.raises(UsageError):
        TestIdealInput(cubic7.zero())
    with pytest.raises(UsageError):
        TestIdealInput(cubic7.ideal("x^3 + y^3 + z^3"))


def test_qmax_validation(cubic7):
    with pytest.raises(UsageError):
        ClosureConfig(q_max=50).resolve_qmax(7)
    assert ClosureConfig().resolve_qmax(7) == 49


CASES = [
    (3, 7, ["y", "z"], ["x", "x^2", "y^2", "x*y", "x^3"], 1),
    (5, 7, ["y", "z"], ["x", "x^2", "x^3", "x*y"], 3),
    (10, 7, ["x^5", "y^7", "z^8"], ["x*y^3*z^6", "x^4", "x^2*y^5*z^3"], 8),
]


@pytest.mark.parametrize("k,p,gens,elements,tau_power", CASES)
def test_rules_never_contradict(k, p, gens, elements, tau_power):
    R = fermat(k, p)
    tau = TestIdealInput(R.maximal() ** tau_power)
    a = R.ideal(*gens)
    for f in elements:
        firings, _ = evaluate_rules(f, a, tau, ClosureConfig(q_max=p))
        statuses = {fi.status for fi in firings}
        assert not (Status.PROVED_IN in statuses and Status.PROVED_OUT in statuses), f


@pytest.mark.parametrize("k,p,gens,elements,tau_power", CASES)
def test_monotone_in_the_ideal(k, p, gens, elements, tau_power):
    R = fermat(k, p)
    tau = TestIdealInput(R.maximal() ** tau_power)
    small = R.ideal(*gens)
    big = small + R.ideal("x^" + str(k - 1))
    for f in elements:
        if star_member(f, small, tau).status is Status.PROVED_IN:
            assert star_member(f, big, tau).status is not Status.PROVED_OUT
