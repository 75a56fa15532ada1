from oracles import enumerate_traces
from procalc import ccs, csp
from procalc.equivalence import cweak_bisim, weak_bisim
from procalc.lts import deadlocks, diverges, explore
from procalc.separation import separation_fixture, show_trace


def test_weak_bisim_between_the_two_branching_values():
    g1 = explore(ccs.parse_ccs("b.0 + b.c.0"), "ccs")
    g2 = explore(csp.parse_csp("(b -> STOP) [] (b -> (c -> STOP))"), "csp")
    assert weak_bisim(g1, g2).holds
    assert not diverges(g1) and not diverges(g2)
    assert cweak_bisim(g1, g2).holds


def test_fixture_claims_hold():
    report = separation_fixture()
    assert report.passed
    assert len(report.claims) == 5


def test_fixture_instances():
    report = separation_fixture()
    by_name = {i.name: i for i in report.instances}
    assert set(by_name) == {"rho", "rho-nu", "rho-xi", "eta", "nu", "xi"}
    assert by_name["rho"].traces == ["<>", "<b>", "<b,c>"]
    nu = by_name["nu"]
    assert not nu.divergent and nu.deadlock_after_b
    # the encoded instances are trace-equivalent to their CSP partners
    for name in ("eta", "nu", "xi"):
        assert by_name[name].verdicts["trace"]


def test_rho_instance_traces_by_path_enumeration():
    p = csp.parse_csp("((b -> STOP) [] (b -> c -> STOP)) [|{b,c}|] ((b -> STOP) [] (b -> c -> STOP))")
    g = explore(p, "csp")
    assert enumerate_traces(g, 6) == {(), ("b",), ("b", "c")}
    assert deadlocks(g)


def test_render_is_stable():
    a, b = separation_fixture().render(), separation_fixture().render()
    assert a == b
    assert "[PASS]" in a and "[FAIL]" not in a


def test_show_trace():
    assert show_trace(()) == "<>"
    assert show_trace(("b", "c")) == "<b,c>"
