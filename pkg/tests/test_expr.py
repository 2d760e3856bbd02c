import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phiperiodic.errors import EvalError, ExprSyntaxError, UnknownIdentifier
from phiperiodic.expr import Expression, eval_dual, evaluate, free_variables, parse, unparse


def ev(text, **b):
    return evaluate(parse(text, list(b) or ["t"]), b)


def test_polynomial_example():
    assert ev("(x1^2-1)^2", t=0.0, x1=2.0) == 9.0


def test_truncated_input_position():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("x1 +", ["x1"])
    assert exc.value.position == 4


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as exc:
        parse("sin(q)", ["t"])
    assert exc.value.name == "q"


@pytest.mark.parametrize("text,value", [
    ("2+3*4", 14.0), ("abs(-2)^3", 8.0), ("-2^2", -4.0), ("2^3^2", 512.0),
    ("10-4-3", 3.0), ("24/4/2", 3.0), ("min(3, -1)", -1.0), ("2*pi", 2 * math.pi),
    ("exp(0)+cos(0)+sqrt(4)", 4.0), ("--3", 3.0),
])
def test_precedence_and_functions(text, value):
    assert ev(text) == pytest.approx(value, rel=1e-15)


def test_sqrt_negative_is_eval_error():
    with pytest.raises(EvalError):
        ev("sqrt(-1)")


def test_division_by_zero_is_eval_error():
    with pytest.raises(EvalError):
        ev("1/x1", x1=0.0)


@pytest.mark.parametrize("text", ["(", "x1 x1", "sin(x1", "min(x1)", "3 +* 4", ")"])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse(text, ["x1"])


def test_dual_polynomial():
    node = parse("x1^2*x2", ["x1", "x2"])
    assert eval_dual(node, {"x1": 3.0, "x2": 2.0}, {"x1": 1.0}) == (18.0, 12.0)


def test_dual_zero_seed():
    node = parse("sin(x1)*exp(x2)", ["x1", "x2"])
    v, d = eval_dual(node, {"x1": 0.4, "x2": 0.1}, {})
    assert d == 0.0 and v == pytest.approx(math.sin(0.4) * math.exp(0.1))


def test_dual_sin_against_central_difference():
    node = parse("sin(t)", ["t"])
    _, d = eval_dual(node, {"t": 0.3}, {"t": 1.0})
    fd = (math.sin(0.3 + 1e-6) - math.sin(0.3 - 1e-6)) / 2e-6
    assert abs(d - fd) <= 1e-8


def test_abs_kink_convention():
    _, d = eval_dual(parse("abs(x1)", ["x1"]), {"x1": 0.0}, {"x1": 1.0})
    assert d == 0.0


def test_vectorised_gradient():
    e = Expression("x1^2*x2 + t", ["t", "x1", "x2"])
    X = np.array([[3.0, 2.0], [1.0, -1.0]])
    v, g = e.gradient({"t": 0.5, "x1": X[:, 0], "x2": X[:, 1]}, ["x1", "x2"])
    np.testing.assert_allclose(v, [18.5, -0.5])
    np.testing.assert_allclose(g, [[12.0, 9.0], [-2.0, 1.0]])


def test_free_variables_and_dependence():
    e = Expression("x1 + 0*t", ["t", "x1", "x2"])
    assert free_variables(e.ast) == {"x1", "t"}
    assert e.depends_on("t") and not e.depends_on("x2")


# ------------------------------------------------------------ generated ASTs

def _leaf():
    return st.one_of(st.sampled_from(["x1", "x2", "t"]),
                     st.floats(0.1, 3.0).map(lambda c: repr(round(c, 3))))


def _extend(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(
            lambda a: f"({a[0]} {a[1]} {a[2]})"),
        st.tuples(children, children).map(lambda a: f"({a[0]})/(2 + ({a[1]})^2)"),
        st.tuples(st.sampled_from(["sin", "cos"]), children).map(lambda a: f"{a[0]}({a[1]})"),
        children.map(lambda a: f"exp(sin({a}))"),
        children.map(lambda a: f"sqrt(1 + ({a})^2)"),
        children.map(lambda a: f"-({a})"),
        children.map(lambda a: f"({a})^2"),
    )


EXPRS = st.recursive(_leaf(), _extend, max_leaves=8)
NAMES = ["t", "x1", "x2"]


@settings(max_examples=200, deadline=None)
@given(EXPRS, st.lists(st.floats(-2, 2), min_size=3, max_size=3),
       st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_dual_matches_central_differences(text, point, direction):
    node = parse(text, NAMES)
    b = dict(zip(NAMES, point))
    seed = dict(zip(NAMES, direction))
    v, d = eval_dual(node, b, seed)
    eps = 1e-6
    fp = evaluate(node, {k: b[k] + eps * seed[k] for k in NAMES})
    fm = evaluate(node, {k: b[k] - eps * seed[k] for k in NAMES})
    fd = (fp - fm) / (2 * eps)
    assert abs(d - fd) <= 1e-6 * max(1.0, abs(d)) + 1e-7 * max(1.0, abs(v))


@settings(max_examples=200, deadline=None)
@given(EXPRS)
def test_unparse_roundtrip(text):
    node = parse(text, NAMES)
    again = parse(unparse(node), NAMES)
    assert again == node
    assert unparse(again) == unparse(node)
