import json
import random
from fractions import Fraction

import mpmath
import pytest

from quasigrid.cyclotomic import CyclotomicNumber, RationalAngle, cos_of
from quasigrid.multigrid import (
    K,
    ExactPoint,
    GridLine,
    MultigridSpec,
    OnLineError,
    direction_angle,
    embed,
    embed_complex,
    f,
    line_value,
    parse_rational,
    rotate,
)

from conftest import cos_pi, sin_pi

Q = CyclotomicNumber.rational


def pt(x, y) -> ExactPoint:
    return ExactPoint(Q(Fraction(x)), Q(Fraction(y)))


def ref_line_value(spec, i, x, y):
    """100-digit value of x cos(theta_i) + y sin(theta_i) - gamma_i."""
    a = spec.base_angle.value * i
    with mpmath.workdps(100):
        g = spec.offsets[i]
        return (
            mpmath.mpf(x.numerator) / x.denominator * cos_pi(a.numerator, a.denominator)
            + mpmath.mpf(y.numerator) / y.denominator * sin_pi(a.numerator, a.denominator)
            - mpmath.mpf(g.numerator) / g.denominator
        )


# -- spec ----------------------------------------------------------------------


def test_spec_validation_and_normalization():
    s = MultigridSpec(4, ("3/2", -1, Fraction(1, 3), "0"))
    assert s.offsets == (Fraction(1, 2), Fraction(0), Fraction(1, 3), Fraction(0))
    assert s.parity == "even"
    with pytest.raises(ValueError):
        MultigridSpec(2, ("1/2", "1/2"))
    with pytest.raises(ValueError):
        MultigridSpec(5, ("1/5",) * 4)
    with pytest.raises(TypeError):
        MultigridSpec(5, (0.2,) * 5)
    with pytest.raises(ValueError):
        parse_rational("0.2")


def test_spec_text_and_json_round_trip():
    s = MultigridSpec.uniform(7, "1/7")
    assert s.to_text() == "n=7 offsets=1/7,1/7,1/7,1/7,1/7,1/7,1/7"
    assert MultigridSpec.from_text(s.to_text()) == s
    doc = json.loads(s.to_json())
    assert doc == {"n": 7, "offsets": ["1/7"] * 7}
    assert MultigridSpec.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        MultigridSpec.from_text("n=7")


# -- directions -----------------------------------------------------------------


def test_direction_angle_examples():
    assert direction_angle(MultigridSpec.uniform(5, "1/5"), 1) == RationalAngle(2, 5)
    assert direction_angle(MultigridSpec.uniform(4, "1/2"), 2) == RationalAngle(1, 2)
    assert direction_angle(MultigridSpec.uniform(7, "1/7"), 0) == RationalAngle(0)
    with pytest.raises(IndexError):
        direction_angle(MultigridSpec.uniform(7, "1/7"), 7)


@pytest.mark.parametrize("n", range(3, 25))
def test_directions_increasing_and_non_collinear(n):
    s = MultigridSpec.uniform(n, "1/3")
    angles = [direction_angle(s, i).value for i in range(n)]
    top = 2 if n % 2 else 1
    assert all(0 <= a < top for a in angles)
    assert angles == sorted(set(angles))
    for i in range(n):
        for j in range(i + 1, n):
            assert (angles[j] - angles[i]) % 1 != 0


# -- line values, K and f --------------------------------------------------------


def test_line_value_examples():
    s5 = MultigridSpec.uniform(5, "1/5")
    for i in range(5):
        assert line_value(s5, i, pt(0, 0)) == Fraction(-1, 5)
    s4 = MultigridSpec.uniform(4, "1/2")
    assert line_value(s4, 0, pt(Fraction(3, 2), 0)) == 1
    v = line_value(s5, 2, pt(1, 0))
    assert v == cos_of(RationalAngle(4, 5)) - Fraction(1, 5)
    assert abs(float(v) - float(ref_line_value(s5, 2, Fraction(1), Fraction(0)))) < 1e-15
    assert f"{float(v):.3f}" == "-1.009"


def test_K_examples():
    s5 = MultigridSpec.uniform(5, "1/5")
    assert K(s5, pt(0, 0)) == (0,) * 5
    assert K(MultigridSpec.uniform(4, "1/2"), pt(0, 0)) == (0,) * 4
    z = pt(Fraction(11, 10), 0)
    expected = tuple(int(mpmath.ceil(ref_line_value(s5, i, Fraction(11, 10), Fraction(0)))) for i in range(5))
    assert expected == (1, 1, -1, -1, 1)
    assert K(s5, z) == expected


def test_K_on_line_requires_side():
    s4 = MultigridSpec.uniform(4, "1/2")
    z = pt(Fraction(3, 2), Fraction(3, 2))  # on lines (0, 1) and (2, 1)
    with pytest.raises(OnLineError) as err:
        K(s4, z)
    assert (err.value.direction, err.value.index) == (0, 1)
    assert K(s4, z, {0: 0, 2: 0}) == (1, 2, 1, 0)
    assert K(s4, z, {0: 1, 2: 0}) == (2, 2, 1, 0)


def test_f_examples():
    s5 = MultigridSpec.uniform(5, "1/5")
    assert f(s5, pt(0, 0)) == pt(0, 0)
    s4 = MultigridSpec.uniform(4, "1/2")
    w = f(s4, pt(Fraction(3, 2), Fraction(3, 2)), {0: 0, 2: 0})
    root2 = cos_of(RationalAngle(1, 4)) * 2
    assert w.x == 1 + root2 and w.y == 1 + root2
    # the point just below both lines is in the same cell
    assert f(s4, pt(Fraction(149, 100), Fraction(149, 100))) == w


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 12])
def test_K_is_the_unique_bracketing_vector(n):
    r = random.Random(n)
    s = MultigridSpec(n, tuple(Fraction(r.randint(1, 9), 10) for _ in range(n)))
    for _ in range(25):
        x, y = Fraction(r.randint(-500, 500), 97), Fraction(r.randint(-500, 500), 89)
        k = K(s, pt(x, y))
        for i in range(n):
            v = ref_line_value(s, i, x, y)
            assert k[i] - 1 < v < k[i]


def test_cell_constancy():
    r = random.Random(99)
    for n in (5, 7, 8):
        s = MultigridSpec.uniform(n, Fraction(1, n))
        checked = 0
        while checked < 100 // 3 + 1:
            x, y = Fraction(r.randint(-300, 300), 53), Fraction(r.randint(-300, 300), 59)
            k = K(s, pt(x, y))
            dx, dy = Fraction(r.randint(-5, 5), 10**4), Fraction(r.randint(-5, 5), 10**4)
            k2 = K(s, pt(x + dx, y + dy))
            if k2 != k:  # jitter crossed a line; not the same cell
                continue
            assert f(s, pt(x, y)) == f(s, pt(x + dx, y + dy))
            checked += 1


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_rotation_covariance_odd(n):
    r = random.Random(n * 31)
    s = MultigridSpec.uniform(n, Fraction(r.randint(1, n - 1), n))
    step = RationalAngle(2, n)
    for _ in range(10):
        z = pt(Fraction(r.randint(-400, 400), 101), Fraction(r.randint(-400, 400), 103))
        k, k_rot = K(s, z), K(s, rotate(z, step))
        assert k_rot == k[-1:] + k[:-1]
        assert f(s, rotate(z, step)) == rotate(f(s, z), step)


def test_embed_matches_complex_embedding():
    s = MultigridSpec.uniform(6, "1/2")
    kv = (1, -2, 0, 3, 1, -1)
    p = embed(s, kv)
    c = embed_complex(s, kv)
    assert p.x == (c + c.conjugate()) * Fraction(1, 2)
    ax, ay = p.approx
    ref = sum(k * complex(mpmath.expjpi(mpmath.mpf(i) / 6)) for i, k in enumerate(kv))
    assert abs(ax - ref.real) < 1e-12 and abs(ay - ref.imag) < 1e-12


def test_exact_point_rejects_non_real():
    from quasigrid.cyclotomic import root_power

    with pytest.raises(ValueError):
        ExactPoint(root_power(5, 1), Q(0))


def test_grid_line_ordering():
    assert sorted([GridLine(2, 0), GridLine(0, 5), GridLine(0, -1)]) == [GridLine(0, -1), GridLine(0, 5), GridLine(2, 0)]
