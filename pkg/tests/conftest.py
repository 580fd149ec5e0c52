import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kkwcalc.ring import MultiPoly, RatXi, Scalar

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "scripts"))

settings.register_profile(
    "repo", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
scalars = st.builds(Scalar, small_fractions, small_fractions)


def polys(names=("h1", "theta_1", "xi_1"), max_terms=4, max_exp=2):
    monomial = st.dictionaries(st.sampled_from(names), st.integers(1, max_exp), max_size=len(names))

    def build(pairs):
        out = MultiPoly()
        for powers, coeff in pairs:
            term = MultiPoly.const(coeff)
            for name, e in powers.items():
                term = term * MultiPoly.symbol(name, e)
            out = out + term
        return out

    return st.lists(st.tuples(monomial, scalars), max_size=max_terms).map(build)


@st.composite
def ratxis(draw, max_pole=6, extra_degree=3, coeff_polys=None, min_decay=None):
    """Random num/((xin-i)^a (xin+i)^b); ``min_decay`` caps the numerator degree at a+b-min_decay."""
    a = draw(st.integers(0, max_pole))
    b = draw(st.integers(0, max_pole))
    top = a + b + extra_degree if min_decay is None else a + b - min_decay
    coeff = coeff_polys if coeff_polys is not None else polys(("h1",), max_terms=2)
    num = MultiPoly()
    for k in range(max(top, -1) + 1):
        num = num + draw(coeff) * MultiPoly.symbol("xin", k)
    return RatXi(num, a, b)
