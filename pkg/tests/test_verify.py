import numpy as np
import pytest

from activeflux.equations import Euler
from activeflux.verify import SUITES, random_euler_states, run_suites


def test_random_states_are_admissible_and_reproducible():
    a = random_euler_states(np.random.default_rng(1), 1000)
    b = random_euler_states(np.random.default_rng(1), 1000)
    np.testing.assert_array_equal(a, b)
    assert np.all(Euler(1.4).admissible_mask(a))


@pytest.mark.parametrize("name", [n for n in SUITES if n != "conservation"])
def test_fast_suites_pass_on_small_samples(name):
    (res,) = run_suites([name], cases=500)
    assert res.passed, res.as_dict()
    assert res.cases >= 500


def test_suite_results_are_seeded():
    (a,) = run_suites(["limiter-convexity"], seed=5, cases=300)
    (b,) = run_suites(["limiter-convexity"], seed=5, cases=300)
    assert a.worst == b.worst and a.cases == b.cases


def test_unknown_suite_is_rejected():
    with pytest.raises((KeyError, ValueError)):
        run_suites(["nonsense"])
