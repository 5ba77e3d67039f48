import itertools
import random

from hypothesis import strategies as st

from satinfolab.core import Assignment, Clause, CnfInstance, Literal, evaluate


def all_assignments(n):
    """Counter order, x_n least significant."""
    for bits in itertools.product((False, True), repeat=n):
        yield Assignment(bits)


def sweep_models(instance):
    """Pure-Python model enumeration; independent of the numpy oracle."""
    return [a for a in all_assignments(instance.n) if evaluate(instance, a)]


def random_clause(rng, n, density=0.5):
    lits = [Literal(v, rng.random() < 0.5) for v in range(1, n + 1) if rng.random() < density]
    return Clause(tuple(lits))


def random_instance(rng, max_n=8, max_m=12, min_m=0):
    n = rng.randint(1, max_n)
    m = rng.randint(min_m, max_m)
    density = rng.choice([0.2, 0.4, 0.6])
    return CnfInstance(n, tuple(random_clause(rng, n, density) for _ in range(m)))


@st.composite
def instances(draw, max_n=6, max_m=8, min_m=0):
    n = draw(st.integers(1, max_n))
    pairs = st.lists(st.sampled_from(["00", "01", "10", "11"]), min_size=n, max_size=n)
    clauses = draw(st.lists(pairs, min_size=min_m, max_size=max_m))
    built = []
    for pair_list in clauses:
        lits = [Literal(i, p == "11") for i, p in enumerate(pair_list, 1) if p[0] == "1"]
        built.append(Clause(tuple(lits)))
    return CnfInstance(n, tuple(built))


def seeded(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
