import random

import pytest

from latgal import closure as cl
from latgal import fca, galois
from latgal import lattice as lat
from latgal.aggregation import SupAggSpec, build
from latgal.fca import ManyValuedContext, ValueMapFamily


def small_lattices():
    """Lattices of size <= 8 used across property tests."""
    two, three = lat.chain(2), lat.chain(3)
    return [
        lat.chain(1), two, three, lat.chain(4),
        lat.boolean(2), lat.boolean(3),
        lat.fixture_l6(), lat.dual(lat.fixture_l6()),
        lat.diamond_m3(), lat.pentagon_n5(),
        lat.product([two, lat.chain(4)])[0],
    ]


def reference_slots(L):
    S1 = cl.validate_closure_system(L, ["1", "b", "c", "0"])
    T1 = cl.validate_interior_system(L, ["d", "a", "c", "0"])
    phi1 = cl.make_iso(S1, T1, {"1": "d", "b": "c", "c": "a", "0": "0"})
    S2 = cl.validate_closure_system(L, ["1", "a"])
    T2 = cl.validate_interior_system(L, ["b", "0"])
    phi2 = cl.make_iso(S2, T2, {"1": "b", "a": "0"})
    return (S1, T1, phi1), (S2, T2, phi2)


@pytest.fixture
def l6():
    return lat.fixture_l6()


@pytest.fixture
def slots(l6):
    return reference_slots(l6)


@pytest.fixture
def ex1(l6, slots):
    return build(SupAggSpec(l6, slots))


def random_family(L, n_tokens, rng):
    return ValueMapFamily(L, {f"t{i}": galois.random_galois_pair(L, L, rng).lower for i in range(n_tokens)})


def random_context(nb, na, tokens, rng):
    table = [[rng.choice(tokens) for _ in range(na)] for _ in range(nb)]
    return ManyValuedContext(tuple(f"b{i}" for i in range(nb)), tuple(f"a{j}" for j in range(na)), table)


def fca_instances(seed=17):
    """(context, family) pairs with |L|^|B| <= 4096."""
    rng = random.Random(seed)
    out = []
    for k in (2, 3, 4):
        fam = fca.residuated_chain_family(k)
        for nb in (1, 2, 3, 4):
            if k ** nb > 4096:
                continue
            for _ in range(3):
                out.append((random_context(nb, rng.randint(1, 4), list(fam.tokens), rng), fam))
    for L in (lat.fixture_l6(), lat.diamond_m3(), lat.pentagon_n5(), lat.boolean(2)):
        for nb in (1, 2, 3, 4):
            if len(L) ** nb > 4096:
                continue
            fam = random_family(L, 3, rng)
            out.append((random_context(nb, rng.randint(1, 3), list(fam.tokens), rng), fam))
    return out


# --- acceptance reporting ---------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    mark = item.get_closest_marker("acceptance")
    if mark is not None and (rep.when == "call" or rep.failed):
        number, title = mark.args
        detail = dict(item.user_properties).get("detail", "")
        prev = _ACCEPTANCE.get(number, (title, True, ""))
        _ACCEPTANCE[number] = (title, prev[1] and rep.passed, detail or prev[2])
    return rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
        if detail:
            terminalreporter.write_line(f"              {detail}")
