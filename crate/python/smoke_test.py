"""Smoke test of the clutchlab Python module.

Build and stage the extension first:

    cargo build -p clutchlab-python --release
    cp target/release/libclutchlab.so python/clutchlab.so

then run `python3 python/smoke_test.py` from the repository root (or via
pytest). The script walks one complete workflow per subsystem.
"""

import math

import clutchlab


def test_actions_and_orbits():
    tetra = clutchlab.Action.tetra()
    assert tetra.order == 24
    assert tetra.base_size == 12
    assert tetra.is_transitive
    assert len(tetra.stabilizer(0)) == 2
    assert len(tetra.preserving_subgroup([0, 1, 2])) == 6

    z2 = clutchlab.Action.cyclic(2)
    assert z2.orbits() == [[0, 1]]
    assert clutchlab.Action.dihedral(3).irreducible_degrees() == [1, 1, 2]


def test_pi0_of_the_swap_bundle():
    bundle = clutchlab.Bundle.fixture("swap")
    assert bundle.validate() == []
    assert bundle.extensions() == [[0, 1], [1, 0]]

    components = bundle.pi0(seed=0)
    assert len(components) == 2
    characters = set()
    for mults, psi in components:
        assert psi.is_equivariant
        assert psi.validate() == []
        assert psi.gl() == mults
        chi = psi.glued_character(0)
        characters.add(round(chi[1].real))
    assert characters == {-1, 1}

    # the two components average to a singular intertwiner
    (_, a), (_, b) = components
    alpha, sigma_min, invertible = a.average(b, 0)
    assert not invertible and sigma_min < 1e-12
    # and a component averaged with itself gives the exact identity
    alpha, sigma_min, invertible = a.average(a, 0)
    assert invertible and alpha[0][0] == 1.0

    assert clutchlab.Bundle.fixture("empty-ext").extensions() == []


def test_pi1_of_the_vertex_bundle():
    bundle = clutchlab.Bundle.fixture("tetra-vertex")
    assert bundle.ranks == [2, 2, 2]
    exts = bundle.extensions()
    assert len(exts) == 2

    # the irreducible component has fundamental group Z, the split one is
    # certified simply connected
    results = {tuple(exts[i]): bundle.pi1(i) for i in range(2)}
    by_support = {
        sum(1 for n in mults if n): value for mults, value in results.items()
    }
    free_rank, torsion, condition_i, certified = by_support[1]
    assert (free_rank, torsion, condition_i, certified) == (1, [], False, False)
    free_rank, torsion, condition_i, certified = by_support[2]
    assert (free_rank, torsion, condition_i, certified) == (0, [], True, True)


def test_relations_round_trip():
    z3 = clutchlab.Action.cyclic(3)
    assert len(z3.closure([(0, 1)])) == 9
    assert z3.determines([(0, 1)])

    d2 = clutchlab.Bundle.fixture("d2-four").action()
    assert not d2.determines([(0, 1)])
    assert d2.determines([(0, 1), (0, 3)])

    # evaluate a representative on a determining pair and rebuild it
    bundle = clutchlab.Bundle.fixture("tetra-vertex")
    _, psi = bundle.pi0(seed=5)[0]
    data = psi.evaluate([(0, 1)])
    rebuilt = bundle.reconstruct(data)
    for x in range(3):
        for y in range(3):
            got = rebuilt.psi(x, y)
            want = psi.psi(x, y)
            for row_a, row_b in zip(got, want):
                for u, v in zip(row_a, row_b):
                    assert abs(u - v) < 1e-9

    # restriction keeps the glued character on the preserving subgroup
    restricted = psi.restrict([0, 1])
    assert restricted.is_equivariant
    assert restricted.bundle().base_size == 2


def test_pullback_construction():
    z2 = clutchlab.Action.cyclic(2)
    sign = [[[1.0 + 0.0j]], [[-1.0 + 0.0j]]]
    bundle = clutchlab.Bundle.pullback(z2, sign)
    assert bundle.validate() == []
    assert bundle.transport(1, 0)[0][0] == -1.0
    assert len(bundle.extensions()) == 2


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"{name}: ok")
            except AssertionError as exc:
                failures += 1
                print(f"{name}: FAILED {exc}")
    if failures:
        raise SystemExit(f"{failures} smoke tests failed")
    print("all smoke tests passed")
