"""Smoke test for the qugame_py bindings.

Build and install first:

    pip install maturin
    pip install --no-build-isolation ./crates/py

then run `python python/smoke_test.py` (or `pytest python/smoke_test.py`).
"""

import math

import qugame_py as q


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def test_grover():
    r = q.grover_search(3, 5)
    assert r["k"] == 2
    assert close(r["success_probability"], 0.9453, 5e-5)
    assert close(r["final_amplitudes"][5], 11 / (8 * math.sqrt(2)))


def test_bernstein_vazirani():
    r = q.bernstein_vazirani(5, 19)
    assert r["recovered"] == 19 and r["oracle_calls"] == 1


def test_rsa():
    r = q.rsa_demo(77, 11, 67, seed=1)
    assert sorted([r["p"], r["q"]]) == [7, 11]
    assert (r["phi"], r["d"], r["plaintext"]) == (60, 11, 23)


def test_tables_and_nash():
    t = q.ewl_table("pd")
    assert t["payoff_a"][2][2] == 2.25 and t["payoff_b"][3][2] == 1.5
    assert q.pure_nash(t["payoff_a"], t["payoff_b"]) == [(3, 3)]
    bos = q.ewl_table("bos", alpha=3.0, beta=2.0, gamma=1.0)
    assert q.pure_nash(bos["payoff_a"], bos["payoff_b"]) == [(1, 1)]


def test_protocols():
    for k in range(4):
        r = q.teleport(1.1, 0.3, branch=k)
        assert r["outcome"] == f"b{k}"
        assert close(r["probabilities"]["overlap"], 1.0)
    r = q.secret_share_qubit(0.4, 2.0, forced=[3, 1])
    assert close(r["probabilities"]["overlap"], 1.0)
    for pair in ("ab", "bg", "ga"):
        r = q.secret_share_qutrit([1.0, -2.0, 0.5], pair)
        assert close(r["probabilities"]["overlap"], 1.0)
    r = q.pseudo_telepathy([1, 1, 0, 1, 1], seed=4)
    assert r["payoffs"]["team"] == 1.0


def test_newcomb_and_density():
    r = q.newcomb_play(0, 0.5)
    assert r["payoffs"]["alice"] == 1_000_000
    r = q.newcomb_play(1, 0.25, coherent=True)
    assert close(r["probabilities"]["coefficient"], 0.5)
    c = q.uqcm_clone(0.7, -1.2)
    assert close(c["fidelity"], 5 / 6) and close(c["eta"], 2 / 3)
    e = q.estimation_game(0.3, 0.0, 2000, seed=3)
    assert e["params"]["copies"] == 2000


def test_errors():
    for call, exc in [
        (lambda: q.grover_search(3, 8), q.DomainError),
        (lambda: q.shor_factor(13), q.DomainError),
        (lambda: q.pseudo_telepathy([1, 0, 0]), ValueError),
        (lambda: q.grover_search(40, 1), q.ResourceError),
    ]:
        try:
            call()
        except exc:
            pass
        else:
            raise AssertionError("expected an error")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok  {t.__name__}")
    print(f"{len(tests)} passed")
