"""Smoke test for the catml_py extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import tempfile

import catml_py as cm

pairs = [("I", "love"), ("I", "eat"), ("I", "like"),
         ("love", "apples"), ("eat", "apples"), ("like", "apples")]
w1 = cm.Graph(["I", "love", "eat", "like", "apples"],
              [(f"({a},{b})", a, b) for a, b in pairs])
assert w1.is_acyclic()

path = cm.Category.free(w1, 2)
assert len(path.hom("I", "apples")) == 3
assert path.certification == "exact"
assert path.check_laws()["violations"] == []

like_love = [(("I", ["(I,like)", "(like,apples)"]), ("I", ["(I,love)", "(love,apples)"]))]
q = cm.Category.presented(w1, like_love, 2)
assert len(q.hom("I", "apples")) == 2

out = cm.pipeline(w1, like_love, 2)
assert out["passed"] and out["homs"]["I,apples"] == [3, 2]
assert all(p["nat"] == p["hom"] for p in out["yoneda"]["pairs"])

loop = cm.Graph(["x"], [("e", "x", "x")])
inv = cm.Category.presented(loop, [(("x", ["e", "e"]), ("x", []))], 2)
assert inv.certification == "exact" and inv.compose("[e]", "[e]") == "1_x"
try:
    cm.Category.free(loop, 3).hom("x", "x")
    raise AssertionError("expected a resource limit")
except cm.ResourceLimit:
    pass

fruit = cm.System.relation(cm.Graph(
    ["I", "love", "Gala", "Plantain"],
    [("il", "I", "love"), ("lg", "love", "Gala"), ("lp", "love", "Plantain")]))
kinds = [["I"], ["love"], ["Gala", "Plantain"]]
sys_q, classes = fruit.quotient(kinds)
assert len(sys_q.carrier) == 3 and classes["Gala"] == classes["Plantain"]
om = fruit.order_map([["I"], ["love"], ["Gala"], ["Plantain"]], kinds)
assert om["passed"] and om["uniqueness"]["status"] == "verified"

assert len(cm.pullback([0, 1, 1], [1, 1], 2)) == 4

for name in ["identity", "powerset", "group-action"]:
    assert cm.check_monad(name)["violations"] == [], name
assert cm.check_monad("upath", graphs=[w1], bound=2)["violations"] == []
beck = cm.check_adjunction_beck("group-action")
assert beck["laws"]["violations"] == [] and beck["beck"]["verdict"] == "monadic"

with tempfile.TemporaryDirectory() as ws:
    code, text = cm.run_cli(["--workspace", ws, "verify", "bogus", "x"])
assert code == 2 and "unknown suite" in text

print("python smoke test: ok")
