"""Walk through the positive/negative evaluation of a predicate.

Run with: python3 demos/double_evaluation.py
"""

from bval.evaluate import check_machine, evaluate
from bval.harness.suites import bundled_machines
from bval.kernel import EvalContext
from bval.syntax import parse_machine


def show(text, ctx=None):
    r = evaluate(text, ctx=ctx)
    print(f"  {text:<22} positive={r.pos.value:<6} negative={r.neg.value:<6} -> {r.classification.name}")


print("A healthy kernel gives opposite answers on the two chains:")
show("2 : {1,2}")
show("2 /: {1}")

print("\nDivision by zero makes both chains fail, so the predicate is not well-defined:")
show("1/0 = 1")

print("\nSwitching on mutation M5 (singleton membership negated) makes the chains agree:")
show("2 /: {1}", EvalContext(mutation="M5"))

text = next(t for name, t in bundled_machines() if name.startswith("DoubleEvaluation"))
m = parse_machine(text)
print(f"\nMachine {m.name}:")
for label, ctx in (("unmutated", None), ("under M5", EvalContext(mutation="M5"))):
    report = check_machine(m, ctx=ctx)
    verdicts = ", ".join(f"{a} == {v}" for a, v in report.entries)
    print(f"  {label:<10} {verdicts}")
