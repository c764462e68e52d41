"""Search the law corpus for counterexamples, first on a correct kernel and
then on each deliberately broken one.

Run with: python3 demos/law_search.py
"""

import time

from bval.evaluate import format_env
from bval.kernel.context import MUTATIONS
from bval.laws import check_corpus, load_corpus

corpus = load_corpus()
start = time.perf_counter()
report = check_corpus(corpus)
t = report.totals()
print(f"{t['laws']} laws, {t['cases']} cases, {t['counterexamples']} counterexamples ({time.perf_counter() - start:.1f}s)")

for mutation, description in MUTATIONS.items():
    report = check_corpus(corpus, mutation=mutation)
    if not report.counterexamples:
        print(f"\n{mutation} ({description}): every law still holds")
        continue
    law, v = report.counterexamples[0]
    print(f"\n{mutation} ({description}): {len(report.counterexamples)} laws broken, e.g.")
    print(f"  {law.name}: {law.text}")
    print(f"  counterexample {format_env(v.env)}")
