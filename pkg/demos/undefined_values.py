"""Show how the solver separates real solutions from undefined bindings.

Run with: python3 demos/undefined_values.py
"""

from bval.evaluate import evaluate, format_env, solve

for text in ("x : 1..4 & x*x = 9", "x = 2/y & y = x-x", "x = 10/y & y : 1..3"):
    sols = solve(text)
    found = [format_env(s) for s in sols]
    print(f"{text}")
    print(f"  solutions: {'; '.join(found) or 'none'}")
    if sols.undefined:
        env = sols.undefined[0]
        r = evaluate(text, env)
        print(f"  {len(sols.undefined)} undefined bindings, first {format_env(env)}: {r.classification.name}, {r.undefined}")
    print(f"  candidates checked: {sols.checked}")
