"""Pass/fail runner for the numbered selftest steps."""
import sys
from typing import Callable

def run_checks(title: str, checks: dict[str, Callable[[], bool]]) -> None:
    """Evaluate each check (an exception counts as a failure), print the summary, exit 1 on any failure."""
    print("="*60 + f"\n{title}\n" + "="*60)
    fails = []
    for name, fn in checks.items():
        try: ok = bool(fn())
        except Exception as e: ok = False; name = f"{name} ({type(e).__name__}: {e})"
        print(f"{'✅' if ok else '❌'} {name}")
        if not ok: fails.append(f"❌ {name}")
    if fails: print("\nFAILURES:\n" + "\n".join(fails))
    print(f"\nResults: {len(checks)-len(fails)}/{len(checks)} passed.")
    print("✅ All passed!" if not fails else "❌ Some failed.")
    sys.exit(bool(fails))
