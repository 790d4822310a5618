"""Regenerate tests/golden/*.txt from the current CLI output.

    python scripts/make_golden.py
"""
import contextlib
import io
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import CASES  # noqa: E402

from fsrank.cli import main  # noqa: E402

CORPUS = ROOT / "src" / "fsrank" / "corpus"


def expand(argv):
    return [a.replace("@corpus", str(CORPUS)) for a in argv]


def run(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(expand(argv))
    return code, out.getvalue()


if __name__ == "__main__":
    gold = ROOT / "tests" / "golden"
    gold.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code, text = run(argv)
        (gold / f"{name}.txt").write_text(f"# exit {code}\n{text}", encoding="utf-8")
        print(f"{name}: exit {code}")
