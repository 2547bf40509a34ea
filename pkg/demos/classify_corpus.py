"""Walk the bundled instance corpus and print a classification summary.

Run as: python demos/classify_corpus.py
"""

from importlib import resources

from contactcheck import emit_text, parse_spec, run_checks


def main():
    data = resources.files("contactcheck") / "data"
    for entry in sorted(data.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".cmspec"):
            continue
        spec = parse_spec(entry.read_text(), name=entry.name.removesuffix(".cmspec"))
        print(emit_text(run_checks(spec)))


if __name__ == "__main__":
    main()
