"""Regenerates listing1.attention.tsv from the context dump on stdin.

    codeattn contexts tests/fixtures/listing1.java | python3 make_listing1_attention.py > listing1.attention.tsv

Weights favour paths through the loop condition and the END_OF_TEXT test,
then are normalised to sum to 1 like a softmax output.
"""
import sys


def weight(context: str) -> float:
    w = 0.02
    if '"END_OF_TEXT"' in context:
        w += 0.6
    if "IfStmt" in context:
        w += 0.25
    if "WhileStmt" in context:
        w += 0.2
    if context.startswith("args,") or context.endswith(",args"):
        w += 0.1
    return w


def main() -> None:
    contexts = [line.rstrip("\n") for line in sys.stdin if line.strip()]
    # Repeated canonical strings share one record, as the binder expects.
    unique = list(dict.fromkeys(contexts))
    total = sum(weight(c) for c in unique)
    print("# path-context attention for listing1.java")
    for c in unique:
        print(f"{c}\t{weight(c) / total:.9f}")


if __name__ == "__main__":
    main()
