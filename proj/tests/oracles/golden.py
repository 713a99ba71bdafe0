"""Regenerates the golden CLI outputs for the toy fixture.

Computes embedding coherence directly from the fixture files (regex sentence
split, regex tokens, ordered-pair cosine mean) and the Welch comparison with
scipy. Run from the repository root:

    python3 tests/oracles/golden.py
"""

import csv
import math
import re
from pathlib import Path

import numpy as np
from scipy import stats

ROOT = Path(__file__).resolve().parents[1] / "data"
TOY = ROOT / "toy"
OUT = ROOT / "golden"


def load_vectors(path):
    with open(path, encoding="utf-8") as f:
        count, dim = map(int, f.readline().split())
        table = {}
        for line in f:
            parts = line.split()
            table[parts[0]] = [float(x) for x in parts[1:]]
    assert len(table) == count
    return table


def sentences(text):
    return [s.strip() for s in re.split(r"(?<=[.!?])\s+(?=[A-Z0-9])", text) if s.strip()]


def tokens(sentence):
    return [t.lower() for t in re.findall(r"[A-Za-z0-9]+", sentence)]


def cosine(u, v):
    uv = sum(a * b for a, b in zip(u, v))
    return uv / (math.sqrt(sum(a * a for a in u)) * math.sqrt(sum(b * b for b in v)))


def coherence(text, table):
    reps = []
    for s in sentences(text):
        known = [table[t] for t in tokens(s) if t in table]
        if known:
            reps.append([sum(col) / len(known) for col in zip(*known)])
    k = len(reps)
    if k < 2:
        return None, k
    total = sum(cosine(reps[i], reps[j]) for i in range(k) for j in range(k) if i != j)
    return total / (k * (k - 1)), k


def fixed(x, d):
    s = f"{x:.{d}f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


def write_summary(rows, path):
    fake = np.array([r[2] for r in rows if r[1] == "fake" and r[2] is not None])
    legit = np.array([r[2] for r in rows if r[1] == "legitimate" and r[2] is not None])
    excluded = {lab: sum(1 for r in rows if r[1] == lab and r[2] is None) for lab in ("fake", "legitimate")}
    res = stats.ttest_ind(fake, legit, equal_var=False)
    va, vb = fake.var(ddof=1) / len(fake), legit.var(ddof=1) / len(legit)
    dof = (va + vb) ** 2 / (va**2 / (len(fake) - 1) + vb**2 / (len(legit) - 1))
    pct = (legit.mean() - fake.mean()) / fake.mean() * 100
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(
            "method,fake_n,fake_mean,fake_sd,fake_excluded,legit_n,legit_mean,legit_sd,legit_excluded,"
            "percent_difference,t_statistic,dof,p_value,log10_p,test,degenerate\n"
        )
        f.write(
            ",".join(
                [
                    "embedding",
                    str(len(fake)),
                    fixed(fake.mean(), 6),
                    fixed(fake.std(), 6),
                    str(excluded["fake"]),
                    str(len(legit)),
                    fixed(legit.mean(), 6),
                    fixed(legit.std(), 6),
                    str(excluded["legitimate"]),
                    fixed(pct, 2),
                    fixed(res.statistic, 6),
                    fixed(dof, 6),
                    f"{res.pvalue:.5E}",
                    fixed(math.log10(res.pvalue), 6),
                    "welch",
                    "false",
                ]
            )
            + "\n"
        )



def main():
    table = load_vectors(TOY / "words.vec")
    rows = []
    for name, label in (("fake", "fake"), ("legit", "legitimate")):
        with open(TOY / f"{name}.csv", newline="", encoding="utf-8") as f:
            for i, rec in enumerate(csv.DictReader(f), start=1):
                value, k = coherence(rec["text"], table)
                rows.append((f"{name}-{i}", label, value, k))
    rows.sort(key=lambda r: r[0])

    OUT.mkdir(exist_ok=True)
    with open(OUT / "scores_embedding.csv", "w", encoding="utf-8", newline="") as f:
        f.write("doc_id,label,method,value,element_count,pair_count,status\n")
        for doc_id, label, value, k in rows:
            if value is None:
                f.write(f"{doc_id},{label},embedding,,{k},0,undefined\n")
            else:
                f.write(f"{doc_id},{label},embedding,{fixed(value, 6)},{k},{k * (k - 1) // 2},ok\n")

    write_summary(rows, OUT / "summary.csv")
    # compare run on the score CSV sees values rounded to 6 decimals
    rounded = [(d, lab, None if v is None else float(fixed(v, 6)), k) for d, lab, v, k in rows]
    write_summary(rounded, OUT / "summary_from_scores.csv")


if __name__ == "__main__":
    main()
