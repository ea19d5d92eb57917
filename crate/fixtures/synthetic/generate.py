#!/usr/bin/env python3
"""Regenerate the synthetic corpus and its hand-labeled manifest.

Every publication is built from an explicit recipe, and the manifest records
which corpus restrictions the recipe violates. The labels come from the
recipe, not from running the filter.

    python3 fixtures/synthetic/generate.py
"""

import csv
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent
SEED = 20191107
N_PUBS = 200


def check_char(digits):
    s = sum(int(d) * w for d, w in zip(digits, range(8, 1, -1)))
    c = (11 - s % 11) % 11
    return "X" if c == 10 else str(c)


def issn(seven):
    return f"{seven[:4]}-{seven[4:]}{check_char(seven)}"


GOLD = [issn(s) for s in ["2041172", "1932620", "2045232", "1664302", "2050084",
                          "1471214", "1748917", "2167835", "2375254", "2434561"]]
CLOSED = [issn(s) for s in ["0028083", "0036807", "0092867", "1095924", "0140673"]]

SECTOR_INSTS = {
    "S01": ("Universitaet Eins", ["UNIV"]),
    "S02": ("Universitaet Zwei", ["UNIV"]),
    "S03": ("Universitaet Drei", ["UNIV"]),
    "S04": ("Universitaet Vier", ["UNIV"]),
    "S05": ("Universitaet Fuenf", ["UNIV"]),
    "S06": ("Universitaet Sechs", ["UNIV"]),
    "S07": ("Max-Planck-Institut A", ["MPG"]),
    "S08": ("Max-Planck-Institut B", ["MPG"]),
    "S09": ("Helmholtz-Zentrum A", ["HGF"]),
    "S10": ("Helmholtz-Zentrum B", ["HGF"]),
    "S11": ("Leibniz-Institut A", ["WGL"]),
    "S12": ("Leibniz-Institut B", ["WGL"]),
    "S13": ("Fraunhofer-Institut A", ["FHG"]),
    "S14": ("Gemeinsames Institut", ["MPG", "HGF"]),
}
NONSECTOR = ["N01", "N02", "N03", "N04"]
FOREIGN = [("F01", "US"), ("F02", "FR"), ("F03", "GB"), ("F04", "CH")]

INCLUDED_TYPES = ["Article", "Review", "Editorial Material", "Letter", "Correction"]

# Recipes and how often they occur. Violations are declared per recipe.
RECIPES = [
    ("keep_k0", 50), ("keep_kn", 20), ("keep_knsec", 40), ("keep_mixed_doctype", 6),
    ("keep_hyphenless_issn", 4),
    ("year_early", 8), ("year_late", 4),
    ("doctype_meeting", 8), ("doctype_unknown", 4),
    ("closed_journal", 10), ("no_issn", 4),
    ("intl_ki", 10), ("intl_kisec", 6), ("outofscope", 6),
    ("nonsector_first", 8), ("nonsector_reprint", 6),
    ("multi_intl_old", 3), ("multi_closed_nonsector", 3),
]


def affil(inst, country="DE"):
    return {"institution_id": inst, "country": country}


def sector(rng, k=1):
    return rng.sample(sorted(SECTOR_INSTS), k)


def build(rng, recipe):
    year = rng.randint(2014, 2018)
    doc_types = [rng.choice(INCLUDED_TYPES)]
    issns = [rng.choice(GOLD)]
    violations = set()
    n_extra = rng.choice([0, 0, 1, 2, 3, 4, 6, 9])

    first_s = sector(rng)[0]
    # (affiliations, is_reprint) per author, first entry is position 1
    authors = [([affil(first_s)], True)]

    def extra_authors(pool):
        for _ in range(n_extra):
            authors.append(([affil(rng.choice(pool))], False))

    if recipe in ("keep_k0", "keep_mixed_doctype", "keep_hyphenless_issn", "year_early", "year_late",
                  "doctype_meeting", "doctype_unknown", "closed_journal", "no_issn"):
        extra_authors([first_s])
        if recipe == "keep_mixed_doctype":
            doc_types = ["Article", "Proceedings Paper"]
        if recipe == "keep_hyphenless_issn":
            issns = [issns[0].replace("-", "")]
        if recipe == "year_early":
            year = rng.randint(2008, 2013)
            violations.add("year")
        if recipe == "year_late":
            year = 2019
            violations.add("year")
        if recipe == "doctype_meeting":
            doc_types = ["Meeting Abstract"] if rng.random() < 0.5 else ["Meeting", "Proceedings Paper"]
            violations.add("doctype")
        if recipe == "doctype_unknown":
            doc_types = ["Film Review"]
            violations.add("doctype")
        if recipe == "closed_journal":
            issns = [rng.choice(CLOSED)]
            violations.add("gold_oa")
        if recipe == "no_issn":
            issns = []
            violations.add("gold_oa")
    elif recipe == "keep_kn":
        extra_authors([first_s])
        authors.append(([affil(rng.choice(NONSECTOR))], False))
    elif recipe == "keep_knsec":
        others = [s for s in sector(rng, 3) if s != first_s][:2]
        extra_authors([first_s] + others)
        authors.append(([affil(others[0]), affil(first_s)], rng.random() < 0.3))
        if rng.random() < 0.3:
            authors.append(([affil(rng.choice(NONSECTOR))], False))
    elif recipe in ("intl_ki", "intl_kisec", "multi_intl_old"):
        extra_authors([first_s])
        f, c = rng.choice(FOREIGN)
        authors.append(([affil(f, c)], False))
        if recipe == "intl_kisec":
            other = next(s for s in sector(rng, 2) if s != first_s)
            authors.append(([affil(other)], False))
        violations.add("coop")
        if recipe == "multi_intl_old":
            year = 2012
            violations.add("year")
    elif recipe == "outofscope":
        n = rng.choice(NONSECTOR)
        authors = [([affil(n)], True)]
        for _ in range(n_extra):
            authors.append(([affil(rng.choice(NONSECTOR))], False))
        violations.update({"coop", "sector_role"})
    elif recipe in ("nonsector_first", "multi_closed_nonsector"):
        n = rng.choice(NONSECTOR)
        authors = [([affil(n)], False), ([affil(first_s)], True)]
        extra_authors([first_s, n])
        violations.add("sector_role")
        if recipe == "multi_closed_nonsector":
            issns = [rng.choice(CLOSED)]
            violations.add("gold_oa")
    elif recipe == "nonsector_reprint":
        n = rng.choice(NONSECTOR)
        authors = [([affil(first_s)], False), ([affil(n)], True)]
        extra_authors([first_s])
        violations.add("sector_role")
    else:
        raise ValueError(recipe)

    # occasionally a second affiliation at the same institution (deduplicated on load)
    if rng.random() < 0.05:
        authors[0] = (authors[0][0] + [authors[0][0][0]], authors[0][1])

    records = [
        {"position": i + 1, "is_reprint": rp, "affiliations": affs}
        for i, (affs, rp) in enumerate(authors)
    ]
    return {"year": year, "doc_types": doc_types, "issns": issns, "authors": records}, violations


def main():
    rng = random.Random(SEED)
    plan = [name for name, count in RECIPES for _ in range(count)]
    assert len(plan) == N_PUBS, len(plan)
    rng.shuffle(plan)

    corpus, manifest = [], []
    for i, recipe in enumerate(plan):
        pub, violations = build(rng, recipe)
        pid = f"SYN-{i + 1:04d}"
        corpus.append({"id": pid, **pub})
        manifest.append({
            "id": pid,
            "recipe": recipe,
            "included": "false" if violations else "true",
            "violations": ";".join(sorted(violations)),
        })

    with open(OUT / "corpus.jsonl", "w") as f:
        for rec in corpus:
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")
    with open(OUT / "manifest.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["id", "recipe", "included", "violations"], lineterminator="\n")
        w.writeheader()
        w.writerows(manifest)
    with open(OUT / "registry.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["institution_id", "name", "sectors"])
        for inst, (name, sectors) in SECTOR_INSTS.items():
            w.writerow([inst, name, ";".join(sectors)])
    with open(OUT / "gold_oa.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["issn", "journal"])
        for i, s in enumerate(GOLD):
            w.writerow([s, f"Open Journal {i + 1}"])
    with open(OUT / "payments.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["institution", "period", "euro", "doi", "is_hybrid", "publisher", "journal_full_title", "issn"])
        prng = random.Random(SEED + 1)
        for i in range(40):
            period = prng.randint(2013, 2019)
            hybrid = prng.random() < 0.25
            euro = f"{prng.randint(700, 2600)}.{prng.randint(0, 99):02d}"
            w.writerow([f"Universitaet {1 + i % 6}", period, euro, f"10.9999/syn.{i}",
                        "TRUE" if hybrid else "FALSE", "Synthetic", "Open Journal", prng.choice(GOLD)])
    print(f"wrote {len(corpus)} publications")


if __name__ == "__main__":
    main()
