#!/usr/bin/env python3
"""Regenerates the frozen test fixtures in this directory.

examples_*    eight hand-parsed evidence sentences, one per omission type
agreement/*   five diagnostic splits of 600 records plus three-model predictions
              whose agreement counts are fixed per cell
by_type/*     diagnostics and three-model predictions with fixed per-type
              NEI-detection counts
embeddings    a few pooled-ready contrastive groups for `losscheck`

Output is deterministic; rerunning must not change any file.
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def dump(path, records):
    path = os.path.join(HERE, path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def leaves(tree):
    out = []
    for part in tree.replace("(", " ( ").replace(")", " ) ").split():
        out.append(part)
    toks, tags = [], []
    for i, p in enumerate(out):
        if p not in "()" and out[i - 1] == "(" and i + 2 < len(out) and out[i + 1] not in "()" and out[i + 2] == ")":
            tags.append(p)
            toks.append(out[i + 1])
    return toks, tags


# ---------------------------------------------------------------------------
# Truncated evidence is ended at the truncation point.

EXAMPLES = [
    dict(
        id="ex-sent", claim="The Endless River is an album by a band formed in 1967.", label="REFUTES",
        evidence=[
            ("The Endless River", "The Endless River is a studio album by Pink Floyd.",
             "(ROOT (S (NP (DT The) (NNP Endless) (NNP River)) (VP (VBZ is) (NP (NP (DT a) (NN studio) (NN album))"
             " (PP (IN by) (NP (NNP Pink) (NNP Floyd))))) (. .)))"),
            ("Pink Floyd", "Pink Floyd were founded in 1965 by students.",
             "(ROOT (S (NP (NNP Pink) (NNP Floyd)) (VP (VBD were) (VP (VBN founded) (PP (IN in) (NP (CD 1965)))"
             " (PP (IN by) (NP (NNS students))))) (. .)))"),
        ],
        expect=("SENT", "Pink Floyd were founded in 1965 by students."),
    ),
    dict(
        id="ex-pp", claim="Uranium-235 was discovered by Arthur Jeffrey Dempster in 2005.", label="REFUTES",
        evidence=[
            ("Uranium-235", "It was discovered in 1935 by Arthur Jeffrey Dempster.",
             "(ROOT (S (NP (PRP It)) (VP (VBD was) (VP (VBN discovered) (PP (IN in) (NP (CD 1935)))))"
             " (PP (IN by) (NP (NNP Arthur) (NNP Jeffrey) (NNP Dempster))) (. .)))"),
        ],
        expect=("PP", "by Arthur Jeffrey Dempster"),
    ),
    dict(
        id="ex-nounm", claim="Vedam is a drama film.", label="SUPPORTS",
        evidence=[
            ("Vedam (film)", "Vedam is a 2010 Indian drama film written and directed by Radhakrishna Jagarlamudi.",
             "(ROOT (S (NP (NNP Vedam)) (VP (VBZ is) (NP (NP (DT a) (CD 2010) (JJ Indian) (NN drama) (NN film))"
             " (VP (VBN written) (CC and) (VBN directed) (PP (IN by) (NP (NNP Radhakrishna) (NNP Jagarlamudi))))))"
             " (. .)))"),
        ],
        expect=("NOUNM", "drama"),
    ),
    dict(
        id="ex-adjm", claim="Christa McAuliffe taught social studies.", label="SUPPORTS",
        evidence=[
            ("Christa McAuliffe", "She took a teaching position as a social studies teacher at Concord High School.",
             "(ROOT (S (NP (PRP She)) (VP (VBD took) (NP (DT a) (NN teaching) (NN position))"
             " (PP (IN as) (NP (NP (DT a) (JJ social) (NNS studies) (NN teacher))"
             " (PP (IN at) (NP (NNP Concord) (NNP High) (NNP School)))))) (. .)))"),
        ],
        expect=("ADJM", "social"),
    ),
    dict(
        id="ex-advm", claim="Richard Rutowski heavily revised the screenplay for Natural Born Killers.",
        label="SUPPORTS",
        evidence=[
            ("Natural Born Killers",
             "The film is based on an original screenplay that was heavily revised by writer David Veloz, "
             "associate producer Richard Rutowski and director Oliver Stone.",
             "(ROOT (S (NP (DT The) (NN film)) (VP (VBZ is) (VP (VBN based) (PP (IN on) (NP (NP (DT an) (JJ original)"
             " (NN screenplay)) (SBAR (WHNP (WDT that)) (S (VP (VBD was) (ADVP (RB heavily)) (VP (VBN revised)"
             " (PP (IN by) (NP (NP (NN writer) (NNP David) (NNP Veloz)) (, ,) (NP (JJ associate) (NN producer)"
             " (NNP Richard) (NNP Rutowski)) (CC and) (NP (NN director) (NNP Oliver) (NNP Stone))))))))))))"
             " (. .)))"),
        ],
        expect=("ADVM", "heavily"),
    ),
    dict(
        id="ex-numm", claim="Being sentenced to federal prison is something that happened to Efraim Diveroli.",
        label="SUPPORTS",
        evidence=[
            ("Efraim Diveroli", "Diveroli was sentenced to four years in federal prison.",
             "(ROOT (S (NP (NNP Diveroli)) (VP (VBD was) (VP (VBN sentenced) (PP (TO to) (NP (NP (CD four)"
             " (NNS years)) (PP (IN in) (NP (JJ federal) (NN prison))))))) (. .)))"),
        ],
        expect=("NUMM", "four"),
    ),
    dict(
        id="ex-datem", claim="Colombiana was released 1st October 2001.", label="REFUTES",
        evidence=[
            ("Colombiana", "Colombiana is a French action film from 1st October 2011.",
             "(ROOT (S (NP (NNP Colombiana)) (VP (VBZ is) (NP (NP (DT a) (JJ French) (NN action) (NN film))"
             " (PP (IN from) (NP (JJ 1st) (NNP October) (CD 2011))))) (. .)))"),
        ],
        expect=("DATEM", "1st October"),
    ),
    dict(
        id="ex-sbar", claim="North Vietnam existed from 1945 to 1978.", label="REFUTES",
        evidence=[
            ("North Vietnam", "North Vietnam, was a state in Southeast Asia which existed from 1945 to 1976.",
             "(ROOT (S (NP (NNP North) (NNP Vietnam)) (, ,) (VP (VBD was) (NP (NP (DT a) (NN state))"
             " (PP (IN in) (NP (NNP Southeast) (NNP Asia))) (SBAR (WHNP (WDT which)) (S (VP (VBD existed)"
             " (PP (IN from) (NP (CD 1945))) (PP (TO to) (NP (CD 1976)))))))) (. .)))"),
        ],
        expect=("SBAR", "which existed from 1945 to 1976"),
    ),
]


def examples():
    instances, parses, expected = [], [], []
    for row in EXAMPLES:
        ev = []
        for k, (title, text, tree) in enumerate(row["evidence"]):
            toks, tags = leaves(tree)
            assert "".join(toks) == text.replace(" ", ""), (row["id"], toks)
            assert tree.count("(") == tree.count(")"), row["id"]
            ev.append({"title": title, "text": text, "sent_index": k})
            parses.append({"id": row["id"], "sent_index": k, "surface": text, "tree": tree, "pos": tags})
        instances.append({"id": row["id"], "dataset": "fever", "claim": row["claim"], "evidence": ev,
                          "label": row["label"]})
        expected.append({"id": row["id"], "type": row["expect"][0], "removed": row["expect"][1]})
    dump("examples_instances.jsonl", instances)
    dump("examples_parses.jsonl", parses)
    dump("examples_expected.jsonl", expected)


# ---------------------------------------------------------------------------
# Agreement fixture. Cells per split: rows EI Agree, NEI Agree, Disagree;
# columns EI_I, EI_R, NEI.

AGREEMENT = {
    "fever_sent": [[61, 20, 119], [13, 9, 178], [39, 24, 137]],
    "fever_const": [[146, 3, 51], [0, 0, 200], [43, 1, 156]],
    "hover_sent": [[32, 12, 156], [4, 1, 195], [7, 1, 192]],
    "hover_const": [[139, 6, 55], [1, 0, 199], [48, 1, 151]],
    "vitaminc_const": [[146, 5, 49], [0, 0, 200], [13, 0, 187]],
}
COLUMNS = ["EI_IRRELEVANT", "EI_REPEATED", "NEI"]
CONST_TYPES = ["PP", "NOUNM", "ADJM", "ADVM", "NUMM", "DATEM", "SBAR"]
MODELS = ["model_a", "model_b", "model_c"]


def probs_for(label_index, m, rng, margin=0.5):
    # A distribution whose argmax is label_index, rounded so it sums to 1.
    rest = [rng.random() for _ in range(m - 1)]
    top = margin + (1 - margin) * rng.random()
    scale = (1 - top) / sum(rest)
    vals = [round(r * scale, 6) for r in rest]
    top = round(1 - sum(vals), 6)
    out = vals[:label_index] + [top] + vals[label_index:]
    assert max(out) == out[label_index] and out.count(top) == 1
    return out


def names(m):
    return ["SUPPORTS", "REFUTES", "NEI"] if m == 3 else ["SUPPORTING", "NOT_SUPPORTING"]


def prediction(inst_id, model, label_index, m, rng):
    return {"instance_id": inst_id, "model_id": model, "probs": probs_for(label_index, m, rng),
            "predicted": names(m)[label_index]}


def row_votes(row, m, rng):
    nei = m - 1
    if row == 0:
        return [rng.randrange(nei) for _ in range(3)]
    if row == 1:
        return [nei] * 3
    n_nei = rng.choice([1, 2])
    votes = [nei] * n_nei + [rng.randrange(nei) for _ in range(3 - n_nei)]
    rng.shuffle(votes)
    return votes


def agreement():
    rng = random.Random(2)
    preds = []
    for split, cells in AGREEMENT.items():
        m = 2 if split.startswith("hover") else 3
        sent = split.endswith("sent")
        diags = []
        records = []
        for r, row in enumerate(cells):
            for c, count in enumerate(row):
                records += [(r, c)] * count
        rng.shuffle(records)
        for i, (r, c) in enumerate(records):
            base = f"{split}-{i // 2}"
            label = names(m)[m - 1] if c == 2 else names(m)[rng.randrange(m - 1)]
            diags.append({
                "base_id": base,
                "claim": f"Claim {i} of {split}.",
                "evidence_reduced": f"[Doc {i}] Reduced evidence {i}.",
                "label_new": label,
                "omission_type": "SENT" if sent else CONST_TYPES[i % len(CONST_TYPES)],
                "removed_span": f"span {i}",
                "annotation": COLUMNS[c],
            })
            ident = base if i % 2 == 0 else base + "#1"
            for model, v in zip(MODELS, row_votes(r, m, rng)):
                preds.append(prediction(ident, model, v, m, rng))
        dump(f"agreement/{split}.jsonl", diags)
    dump("agreement/predictions.jsonl", preds)


# ---------------------------------------------------------------------------
# Per-type fixture: for each type, (human-NEI total, of which the models
# detect NEI) and (human-EI total, of which the models predict non-NEI).

BY_TYPE = {
    "SENT": ((100, 52), (40, 30)),
    "PP": ((100, 37), (40, 33)),
    "NOUNM": ((100, 30), (40, 35)),
    "ADJM": ((100, 27), (40, 36)),
    "ADVM": ((100, 21), (40, 38)),
    "NUMM": ((100, 45), (40, 32)),
    "DATEM": ((100, 63), (40, 25)),
    "SBAR": ((100, 41), (40, 31)),
}


def ensemble_votes(correct, human_nei, rng):
    # Correct instances get three correct predictions; wrong ones a wrong
    # majority. "All three correct" and the majority vote then agree.
    if correct:
        votes = [2, 2, 2] if human_nei else [rng.randrange(2) for _ in range(3)]
    elif human_nei:
        votes = rng.choice([[0, 0, 2], [1, 1, 2], [0, 0, 0], [0, 1, 1], [1, 1, 1]])
    else:
        votes = rng.choice([[2, 2, 0], [2, 2, 1], [2, 2, 2]])
    rng.shuffle(votes)
    return votes


def by_type():
    rng = random.Random(7)
    diags, preds = [], []
    i = 0
    for t, ((n_nei, nei_ok), (n_ei, ei_ok)) in BY_TYPE.items():
        cases = [("NEI", True)] * nei_ok + [("NEI", False)] * (n_nei - nei_ok)
        cases += [("EI_IRRELEVANT", True)] * ei_ok + [("EI_IRRELEVANT", False)] * (n_ei - ei_ok)
        rng.shuffle(cases)
        for annotation, correct in cases:
            base = f"bt-{i}"
            diags.append({
                "base_id": base,
                "claim": f"Claim {i}.",
                "evidence_reduced": f"[Doc {i}] Reduced evidence {i}.",
                "label_new": "NEI" if annotation == "NEI" else "SUPPORTS",
                "omission_type": t,
                "removed_span": f"span {i}",
                "annotation": annotation,
            })
            for model, v in zip(MODELS, ensemble_votes(correct, annotation == "NEI", rng)):
                preds.append(prediction(base, model, v, 3, rng))
            i += 1
    dump("by_type/diagnostics.jsonl", diags)
    dump("by_type/predictions.jsonl", preds)


# ---------------------------------------------------------------------------

def embeddings():
    rng = random.Random(11)
    recs = []
    for g in range(3):
        gid = f"group-{g}"
        roles = ["ANCHOR", "POSITIVE"] + ["NEGATIVE"] * (g + 1)
        for role in roles:
            n = rng.randint(2, 5)
            vecs = [[round(rng.gauss(0, 1), 6) for _ in range(8)] for _ in range(n)]
            recs.append({"instance_id": gid, "role": role, "vectors": vecs})
    dump("embeddings.jsonl", recs)


if __name__ == "__main__":
    examples()
    agreement()
    by_type()
    embeddings()
