#!/usr/bin/env python3
"""Regenerates the synthetic corpora under data/.

Two corpora back the tests and the README walkthrough:

  data/mini/     28 scored articles (PDTB-style manifest). Article complexity
                 drives the discourse-relation profile (count rate and the
                 easy/hard relation mix), so the coherence features f1..f4
                 carry the label signal; sentences are drawn iid from a
                 shared template pool, so every other feature is noise.
  data/aligned/  12 complex/simple aligned article pairs (SEW-style).

Everything is seeded; rerunning the script rewrites identical files.
"""

import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "data"

NOUNS = ["dog", "cat", "market", "garden", "story", "window", "teacher", "river",
         "bridge", "letter", "farmer", "engine", "valley", "signal", "harbor", "meadow"]
PLURALS = ["dogs", "cats", "traders", "gardens", "stories", "windows", "teachers",
           "rivers", "bridges", "letters", "farmers", "engines"]
VERBS_PAST = ["ran", "saw", "found", "moved", "opened", "closed", "crossed", "wrote",
              "reached", "watched", "followed", "repaired"]
VERBS_PLURAL = ["run", "see", "find", "move", "open", "close", "cross", "write"]
ADJECTIVES = ["old", "small", "quiet", "bright", "narrow", "distant", "steady", "gentle"]
PRONOUNS = ["he", "she", "it", "they"]

EASY_RELATIONS = [("Explicit", "Conjunction", "and"),
                  ("Explicit", "Asynchronous", "then"),
                  ("Explicit", "Contrast", "but")]
HARD_RELATIONS = [("Implicit", "Cause", "-"),
                  ("Implicit", "Restatement", "-"),
                  ("Explicit", "Concession", "although")]


def make_sentence(rng):
    kind = rng.randrange(5)
    n1, n2 = rng.choice(NOUNS), rng.choice(NOUNS)
    v, v2 = rng.choice(VERBS_PAST), rng.choice(VERBS_PAST)
    if kind == 0:
        return (f"(S (NP (DT the) (NN {n1})) (VP (VBD {v}) "
                f"(NP (DT the) (NN {n2}))) (. .))")
    if kind == 1:
        pr = rng.choice(PRONOUNS)
        return (f"(S (NP (PRP {pr})) (VP (VBD {v}) "
                f"(PP (IN near) (NP (DT the) (NN {n1})))) (. .))")
    if kind == 2:
        return (f"(S (NP (DT the) (NN {n1})) (VP (VBD {v}) "
                f"(SBAR (IN because) (S (NP (PRP they)) (VP (VBD {v2}))))) (. .))")
    if kind == 3:
        ns, ns2 = rng.choice(PLURALS), rng.choice(PLURALS)
        vp = rng.choice(VERBS_PLURAL)
        return f"(S (NP (NNS {ns})) (VP (VBP {vp}) (NP (DT the) (NNS {ns2}))) (. .))"
    adj = rng.choice(ADJECTIVES)
    return f"(S (NP (DT the) (JJ {adj}) (NN {n1})) (VP (VBD {v})) (. .))"


def leaf_text(tree_line):
    words = []
    for chunk in tree_line.replace("(", " ( ").replace(")", " ) ").split():
        if chunk in "()":
            continue
        words.append(chunk)
    # leaves are every second token: (TAG word) -> keep the word
    return " ".join(words[1::2])


def make_relations(rng, n_sentences, hardness):
    rate = 0.25 + 0.6 * hardness
    count = max(1, round(n_sentences * rate))
    lines = []
    for _ in range(count):
        pool = HARD_RELATIONS if rng.random() < hardness else EASY_RELATIONS
        realization, sense, marker = rng.choice(pool)
        lines.append(f"{realization}|{sense}|{marker}")
    return lines


def write_article(articles_dir, article_id, rng, n_sentences, hardness):
    trees = [make_sentence(rng) for _ in range(n_sentences)]
    texts = [leaf_text(t) for t in trees]
    relations = make_relations(rng, n_sentences, hardness)
    (articles_dir / f"{article_id}.txt").write_text("\n".join(texts) + "\n")
    (articles_dir / f"{article_id}.trees").write_text("\n".join(trees) + "\n")
    (articles_dir / f"{article_id}.disc").write_text("\n".join(relations) + "\n")


def make_mini(rng):
    corpus = ROOT / "mini"
    articles_dir = corpus / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)

    scores = [3.2, 1.0, 1.7]  # fx_001 pinned; 1.0/1.7 give an exact 0.7 gap
    while len(scores) < 28:
        scores.append(round(rng.uniform(1.0, 5.0), 1))

    rows = []
    for i, score in enumerate(scores, start=1):
        article_id = f"fx_{i:03d}"
        hardness = (score - 1.0) / 4.0
        write_article(articles_dir, article_id, rng, rng.randint(8, 14), hardness)
        rows.append(f"{article_id}\tarticles/{article_id}.txt\t"
                    f"articles/{article_id}.trees\tarticles/{article_id}.disc\t{score}")
    (corpus / "manifest.tsv").write_text("\n".join(rows) + "\n")

    same = sum(1 for i in range(28) for j in range(i + 1, 28)
               if abs(scores[i] - scores[j]) <= 0.7 + 1e-9)
    print(f"mini: 28 articles, {same} same / {378 - same} different at threshold 0.7")


def make_aligned(rng):
    corpus = ROOT / "aligned"
    articles_dir = corpus / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for i in range(1, 13):
        complex_id = f"al_{i:02d}_complex"
        simple_id = f"al_{i:02d}_simple"
        write_article(articles_dir, complex_id, rng, rng.randint(10, 14), 0.85)
        write_article(articles_dir, simple_id, rng, rng.randint(5, 8), 0.1)
        rows.append(f"{complex_id}\tarticles/{complex_id}.txt\t"
                    f"articles/{complex_id}.trees\tarticles/{complex_id}.disc\tcomplex")
        rows.append(f"{simple_id}\tarticles/{simple_id}.txt\t"
                    f"articles/{simple_id}.trees\tarticles/{simple_id}.disc\tsimple")
    (corpus / "manifest.tsv").write_text("\n".join(rows) + "\n")
    print("aligned: 12 complex/simple pairs")


def make_lexicons(rng):
    vocab = sorted(set(NOUNS + PLURALS + VERBS_PAST + VERBS_PLURAL + ADJECTIVES +
                       PRONOUNS + ["the", "near", "because", "and", "but", "then"]))
    synonyms = [f"{w}\t{rng.randint(1, 9)}" for w in vocab]
    frequencies = [f"{w}\t{rng.randint(100, 20000)}" for w in vocab]
    (ROOT / "synonyms.tsv").write_text("\n".join(synonyms) + "\n")
    (ROOT / "frequencies.tsv").write_text("\n".join(frequencies) + "\n")
    print(f"lexicons: {len(vocab)} words")


def main():
    rng = random.Random(20240917)
    ROOT.mkdir(exist_ok=True)
    make_lexicons(rng)
    make_mini(rng)
    make_aligned(rng)


if __name__ == "__main__":
    main()
