#!/usr/bin/env python3
"""Regenerates the small corpora under tests/fixtures.

Tags come from a hand lexicon; heads follow a few attachment rules
(determiners and adjectives to the next noun, prepositions to the next
noun, everything else to the main verb). Embeddings are hashed
bag-of-words vectors, so every file is deterministic.
"""
import hashlib
import json
import re
import struct
import sys
from pathlib import Path

LEXICON = {
    "the": "DET", "a": "DET", "an": "DET", "this": "DET", "every": "DET", "her": "PRON",
    "his": "PRON", "she": "PRON", "he": "PRON", "it": "PRON", "they": "PRON", "we": "PRON",
    "i": "PRON", "you": "PRON", "is": "AUX", "was": "AUX", "were": "AUX", "will": "AUX",
    "can": "AUX", "and": "CCONJ", "but": "CCONJ", "or": "CCONJ", "in": "ADP", "on": "ADP",
    "at": "ADP", "with": "ADP", "under": "ADP", "across": "ADP", "from": "ADP", "to": "ADP",
    "of": "ADP", "into": "ADP", "very": "ADV", "quietly": "ADV", "slowly": "ADV", "never": "ADV",
    "always": "ADV", "right": "ADV", "along": "ADV", "really": "ADV", "not": "PART",
    "old": "ADJ", "small": "ADJ", "bright": "ADJ", "cold": "ADJ", "green": "ADJ", "tired": "ADJ",
    "happy": "ADJ", "quiet": "ADJ", "long": "ADJ", "new": "ADJ", "good": "ADJ", "important": "ADJ",
    "walked": "VERB", "ran": "VERB", "found": "VERB", "saw": "VERB", "opened": "VERB",
    "said": "VERB", "carried": "VERB", "waited": "VERB", "sang": "VERB", "left": "VERB",
    "built": "VERB", "helps": "VERB", "makes": "VERB", "shows": "VERB", "explains": "VERB",
    "provides": "VERB", "describe": "VERB", "write": "VERB", "tell": "VERB", "learn": "VERB",
    "two": "NUM", "three": "NUM", "oh": "INTJ", "mara": "PROPN", "tom": "PROPN", "lisbon": "PROPN",
}
NOUN_DEFAULT = "NOUN"


def tag(token):
    if re.fullmatch(r"[^\w\s]", token):
        return "PUNCT"
    return LEXICON.get(token.lower(), NOUN_DEFAULT)


def parse(sentence):
    forms = re.findall(r"\w+|[^\w\s]", sentence)
    tags = [tag(f) for f in forms]
    verbs = [i for i, t in enumerate(tags) if t == "VERB"]
    root = verbs[0] if verbs else next(i for i, t in enumerate(tags) if t != "PUNCT")
    heads, rels = [], []
    for i, t in enumerate(tags):
        if i == root:
            heads.append(0)
            rels.append("root")
            continue
        nxt = next((j for j in range(i + 1, len(tags)) if tags[j] in ("NOUN", "PROPN")), None)
        if t in ("DET", "ADJ", "ADP", "NUM") and nxt is not None:
            heads.append(nxt + 1)
            rels.append({"DET": "det", "ADJ": "amod", "ADP": "case", "NUM": "nummod"}[t])
        else:
            heads.append(root + 1)
            rels.append("punct" if t == "PUNCT" else "dep")
    return forms, tags, heads, rels


def split(text):
    return [s.strip() for s in re.split(r"(?<=[.!?])\s+(?=[A-Z])", text) if s.strip()]


def embed(sentence, dims=24):
    v = [0.0] * dims
    for w in re.findall(r"\w+", sentence.lower()):
        h = hashlib.sha256(w.encode()).digest()
        for k in range(dims):
            v[k] += (h[k % len(h)] - 127.5) / 127.5
    return v


CORPORA = {
    "human": [
        "The old man walked slowly across the bridge. He never said a word.",
        "Mara found a small green box under the stairs. She opened it quietly.",
        "Oh, the rain was cold! We waited in the long hall with two tired dogs.",
        "Tom ran right along with the crowd. The bright lights of Lisbon saw him go.",
        "They built a new house from stone and wood. It was very quiet.",
        "I really sang to the sea at night. The waves carried every note away.",
    ],
    "model": [
        "The man walked to the store. He found a good book.",
        "The woman opened the door. She saw a small dog.",
        "The students learn the lesson. The teacher explains the idea.",
        "The city is important. It provides a good life.",
        "The story shows a happy family. The family makes a new home.",
        "The dog ran to the park. The dog was happy.",
    ],
    "input": [
        "Write a story about an old man on a bridge.",
        "Describe a small box in a house.",
        "Tell a story about rain and dogs.",
        "Write a story about a city at night.",
        "Describe a new house.",
        "Write a poem about the sea.",
    ],
}


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for cid, docs in CORPORA.items():
        with open(out / f"{cid}.jsonl", "w") as f:
            for i, text in enumerate(docs):
                f.write(json.dumps({"id": f"{cid}-{i}", "text": text}) + "\n")
        ids, rows = [], []
        with open(out / f"{cid}.conllu", "w") as f:
            for i, text in enumerate(docs):
                for k, sent in enumerate(split(text)):
                    sid = f"{cid}-{i}-{k}"
                    forms, tags, heads, rels = parse(sent)
                    f.write(f"# sent_id = {sid}\n")
                    for j, (fo, up, hd, rl) in enumerate(zip(forms, tags, heads, rels)):
                        f.write(f"{j + 1}\t{fo}\t_\t{up}\t_\t_\t{hd}\t{rl}\t_\t_\n")
                    f.write("\n")
                    ids.append(sid)
                    rows.append(embed(sent))
        dims = len(rows[0])
        with open(out / f"{cid}.dvem", "wb") as f:
            f.write(b"DVEM" + struct.pack("<III", 1, len(rows), dims))
            for r in rows:
                f.write(struct.pack(f"<{dims}f", *r))
        with open(out / f"{cid}.ids.jsonl", "w") as f:
            for r, sid in enumerate(ids):
                f.write(json.dumps({"id": sid, "row": r}, sort_keys=True) + "\n")
        entry = {"id": cid, "role": cid, "task": "story", "corpus": f"{cid}.jsonl",
                 "conllu": f"{cid}.conllu", "embeddings": f"{cid}.dvem"}
        if cid != "input":
            quality = {"fluency": 4.5 if cid == "human" else 4.1,
                       "coherence": 4.2 if cid == "human" else 4.4}
            (out / f"{cid}.quality.json").write_text(json.dumps(quality, indent=2) + "\n")
            entry["quality"] = f"{cid}.quality.json"
        entries.append(entry)
    manifest = {"seed": 42, "entries": entries}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures")
