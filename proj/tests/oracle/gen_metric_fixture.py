#!/usr/bin/env python3
# Copyright 2026 The bitext-forge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.  See the License for the specific language governing
# permissions and limitations under the License.

"""Generates tests/data/metric_pairs.tsv.

100 deterministic segment pairs with chrF and BLEU scores frozen from
the reference scorers in refscore.py.  The pairs deliberately mix Latin
text with Slavic diacritics, Cyrillic, digits, punctuation, HTML
entities, NBSP / ideographic spaces und digit-dash sequences so the
whole tokenizer surface is exercised.

Run from the repository root:  python3 tests/oracle/gen_metric_fixture.py
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import refscore

WORDS = [
    'vlak', 'město', 'řeka', 'čtvrtek', 'železnice', 'přístav', 'sůl',
    'miasto', 'rzeka', 'czwartek', 'żelazo', 'łódź', 'święto', 'źdźbło',
    'vlk', 'štvrtok', 'železo', 'ľad', 'kôň', 'môže', 'reka', 'četrtek',
    'železo', 'ladja', 'mesto', 'train', 'river', 'thursday', 'harbour',
    'salt', 'bridge', 'поезд', 'город', 'река', 'четверг', 'мост',
    'соль', 'die', 'der', 'und', 'не', 'в', 'na', 'pri', 'zo', 'do',
    '42', '3.14', '1905', '7', '100,000', '2-3', '10-krát', 'U-235',
    'AB-12', '0.5',
]

PUNCT = ['.', ',', '!', '?', ':', ';', '(', ')', '"', "'", '-', '—',
         '„', '“', '«', '»', '&amp;', '&quot;', '&lt;', '&gt;', '/']

SPACES = [' ', ' ', ' ', ' ', ' ', ' ', ' ', ' ', ' ', '　']


def make_segment(rng, n_words):
    parts = []
    for _ in range(n_words):
        parts.append(rng.choice(WORDS))
        if rng.random() < 0.25:
            parts.append(rng.choice(PUNCT))
    out = []
    for i, p in enumerate(parts):
        if i:
            out.append(rng.choice(SPACES))
        out.append(p)
    return ''.join(out)


def perturb(rng, text):
    """Word-level edits so scores spread across the range."""
    words = text.split()
    if not words:
        return text
    edited = []
    for w in words:
        r = rng.random()
        if r < 0.15:
            continue                      # drop
        if r < 0.30:
            edited.append(rng.choice(WORDS))   # replace
            continue
        edited.append(w)
        if r > 0.9:
            edited.append(rng.choice(WORDS))   # insert
    if not edited:
        edited = [rng.choice(WORDS)]
    return ' '.join(edited)


def main():
    rng = random.Random(20260822)
    pairs = []

    # Edge shapes first.
    pairs.append(('', 'neprázdná reference .'))          # empty hypothesis
    pairs.append(('kôň železo most', 'kôň železo most'))  # identical, short
    pairs.append(('a b c d e f g h', 'a b c d e f g h'))  # identical, 8 tokens
    pairs.append(('поезд — город', 'harbour &amp; bridge 2-3'))  # disjoint
    pairs.append(('<skipped> vlak 3.14 , most', 'vlak 3.14 , most'))

    while len(pairs) < 100:
        n = rng.randint(1, 30)
        hyp = make_segment(rng, n)
        if rng.random() < 0.7:
            ref = perturb(rng, hyp)
        else:
            ref = make_segment(rng, max(1, n + rng.randint(-3, 3)))
        pairs.append((hyp, ref))

    out = Path(__file__).parent.parent / 'data' / 'metric_pairs.tsv'
    with out.open('w', encoding='utf-8') as fh:
        for hyp, ref in pairs:
            assert '\t' not in hyp + ref and '\n' not in hyp + ref
            c = refscore.chrf(hyp, ref)
            b = refscore.bleu(hyp, [ref])
            fh.write(f'{hyp}\t{ref}\t{c:.8f}\t{b:.8f}\n')
    print(f'wrote {out} ({len(pairs)} pairs)')


if __name__ == '__main__':
    main()
