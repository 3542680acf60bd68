"""Walk through lexicon lookup and the nine sentence features.

Uses the small bundled fixtures, so it runs in well under a second:

    python3 demos/01_lexicon_and_features.py
"""

import numpy as np

from swncurriculum import features, fixtures
from swncurriculum.corpus import load_sst_dir
from swncurriculum.lexicon import lookup, parse_swn_file

lex = parse_swn_file(fixtures.swn_path())
print(f"lexicon: {len(lex)} lemmas from {lex.record_count} synset records")

# A lemma's score is the average over every synset it appears in.
for word in ("good", "bad", "movie", "zzz-not-listed"):
    score = lookup(lex, word)
    print(f"  {word:16s}", "missing" if score is None else
          f"P={score.positivity:.3f} N={score.negativity:.3f} O={score.objectivity:.3f}")

train = load_sst_dir(fixtures.sst_dir()).train
ex = train[0]
print("\nsentence:", " ".join(ex.tokens), f"(label {ex.label})")
fv = features.extract(lex, ex)
for name, value in zip(features.FEATURE_NAMES, fv.as_array()):
    print(f"  {name:5s} {value:8.4f}")

# Normalisation statistics come from the training split only.
raw = features.feature_matrix(lex, train)
spec = features.fit_normalizer(raw)
z = features.normalize(spec, raw)
print("\nnormalised train features: column means", np.round(z.mean(axis=0), 12))
print("largest magnitude per column", np.round(np.abs(z).max(axis=0), 3))
