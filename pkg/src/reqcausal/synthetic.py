"""Templated requirement-sentence generator for desk-scale training runs.

Causal sentences wrap a cue phrase around random subject/verb/object
fillers; non-causal sentences are simple declaratives over the same fillers,
so the only systematic difference between the classes is the cue.
"""

from __future__ import annotations

import random

from .baseline import DEFAULT_CUES
from .errors import InvalidInputError
from .evaluation import LabeledDataset, LabeledExample

SUBJECTS = (
    "user", "system", "app", "server", "administrator", "device",
    "operator", "service", "module", "sensor",
)
VERBS = (
    "display", "send", "update", "store", "delete", "log",
    "validate", "reject", "open", "close",
)
OBJECTS = (
    "message", "report", "file", "password", "notification",
    "record", "token", "dialog", "alert", "backup",
)

_CAUSAL_TEMPLATES = (
    "{cue} the {subj} {verb}s the {obj}, the {subj2} shall {verb2} the {obj2}.",
    "{cue} the {subj} {verb}s the {obj} the {subj2} must {verb2} the {obj2}.",
    "the {subj} shall {verb} the {obj} {cue} the {subj2} {verb2}s the {obj2}.",
)
_NON_CAUSAL_TEMPLATES = (
    "the {subj} shall {verb} the {obj}.",
    "the {subj} {verb}s the {obj}.",
    "the {subj} can {verb} the {obj} and the {obj2}.",
    "there is a {obj} for the {subj}.",
)


def generate_templated_dataset(size: int, *, seed: int = 0,
                               cues: tuple[str, ...] = DEFAULT_CUES) -> LabeledDataset:
    """Balanced random dataset of ``size`` sentences, labels alternating."""
    if size < 2:
        raise InvalidInputError("need at least 2 examples for both classes")
    rng = random.Random(seed)
    examples = []
    for i in range(size):
        subj, subj2 = rng.choice(SUBJECTS), rng.choice(SUBJECTS)
        verb, verb2 = rng.choice(VERBS), rng.choice(VERBS)
        obj, obj2 = rng.choice(OBJECTS), rng.choice(OBJECTS)
        if i % 2 == 0:
            text = rng.choice(_CAUSAL_TEMPLATES).format(
                cue=rng.choice(cues), subj=subj, subj2=subj2,
                verb=verb, verb2=verb2, obj=obj, obj2=obj2,
            )
            label = 1
        else:
            text = rng.choice(_NON_CAUSAL_TEMPLATES).format(
                subj=subj, verb=verb, obj=obj, obj2=obj2,
            )
            label = 0
        examples.append(LabeledExample(text=text, label=label))
    return LabeledDataset(examples)


def generate_train_test(n_train: int, n_test: int, *, seed: int = 0):
    """Two independent draws from the same template distribution."""
    train = generate_templated_dataset(n_train, seed=seed)
    test = generate_templated_dataset(n_test, seed=seed + 1)
    return train, test
