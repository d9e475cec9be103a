"""The six basic emotion classes and their one-hot domain codes.

The integer encoding is fixed and load-bearing: manifests, class logits,
confusion-matrix axes, and checkpoint metadata all use it.
"""

from enum import IntEnum

import numpy as np


class EmotionLabel(IntEnum):
    ANGER = 0
    DISGUST = 1
    FEAR = 2
    HAPPINESS = 3
    SADNESS = 4
    SURPRISED = 5


N_CLASSES = len(EmotionLabel)
CLASS_NAMES = tuple(label.name.lower() for label in EmotionLabel)

# Accepted manifest spellings. Anything else (e.g. "neutral") is rejected.
_ALIASES = {
    "anger": EmotionLabel.ANGER,
    "angry": EmotionLabel.ANGER,
    "disgust": EmotionLabel.DISGUST,
    "disgusted": EmotionLabel.DISGUST,
    "fear": EmotionLabel.FEAR,
    "afraid": EmotionLabel.FEAR,
    "happiness": EmotionLabel.HAPPINESS,
    "happy": EmotionLabel.HAPPINESS,
    "sadness": EmotionLabel.SADNESS,
    "sad": EmotionLabel.SADNESS,
    "surprised": EmotionLabel.SURPRISED,
    "surprise": EmotionLabel.SURPRISED,
}


def parse_emotion(name: str) -> EmotionLabel:
    """Parse a manifest emotion string; only the six basic classes are accepted."""
    key = str(name).strip().lower()
    if key not in _ALIASES:
        raise ValueError(
            f"unknown emotion {name!r}; accepted classes: {', '.join(CLASS_NAMES)}"
        )
    return _ALIASES[key]


def coerce_label(value) -> EmotionLabel:
    """Accept an EmotionLabel, an int code, or a name string."""
    if isinstance(value, EmotionLabel):
        return value
    if isinstance(value, str):
        return parse_emotion(value)
    code = int(value)
    if not 0 <= code < N_CLASSES:
        raise ValueError(f"emotion code {code} outside 0..{N_CLASSES - 1}")
    return EmotionLabel(code)


def one_hot(label) -> np.ndarray:
    """Length-6 one-hot domain code for an emotion."""
    code = np.zeros(N_CLASSES, dtype=np.float32)
    code[coerce_label(label)] = 1.0
    return code


def check_one_hot(code) -> EmotionLabel:
    """Validate a one-hot domain code and return the emotion it encodes."""
    arr = np.asarray(code, dtype=np.float32)
    if arr.shape != (N_CLASSES,):
        raise ValueError(f"domain code must have shape ({N_CLASSES},), got {arr.shape}")
    ones = np.flatnonzero(arr == 1.0)
    if len(ones) != 1 or not np.all((arr == 0.0) | (arr == 1.0)):
        raise ValueError("domain code must be one-hot: exactly one entry equal to 1")
    return EmotionLabel(int(ones[0]))
