"""Porter suffix-stripping stemmer (the 1980 algorithm, no later revisions).

Words are reduced in five steps, each a list of (suffix, replacement,
condition) rules. Within a step the longest matching suffix decides the
rule; if that rule's condition fails, the step ends without trying
shorter suffixes. Conditions are expressed over the "measure" m of the
stem, the count of vowel-consonant sequences in its [C](VC)^m[V] form.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y after a consonant acts as a vowel ("syzygy"), else consonant
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # consonant-vowel-consonant, final consonant not w, x or y
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _rule_table(word: str, rules) -> str:
    """Apply the longest-suffix-match rule of a step; no fallback on a
    failed condition."""
    best = None
    for suffix, replacement, cond in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement, cond)
    if best is None:
        return word
    suffix, replacement, cond = best
    stem = word[: len(word) - len(suffix)]
    if cond is None or cond(stem):
        return stem + replacement
    return word


_M_GT_0 = lambda stem: _measure(stem) > 0
_M_GT_1 = lambda stem: _measure(stem) > 1

_STEP_1A = (
    ("sses", "ss", None),
    ("ies", "i", None),
    ("ss", "ss", None),
    ("s", "", None),
)

_STEP_2 = tuple(
    (suf, rep, _M_GT_0)
    for suf, rep in (
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    )
)

_STEP_3 = tuple(
    (suf, rep, _M_GT_0)
    for suf, rep in (
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    )
)

_STEP_4 = tuple(
    (suf, "", _M_GT_1)
    for suf in (
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    )
) + (("ion", "", lambda stem: _M_GT_1(stem) and stem[-1:] in ("s", "t")),)


def _step_1b(word: str) -> str:
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    cleanup = False
    if word.endswith("ed"):
        stem = word[:-2]
        if _contains_vowel(stem):
            word, cleanup = stem, True
    elif word.endswith("ing"):
        stem = word[:-3]
        if _contains_vowel(stem):
            word, cleanup = stem, True
    if not cleanup:
        return word
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if _ends_double_consonant(word) and word[-1] not in "lsz":
        return word[:-1]
    if _measure(word) == 1 and _ends_cvc(word):
        return word + "e"
    return word


def _step_1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step_5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step_5b(word: str) -> str:
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        return word[:-1]
    return word


def stem(token: str) -> str:
    """Stem one lower-case token. Deterministic and purely functional."""
    word = token
    word = _rule_table(word, _STEP_1A)
    word = _step_1b(word)
    word = _step_1c(word)
    word = _rule_table(word, _STEP_2)
    word = _rule_table(word, _STEP_3)
    word = _rule_table(word, _STEP_4)
    word = _step_5a(word)
    word = _step_5b(word)
    return word
