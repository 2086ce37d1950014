"""Lovins stemmer.

Classic longest-match ending removal followed by recoding. The stemmer works
in two phases:

1. Ending removal: among all listed endings that match the tail of the word,
   remove the longest one whose context condition holds on the remaining stem
   and whose removal leaves at least two characters. If the longest matching
   ending fails its condition, shorter matching endings are still tried.
2. Recoding: undouble a terminal double consonant (bb dd gg ll mm nn pp rr
   ss tt), then apply at most one tail respelling rule (longest match first).

Both phases run even when the other did nothing, so e.g. "class" and
"classes" both stem to "clas".

Conditions are predicates on the candidate stem (the word minus the ending).
Every condition implies a minimum stem length of 2.
"""

from __future__ import annotations

# Condition predicates, keyed by the code used in the ending table. `s` is
# the candidate stem. Length floors beyond the global minimum of 2 are part
# of the individual conditions.
_CONDITIONS = {
    "A": lambda s: True,
    "B": lambda s: len(s) >= 3,
    "C": lambda s: len(s) >= 4,
    "D": lambda s: len(s) >= 5,
    "E": lambda s: s[-1] != "e",
    "F": lambda s: len(s) >= 3 and s[-1] != "e",
    "G": lambda s: len(s) >= 3 and s[-1] == "f",
    "H": lambda s: s[-1] == "t" or s[-2:] == "ll",
    "I": lambda s: s[-1] not in "oe",
    "J": lambda s: s[-1] not in "ae",
    "K": lambda s: len(s) >= 3
    and (s[-1] in "li" or (s[-1] == "e" and len(s) >= 3 and s[-3] == "u")),
    "L": lambda s: s[-1] not in "ux" and (s[-1] != "s" or s[-2:-1] == "o"),
    "M": lambda s: s[-1] not in "acem",
    # Minimum stem length 3, raised to 4 when the stem ends in s.
    "N": lambda s: len(s) >= 4 if s[-1] == "s" else len(s) >= 3,
    "O": lambda s: s[-1] in "li",
    "P": lambda s: s[-1] != "c",
    "Q": lambda s: len(s) >= 3 and s[-1] not in "ln",
    "R": lambda s: s[-1] in "nr",
    "S": lambda s: s[-2:] == "dr" or (s[-1] == "t" and s[-2:] != "tt"),
    "T": lambda s: s[-1] == "s" or (s[-1] == "t" and s[-2:-1] != "o"),
    "U": lambda s: s[-1] in "lmnr",
    "V": lambda s: s[-1] == "c",
    "W": lambda s: s[-1] not in "su",
    "X": lambda s: s[-1] in "li" or (s[-1] == "e" and len(s) >= 3 and s[-3] == "u"),
    "Y": lambda s: s[-2:] == "in",
    "Z": lambda s: s[-1] != "f",
    "AA": lambda s: s[-1] in "dflt" or s[-2:] in ("ph", "th", "er", "or", "es"),
    "BB": lambda s: len(s) >= 3 and not s.endswith(("met", "ryst")),
    "CC": lambda s: s[-1] == "l",
}

# ending -> condition code, grouped by ending length (longest first).
_ENDINGS = {
    11: {
        "alistically": "B",
        "arizability": "A",
        "izationally": "B",
    },
    10: {
        "antialness": "A",
        "arisations": "A",
        "arizations": "A",
        "entialness": "A",
    },
    9: {
        "allically": "C",
        "antaneous": "A",
        "antiality": "A",
        "arisation": "A",
        "arization": "A",
        "ationally": "B",
        "ativeness": "A",
        "eableness": "E",
        "entations": "A",
        "entiality": "A",
        "entialize": "A",
        "entiation": "A",
        "ionalness": "A",
        "istically": "A",
        "itousness": "A",
        "izability": "A",
        "izational": "A",
    },
    8: {
        "ableness": "A",
        "arizable": "A",
        "entation": "A",
        "entially": "A",
        "eousness": "A",
        "ibleness": "A",
        "icalness": "A",
        "ionalism": "A",
        "ionality": "A",
        "ionalize": "A",
        "iousness": "A",
        "izations": "A",
        "lessness": "A",
    },
    7: {
        "ability": "A",
        "aically": "A",
        "alistic": "B",
        "alities": "A",
        "ariness": "E",
        "aristic": "A",
        "arizing": "A",
        "ateness": "A",
        "atingly": "A",
        "ational": "B",
        "atively": "A",
        "ativism": "A",
        "elihood": "E",
        "encible": "A",
        "entally": "A",
        "entials": "A",
        "entiate": "A",
        "entness": "A",
        "fulness": "A",
        "ibility": "A",
        "icalism": "A",
        "icalist": "A",
        "icality": "A",
        "icalize": "A",
        "ication": "G",
        "icianry": "A",
        "ination": "A",
        "ingness": "A",
        "ionally": "A",
        "isation": "A",
        "ishness": "A",
        "istical": "A",
        "iteness": "A",
        "iveness": "A",
        "ivistic": "A",
        "ivities": "A",
        "ization": "F",
        "izement": "A",
        "oidally": "A",
        "ousness": "A",
    },
    6: {
        "aceous": "A",
        "acious": "B",
        "action": "G",
        "alness": "A",
        "ancial": "A",
        "ancies": "A",
        "ancing": "B",
        "ariser": "A",
        "arized": "A",
        "arizer": "A",
        "atable": "A",
        "ations": "B",
        "atives": "A",
        "eature": "Z",
        "efully": "A",
        "encies": "A",
        "encing": "A",
        "ential": "A",
        "enting": "C",
        "entist": "A",
        "eously": "A",
        "ialist": "A",
        "iality": "A",
        "ialize": "A",
        "ically": "A",
        "icance": "A",
        "icians": "A",
        "icists": "A",
        "ifully": "A",
        "ionals": "A",
        "ionate": "D",
        "ioning": "A",
        "ionist": "A",
        "iously": "A",
        "istics": "A",
        "izable": "E",
        "lessly": "A",
        "nesses": "A",
        "oidism": "A",
    },
    5: {
        "acies": "A",
        "acity": "A",
        "aging": "B",
        "aical": "A",
        "alism": "B",
        "alist": "A",
        "ality": "A",
        "alize": "A",
        "allic": "BB",
        "anced": "B",
        "ances": "B",
        "antic": "C",
        "arial": "A",
        "aries": "A",
        "arily": "A",
        "arity": "B",
        "arize": "A",
        "aroid": "A",
        "ately": "A",
        "ating": "I",
        "ation": "B",
        "ative": "A",
        "ators": "A",
        "atory": "A",
        "ature": "E",
        "early": "Y",
        "ehood": "A",
        "eless": "A",
        "elity": "A",
        "ement": "A",
        "enced": "A",
        "ences": "A",
        "eness": "E",
        "ening": "E",
        "ental": "A",
        "ented": "C",
        "ently": "A",
        "fully": "A",
        "ially": "A",
        "icant": "A",
        "ician": "A",
        "icide": "A",
        "icism": "A",
        "icist": "A",
        "icity": "A",
        "idine": "I",
        "iedly": "A",
        "ihood": "A",
        "inate": "A",
        "iness": "A",
        "ingly": "B",
        "inism": "J",
        "inity": "CC",
        "ional": "A",
        "ioned": "A",
        "ished": "A",
        "istic": "A",
        "ities": "A",
        "itous": "A",
        "ively": "A",
        "ivity": "A",
        "izers": "F",
        "izing": "F",
        "oidal": "A",
        "oides": "A",
        "otide": "A",
        "ously": "A",
    },
    4: {
        "able": "A",
        "ably": "A",
        "ages": "B",
        "ally": "B",
        "ance": "B",
        "ancy": "B",
        "ants": "B",
        "aric": "A",
        "arly": "K",
        "ated": "I",
        "ates": "A",
        "atic": "B",
        "ator": "A",
        "ealy": "Y",
        "edly": "E",
        "eful": "A",
        "eity": "A",
        "ence": "A",
        "ency": "A",
        "ened": "E",
        "enly": "E",
        "eous": "A",
        "hood": "A",
        "ials": "A",
        "ians": "A",
        "ible": "A",
        "ibly": "A",
        "ical": "A",
        "ides": "L",
        "iers": "A",
        "iful": "A",
        "ines": "M",
        "ings": "N",
        "ions": "B",
        "ious": "A",
        "isms": "B",
        "ists": "A",
        "itic": "H",
        "ized": "F",
        "izer": "F",
        "less": "A",
        "lily": "A",
        "ness": "A",
        "ogen": "A",
        "ward": "A",
        "wise": "A",
        "ying": "B",
        "yish": "A",
    },
    3: {
        "acy": "A",
        "age": "B",
        "aic": "A",
        "als": "BB",
        "ant": "B",
        "ars": "O",
        "ary": "F",
        "ata": "A",
        "ate": "A",
        "eal": "Y",
        "ear": "Y",
        "ely": "E",
        "ene": "E",
        "ent": "C",
        "ery": "E",
        "ese": "A",
        "ful": "A",
        "ial": "A",
        "ian": "A",
        "ics": "A",
        "ide": "L",
        "ied": "A",
        "ier": "A",
        "ies": "P",
        "ily": "A",
        "ine": "M",
        "ing": "N",
        "ion": "Q",
        "ish": "C",
        "ism": "B",
        "ist": "A",
        "ite": "AA",
        "ity": "A",
        "ium": "A",
        "ive": "A",
        "ize": "F",
        "oid": "A",
        "one": "R",
        "ous": "A",
    },
    2: {
        "ae": "A",
        "al": "BB",
        "ar": "X",
        "as": "B",
        "ed": "E",
        "en": "F",
        "es": "E",
        "ia": "A",
        "ic": "A",
        "is": "A",
        "ly": "B",
        "on": "S",
        "or": "T",
        "um": "U",
        "us": "V",
        "yl": "R",
        "s'": "A",
        "'s": "A",
    },
    1: {
        "a": "A",
        "e": "A",
        "i": "A",
        "o": "A",
        "s": "W",
        "y": "B",
    },
}

_MAX_ENDING = max(_ENDINGS)

_DOUBLES = ("bb", "dd", "gg", "ll", "mm", "nn", "pp", "rr", "ss", "tt")

# Tail respelling rules: (pattern, replacement, letters that must NOT
# immediately precede the pattern). Checked longest pattern first; at most
# one rule fires.
_RESPELL = [
    ("iev", "ief", ""),
    ("uct", "uc", ""),
    ("umpt", "um", ""),
    ("rpt", "rb", ""),
    ("urs", "ur", ""),
    ("istr", "ister", ""),
    ("metr", "meter", ""),
    ("olv", "olut", ""),
    ("ul", "l", "aio"),
    ("bex", "bic", ""),
    ("dex", "dic", ""),
    ("pex", "pic", ""),
    ("tex", "tic", ""),
    ("ax", "ac", ""),
    ("ex", "ec", ""),
    ("ix", "ic", ""),
    ("lux", "luc", ""),
    ("uad", "uas", ""),
    ("vad", "vas", ""),
    ("cid", "cis", ""),
    ("lid", "lis", ""),
    ("erid", "eris", ""),
    ("pand", "pans", ""),
    ("end", "ens", "s"),
    ("ond", "ons", ""),
    ("lud", "lus", ""),
    ("rud", "rus", ""),
    ("her", "hes", "pt"),
    ("mit", "mis", ""),
    ("ent", "ens", "m"),
    ("ert", "ers", ""),
    ("et", "es", "n"),
    ("yt", "ys", ""),
    ("yz", "ys", ""),
]
_RESPELL.sort(key=lambda rule: -len(rule[0]))


def _remove_ending(word: str) -> str:
    longest = min(_MAX_ENDING, len(word) - 2)
    for n in range(longest, 0, -1):
        ending = word[-n:]
        code = _ENDINGS.get(n, {}).get(ending)
        if code is None:
            continue
        stem = word[:-n]
        if _CONDITIONS[code](stem):
            return stem
    return word


def _recode(stem: str) -> str:
    if stem[-2:] in _DOUBLES:
        stem = stem[:-1]
    for pattern, replacement, excluded in _RESPELL:
        if stem.endswith(pattern):
            prev = stem[: -len(pattern)][-1:]
            if not prev or prev not in excluded:
                stem = stem[: -len(pattern)] + replacement
            break
    return stem


def lovins_stem(token: str) -> str:
    """Stem one lowercase token. Tokens of length < 3 pass through."""
    if len(token) < 3:
        return token
    return _recode(_remove_ending(token))
