"""Spanish Snowball stemmer.

Self-contained implementation of the Spanish stemming algorithm of the
Snowball family, bundled so that preprocessing has no external runtime
dependency and produces the same stems everywhere.

The algorithm works on lowercase words.  Region boundaries (R1, R2, RV)
are computed once on the input word; suffix removal only ever shortens
the word, so the boundaries stay valid throughout.
"""

from __future__ import annotations

_VOWELS = frozenset("aeiouáéíóúü")

_DEACCENT = str.maketrans("áéíóú", "aeiou")

# Attached-pronoun suffixes (step 0), longest first.
_PRONOUNS = (
    "selas", "selos", "sela", "selo",
    "las", "les", "los", "nos",
    "me", "se", "la", "le", "lo",
)

# Accented gerund/infinitive endings lose their accent when the pronoun
# is removed.
_PRE_ACCENTED = (("iéndo", "iendo"), ("ándo", "ando"),
                 ("ár", "ar"), ("ér", "er"), ("ír", "ir"))
_PRE_PLAIN = ("iendo", "ando", "ar", "er", "ir")

# Step 1: standard suffixes.  Each entry maps suffix -> rule tag.
_STEP1_RULES = {}
for _s in ("amientos", "imientos", "amiento", "imiento", "anzas", "ismos",
           "ables", "ibles", "istas", "anza", "icos", "icas", "ismo", "able",
           "ible", "ista", "osos", "osas", "ico", "ica", "oso", "osa"):
    _STEP1_RULES[_s] = "r2-delete"
for _s in ("adoras", "adores", "aciones", "adora", "ación", "antes",
           "ancias", "ador", "ante", "ancia"):
    _STEP1_RULES[_s] = "r2-delete-ic"
for _s in ("logías", "logía"):
    _STEP1_RULES[_s] = "log"
for _s in ("uciones", "ución"):
    _STEP1_RULES[_s] = "u"
for _s in ("encias", "encia"):
    _STEP1_RULES[_s] = "ente"
_STEP1_RULES["amente"] = "amente"
_STEP1_RULES["mente"] = "mente"
for _s in ("idades", "idad"):
    _STEP1_RULES[_s] = "idad"
for _s in ("ivas", "ivos", "iva", "ivo"):
    _STEP1_RULES[_s] = "iva"
_STEP1_SUFFIXES = sorted(_STEP1_RULES, key=len, reverse=True)

_STEP2A_SUFFIXES = sorted(
    ("ya", "ye", "yan", "yen", "yeron", "yendo", "yo", "yó",
     "yas", "yes", "yais", "yamos"), key=len, reverse=True)

# Step 2b: verb suffixes.  The first group additionally strips a
# trailing 'u' after 'g' ("lleguen" -> "lleg").
_STEP2B_GU = ("en", "es", "éis", "emos")
_STEP2B_PLAIN = (
    "arían", "arías", "arán", "arás", "aríais", "aría", "aréis", "aríamos",
    "aremos", "ará", "aré",
    "erían", "erías", "erán", "erás", "eríais", "ería", "eréis", "eríamos",
    "eremos", "erá", "eré",
    "irían", "irías", "irán", "irás", "iríais", "iría", "iréis", "iríamos",
    "iremos", "irá", "iré",
    "aba", "ada", "ida", "ía", "ara", "iera", "ad", "ed", "id",
    "ase", "iese", "aste", "iste", "an", "aban", "ían", "aran", "ieran",
    "asen", "iesen", "aron", "ieron", "ado", "ido", "ando", "iendo",
    "ió", "ar", "er", "ir",
    "as", "abas", "adas", "idas", "ías", "aras", "ieras", "ases", "ieses",
    "ís", "áis", "abais", "íais", "arais", "ierais", "aseis", "ieseis",
    "asteis", "isteis", "ados", "idos", "amos", "ábamos", "íamos", "imos",
    "áramos", "iéramos", "iésemos", "ásemos",
)
_STEP2B_SUFFIXES = sorted(_STEP2B_GU + _STEP2B_PLAIN, key=len, reverse=True)

_STEP3_PLAIN = ("os", "a", "o", "á", "í", "ó")
_STEP3_E = ("e", "é")
_STEP3_SUFFIXES = sorted(_STEP3_PLAIN + _STEP3_E, key=len, reverse=True)


def _regions(word: str) -> tuple[int, int, int]:
    """Return the start indices (r1, r2, rv) of the standard regions."""
    n = len(word)

    r1 = n
    for i in range(1, n):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            r1 = i + 1
            break
    r2 = n
    for i in range(r1 + 1, n):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            r2 = i + 1
            break

    rv = n
    if n >= 3:
        if word[1] not in _VOWELS:
            for i in range(2, n):
                if word[i] in _VOWELS:
                    rv = i + 1
                    break
        elif word[0] in _VOWELS and word[1] in _VOWELS:
            for i in range(2, n):
                if word[i] not in _VOWELS:
                    rv = i + 1
                    break
        else:
            rv = 3
    return r1, r2, rv


def _step0(word: str, rv: int) -> str:
    """Remove an attached pronoun after a gerund/infinitive ending."""
    for pron in _PRONOUNS:
        if not word.endswith(pron):
            continue
        base = word[: len(word) - len(pron)]
        for accented, plain in _PRE_ACCENTED:
            if base.endswith(accented) and len(base) - len(accented) >= rv:
                return base[: len(base) - len(accented)] + plain
        for pre in _PRE_PLAIN:
            if base.endswith(pre) and len(base) - len(pre) >= rv:
                return base
        if (base.endswith("yendo") and len(base) - 5 >= rv
                and len(base) > 5 and base[-6] == "u"):
            return base
        return word  # longest pronoun matched, but no valid ending before it
    return word


def _in(word: str, suffix: str, region: int) -> bool:
    return len(word) - len(suffix) >= region


def _try_del(word: str, suffixes, region: int) -> str:
    for s in suffixes:
        if word.endswith(s):
            if _in(word, s, region):
                return word[: len(word) - len(s)]
            return word
    return word


def _step1(word: str, r1: int, r2: int) -> tuple[str, bool]:
    for s in _STEP1_SUFFIXES:
        if not word.endswith(s):
            continue
        rule = _STEP1_RULES[s]
        base = word[: len(word) - len(s)]
        if rule == "r2-delete":
            if _in(word, s, r2):
                return base, True
        elif rule == "r2-delete-ic":
            if _in(word, s, r2):
                return _try_del(base, ("ic",), r2), True
        elif rule == "log":
            if _in(word, s, r2):
                return base + "log", True
        elif rule == "u":
            if _in(word, s, r2):
                return base + "u", True
        elif rule == "ente":
            if _in(word, s, r2):
                return base + "ente", True
        elif rule == "amente":
            if _in(word, s, r1):
                if base.endswith("iv") and _in(base, "iv", r2):
                    base = base[:-2]
                    if base.endswith("at") and _in(base, "at", r2):
                        base = base[:-2]
                else:
                    base = _try_del(base, ("os", "ic", "ad"), r2)
                return base, True
        elif rule == "mente":
            if _in(word, s, r2):
                return _try_del(base, ("ante", "able", "ible"), r2), True
        elif rule == "idad":
            if _in(word, s, r2):
                return _try_del(base, ("abil", "ic", "iv"), r2), True
        elif rule == "iva":
            if _in(word, s, r2):
                return _try_del(base, ("at",), r2), True
        return word, False
    return word, False


def _step2a(word: str, rv: int) -> tuple[str, bool]:
    for s in _STEP2A_SUFFIXES:
        if word.endswith(s):
            if (_in(word, s, rv) and len(word) > len(s)
                    and word[len(word) - len(s) - 1] == "u"):
                return word[: len(word) - len(s)], True
            return word, False
    return word, False


def _step2b(word: str, rv: int) -> str:
    for s in _STEP2B_SUFFIXES:
        if word.endswith(s):
            if not _in(word, s, rv):
                return word
            word = word[: len(word) - len(s)]
            if s in _STEP2B_GU and word.endswith("gu"):
                word = word[:-1]
            return word
    return word


def _step3(word: str, rv: int) -> str:
    for s in _STEP3_SUFFIXES:
        if word.endswith(s):
            if not _in(word, s, rv):
                return word
            word = word[: len(word) - len(s)]
            if s in _STEP3_E and word.endswith("gu") and len(word) - 1 >= rv:
                word = word[:-1]
            return word
    return word


def stem(word: str) -> str:
    """Stem a lowercase Spanish word."""
    if len(word) < 2:
        return word
    r1, r2, rv = _regions(word)
    word = _step0(word, rv)
    word, removed = _step1(word, r1, r2)
    if not removed:
        word, removed = _step2a(word, rv)
        if not removed:
            word = _step2b(word, rv)
    word = _step3(word, rv)
    return word.translate(_DEACCENT)
