import itertools
import re
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import WordSyntaxError, UnsupportedParameterError
from modules.moebius.MoebiusMap import MoebiusMap, gamma
from modules.moebius.ParameterSpace import TraceParams, realize

TOKEN = re.compile(r'\s*([aAbB])(?:\s*\^\s*([+-]?\d+))?\s*')

# Named words accepted wherever a word is expected, in the a-outer convention
NAMED_WORDS = {
    "conjugate": "aba^-1",
    "double": "aba^-1ba",
    "commutator": "aba^-1b^-1a",
    "twelve": "aba^-1bab^-1a^-1b^-1aba^-1",
    "tilde": "ab^-1a^-1baba^-1b^-1a",
}


class GroupWord:
    """
    A freely reduced word in the free group on the letters a and b

    Stored as a tuple of (letter, exponent) syllables with adjacent letters distinct.
    """

    def __init__(self, syllables):
        reduced = _reduce(syllables)
        if not reduced:
            raise WordSyntaxError("Word reduces to the identity")
        self.syllables = tuple(reduced)

    @classmethod
    def parse(cls, text):
        return parse_word(text)

    def letters(self):
        """
        Expanded list of (letter, +1/-1) steps
        """
        out = []
        for letter, e in self.syllables:
            step = 1 if e > 0 else -1
            out.extend([(letter, step)]*abs(e))
        return out

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def outerLetter(self):
        return self.syllables[0][0]

    def aExponents(self):
        return [e for l, e in self.syllables if l == 'a']

    def bExponents(self):
        return [e for l, e in self.syllables if l == 'b']

    def swapLetters(self):
        swap = {'a': 'b', 'b': 'a'}
        return GroupWord([(swap[l], e) for l, e in self.syllables])

    def normalized(self):
        """
        The word with its letters swapped when it starts with b, so the outer letter is a
        """
        if self.outerLetter() == 'b':
            return self.swapLetters()
        return self

    def inverse(self):
        return GroupWord([(l, -e) for l, e in reversed(self.syllables)])

    def power(self, n):
        if n == 0:
            raise WordSyntaxError("Zero power of a word is the identity")
        base = self if n > 0 else self.inverse()
        return GroupWord(list(base.syllables)*abs(n))

    def __mul__(self, other):
        return GroupWord(list(self.syllables) + list(other.syllables))

    def __eq__(self, other):
        if not isinstance(other, GroupWord):
            return NotImplemented
        return self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __str__(self):
        parts = []
        for l, e in self.syllables:
            parts.append(l if e == 1 else "{0}^{1}".format(l, e))
        return "".join(parts)

    def __repr__(self):
        return "GroupWord('{0}')".format(self)

    def compact(self):
        """
        Letter form with uppercase inverses, e.g. abA
        """
        return "".join(l if s > 0 else l.upper() for l, s in self.letters())

    def isStrictlyGood(self):
        w = self.normalized()
        if w.syllables[-1][0] != 'a':
            return False
        s = w.aExponents()
        if any(abs(e) != 1 for e in s):
            return False
        return all(s[j] == s[0]*(-1)**j for j in range(len(s)))

    def isGoodUnderInvolution(self):
        w = self.normalized()
        if w.syllables[-1][0] != 'a':
            return False
        return all(e % 2 == 1 for e in w.aExponents())

    def toDict(self):
        return {"word": str(self), "letters": self.compact(), "length": len(self),
                "strictly_good": self.isStrictlyGood(),
                "good_under_involution": self.isGoodUnderInvolution()}


def _reduce(syllables):
    stack = []
    for letter, e in syllables:
        if e == 0:
            continue
        if stack and stack[-1][0] == letter:
            total = stack[-1][1] + e
            stack.pop()
            if total != 0:
                stack.append((letter, total))
        else:
            stack.append((letter, e))
    return stack


def parse_word(text):
    """
    Parses a word over a, b with uppercase inverses and optional ^k exponents

    Input:
        text: String such as "abA" or "a b^-1 a"

    Output:
        word: freely reduced GroupWord
    """
    if text is None or text.strip() == "":
        raise WordSyntaxError("Empty word", position=0)
    syllables = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise WordSyntaxError("Unexpected character '{0}'".format(text[bad]), position=bad)
        letter = m.group(1)
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if letter.isupper():
            exp = -exp
        syllables.append((letter.lower(), exp))
        pos = m.end()
    return GroupWord(syllables)


def asWord(w):
    if isinstance(w, GroupWord):
        return w
    if str(w) in NAMED_WORDS:
        return parse_word(NAMED_WORDS[str(w)])
    return parse_word(str(w))


def is_good(w):
    """
    True when w has the good-word pattern: outer letter on both ends with
    exponent +-1, alternating signs on the outer letter and nonzero exponents on the inner one
    """
    return asWord(w).isStrictlyGood()


def is_good_under_involution(w):
    return asWord(w).isGoodUnderInvolution()


def compose_words(w1, w2):
    """
    The semigroup product w1 * w2, every a^s in w1 replaced by w2^s and freely reduced

    Input:
        w1, w2: good words (strict or under the involution a^2 = 1)

    Output:
        word: GroupWord
        strict: True when the product is strictly good, False when it is only good under the involution
    """
    w1 = asWord(w1).normalized()
    w2 = asWord(w2).normalized()
    for w in (w1, w2):
        if not w.isGoodUnderInvolution():
            raise WordSyntaxError("Composition needs good words, got {0}".format(w))
    syllables = []
    for letter, e in w1.syllables:
        if letter == 'a':
            syllables.extend(w2.power(e).syllables)
        else:
            syllables.append((letter, e))
    word = GroupWord(syllables)
    return word, word.isStrictlyGood()


def word_matrix(w, f, g):
    """
    Evaluates w(g, f) with a -> g and b -> f
    """
    gen = {('a', 1): g, ('a', -1): g.inverse(), ('b', 1): f, ('b', -1): f.inverse()}
    result = MoebiusMap.identity()
    for step in asWord(w).letters():
        result = result.compose(gen[step])
    return result


def evaluate_gamma(w, params):
    """
    gamma(f, w(g, f)) for the generators realizing params, the word read literally

    Input:
        w: GroupWord or word text
        params: TraceParams with gamma != 0

    Output:
        value: complex
    """
    if not isinstance(params, TraceParams):
        params = TraceParams(*params)
    f, g = realize(params)
    return gamma(f, word_matrix(w, f, g))


def named_word(name):
    if name not in NAMED_WORDS:
        raise UnsupportedParameterError("Unknown named word '{0}', choose from {1}".format(name, sorted(NAMED_WORDS)))
    return parse_word(NAMED_WORDS[name])


def good_word_family(max_syllables, b_exponents=(1, -1, 2, -2)):
    """
    Strictly good words a b^e1 a^-1 b^e2 a ... with 1..max_syllables b syllables

    Input:
        max_syllables: largest number of b syllables
        b_exponents: exponents allowed on b

    Output:
        words: list of GroupWord ordered by syllable count, then exponents
    """
    if int(max_syllables) != max_syllables or max_syllables < 1:
        raise UnsupportedParameterError("max_syllables must be a positive integer, got {0}".format(max_syllables))
    words = []
    for k in range(1, int(max_syllables) + 1):
        for exps in itertools.product(b_exponents, repeat=k):
            syllables = [('a', 1)]
            for j, e in enumerate(exps):
                syllables += [('b', e), ('a', (-1)**(j + 1))]
            words.append(GroupWord(syllables))
    return words
