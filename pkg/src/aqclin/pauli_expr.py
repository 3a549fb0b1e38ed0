"""Pauli-string expressions such as ``(3III+XII-2XYI+3XYZ)/4``.

Grammar (whitespace is ignored everywhere)::

    expr    = "(" sum ")" [ "/" number ] | sum
    sum     = term { ("+" | "-") term }
    term    = [ "+" | "-" ] [ number [ "*" ] ] word
    word    = letter { letter }
    letter  = "I" | "X" | "Y" | "Z"
    number  = digits [ "." [ digits ] ] [ exponent ] | "." digits [ exponent ]

The leftmost letter of a word is the first (most significant) tensor factor.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .densela import hermitian

MAX_QUBITS = 12

PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<word>[IXYZ]+)
  | (?P<op>[-+*/()])
  | (?P<imag>[ij])
    """,
    re.VERBOSE,
)


class PauliSyntaxError(ValueError):
    """Raised for malformed expressions; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


@dataclass(frozen=True)
class PauliExpr:
    terms: tuple[tuple[float, str], ...]
    divisor: float
    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if not (math.isfinite(self.divisor) and self.divisor > 0):
            raise ValueError(f"divisor must be a positive finite number, got {self.divisor}")
        for coeff, word in self.terms:
            if len(word) != self.n_qubits or set(word) - set(PAULI):
                raise ValueError(f"invalid Pauli word {word!r} for {self.n_qubits} qubits")
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff}")

    @classmethod
    def from_terms(cls, terms, divisor: float = 1.0) -> PauliExpr:
        """Build a normalized expression: duplicate words merged, zero terms dropped."""
        merged: dict[str, float] = {}
        n = None
        for coeff, word in terms:
            if n is None:
                n = len(word)
            elif len(word) != n:
                raise ValueError(f"inconsistent word lengths: {len(word)} vs {n}")
            merged[word] = merged.get(word, 0.0) + float(coeff)
        if n is None:
            raise ValueError("expression has no terms")
        kept = tuple((c, w) for w, c in merged.items() if c != 0.0)
        return cls(kept, float(divisor), n)

    def __str__(self):
        return format_expr(self)


class _Parser:
    def __init__(self, text: str, max_qubits: int):
        self.text = text
        self.max_qubits = max_qubits
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text):
        out = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise PauliSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            kind = m.lastgroup
            if kind == "imag":
                raise PauliSyntaxError("complex coefficients are not supported", text, pos)
            if kind != "ws":
                out.append((kind, m.group(), pos))
            pos = m.end()
        out.append(("end", "", len(text)))
        return out

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise PauliSyntaxError(f"expected {want!r}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def accept(self, kind, value=None):
        tok = self.peek()
        if tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return tok
        return None

    def parse(self) -> PauliExpr:
        if self.peek()[0] == "end":
            raise PauliSyntaxError("empty expression", self.text, 0)
        divisor = 1.0
        if self.accept("op", "("):
            terms = self.sum()
            self.take("op", ")")
            if self.accept("op", "/"):
                tok = self.take("number")
                divisor = float(tok[1])
                if divisor == 0.0:
                    raise PauliSyntaxError("zero divisor", self.text, tok[2])
        else:
            terms = self.sum()
        self.take("end")

        n = len(terms[0][1])
        for _, word, pos in terms:
            if len(word) != n:
                raise PauliSyntaxError(
                    f"word {word!r} has length {len(word)}, expected {n}", self.text, pos
                )
        if n > self.max_qubits:
            raise PauliSyntaxError(
                f"{n} qubits exceeds the limit of {self.max_qubits}", self.text, terms[0][2]
            )
        return PauliExpr.from_terms([(c, w) for c, w, _ in terms], divisor)

    def sum(self):
        terms = [self.term(first=True)]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            terms.append(self.term(first=False))
        return terms

    def term(self, first):
        sign = 1.0
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            sign = -1.0 if tok[1] == "-" else 1.0
        elif not first:
            raise PauliSyntaxError("expected '+' or '-'", self.text, tok[2])
        coeff = 1.0
        num = self.accept("number")
        if num is not None:
            coeff = float(num[1])
            self.accept("op", "*")
        word = self.take("word")
        return sign * coeff, word[1], word[2]


def parse(text: str, max_qubits: int = MAX_QUBITS) -> PauliExpr:
    """Parse ``text`` into a normalized :class:`PauliExpr`."""
    return _Parser(text, max_qubits).parse()


def _fmt_number(x: float) -> str:
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_expr(expr: PauliExpr) -> str:
    if not expr.terms:
        body = "0" + "I" * expr.n_qubits
    else:
        parts = []
        for k, (coeff, word) in enumerate(expr.terms):
            sign = "-" if coeff < 0 else ("+" if k else "")
            mag = abs(coeff)
            parts.append(sign + ("" if mag == 1.0 else _fmt_number(mag)) + word)
        body = "".join(parts)
    if expr.divisor == 1.0:
        return body
    return f"({body})/{_fmt_number(expr.divisor)}"


def word_matrix(word: str) -> np.ndarray:
    return reduce(np.kron, (PAULI[c] for c in word))


def to_matrix(expr: PauliExpr) -> np.ndarray:
    """Dense ``2**n`` matrix of ``expr``, certified Hermitian."""
    dim = 2**expr.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for coeff, word in expr.terms:
        m += coeff * word_matrix(word)
    return hermitian(m / expr.divisor)
