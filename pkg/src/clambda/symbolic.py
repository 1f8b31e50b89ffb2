"""Exact normal-ordering engine and identity prover.

Words in {a, ad, K} are rewritten to the canonical normal-ordered shape
ad^p a^q K^s with GammaPolynomial coefficients, using the defining
relations as rewrite rules:

    a * ad  ->  ad * a + I + sum_r g_r K^r
    K * ad  ->  w^2  * ad * K          (w = primitive 2*lambda-th root)
    K * a   ->  w^-2 * a  * K
    K^lambda -> I

Termination: right-appending K or a never creates an ad; right-appending
ad maps each word ad^p a^q K^s to one word with the same a-degree and a
higher ad-degree plus words of strictly smaller a-degree (the closed-form
cascade of pairwise a*ad swaps), so the multiset of a-degrees decreases
lexicographically and the rewrite reaches a fixed point.

Equality of normal forms is decided at group-ring level first; the numeric
fallback evaluates cyclotomic coefficients at w = exp(i*pi/lambda) and is
reported as a distinct, weaker status.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import CyclotomicScalar, GammaPolynomial
from .params import AlgebraParams, structure_function

__all__ = [
    "ExprSyntaxError",
    "OperatorExpr",
    "NormalForm",
    "parse",
    "normal_order",
    "nf_mul",
    "prove_identity",
    "ProofResult",
    "evaluate_on_state",
    "word_to_string",
]

FIELD_TOL = 1e-12


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

class OperatorExpr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(OperatorExpr):
    kind: str  # "a" | "ad" | "K" | "I" | "w"


@dataclass(frozen=True)
class RationalLit(OperatorExpr):
    value: Fraction


@dataclass(frozen=True)
class GammaSym(OperatorExpr):
    r: int


@dataclass(frozen=True)
class Pow(OperatorExpr):
    base: OperatorExpr
    exp: int


@dataclass(frozen=True)
class Mul(OperatorExpr):
    factors: tuple[OperatorExpr, ...]


@dataclass(frozen=True)
class Sum(OperatorExpr):
    # (sign, term) pairs; sign in {+1, -1}
    terms: tuple[tuple[int, OperatorExpr], ...]


class ExprSyntaxError(ValueError):
    """Parse failure with the offending position (0-based)."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


# --------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# --------------------------------------------------------------------------

_PUNCT = set("+-*^()[],")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(("punct", c, i))
            i += 1
            continue
        if c.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            num = int(text[start:i])
            den = 1
            if i < n and text[i] == "/":
                j = i + 1
                if j >= n or not text[j].isdigit():
                    raise ExprSyntaxError("expected digits after '/'", i + 1)
                i = j
                while i < n and text[i].isdigit():
                    i += 1
                den = int(text[j:i])
                if den == 0:
                    raise ExprSyntaxError("zero denominator", j)
            tokens.append(("number", Fraction(num, den), start))
            continue
        if c.isalpha():
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
            continue
        raise ExprSyntaxError(f"unknown token {c!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, object, int]], lam: int):
        self.tokens = tokens
        self.lam = lam
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_punct(self, ch: str):
        kind, val, pos = self.peek()
        if kind != "punct" or val != ch:
            raise ExprSyntaxError(f"expected {ch!r}", pos)
        return self.advance()

    def parse_expr(self) -> OperatorExpr:
        terms: list[tuple[int, OperatorExpr]] = []
        sign = 1
        kind, val, _ = self.peek()
        if kind == "punct" and val == "-":
            self.advance()
            sign = -1
        terms.append((sign, self.parse_term()))
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "+-":
                self.advance()
                terms.append((1 if val == "+" else -1, self.parse_term()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def parse_term(self) -> OperatorExpr:
        factors = [self.parse_factor()]
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val == "*":
                self.advance()
                factors.append(self.parse_factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors))

    def parse_factor(self) -> OperatorExpr:
        atom = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "punct" and val == "^":
            self.advance()
            exp = self.parse_int_exponent()
            if exp < 0 and isinstance(atom, Atom) and atom.kind in ("a", "ad"):
                raise ExprSyntaxError(f"negative power of {atom.kind}", pos)
            if exp < 0 and isinstance(atom, GammaSym):
                raise ExprSyntaxError("negative power of a gamma symbol", pos)
            return Pow(atom, exp)
        return atom

    def parse_int_exponent(self) -> int:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "punct" and val == "-":
            self.advance()
            sign = -1
            kind, val, pos = self.peek()
        if kind != "number":
            raise ExprSyntaxError("expected integer exponent", pos)
        if val.denominator != 1:
            raise ExprSyntaxError("exponent must be an integer", pos)
        self.advance()
        return sign * int(val)

    def parse_atom(self) -> OperatorExpr:
        kind, val, pos = self.advance()
        if kind == "number":
            return RationalLit(val)
        if kind == "name":
            if val in ("a", "ad", "K", "I", "w"):
                return Atom(val)
            if val.startswith("g") and val[1:].isdigit():
                r = int(val[1:])
                if not 1 <= r <= self.lam - 1:
                    raise ExprSyntaxError(
                        f"gamma index {r} outside 1..{self.lam - 1}", pos
                    )
                return GammaSym(r)
            raise ExprSyntaxError(f"unknown symbol {val!r}", pos)
        if kind == "punct" and val == "(":
            inner = self.parse_expr()
            self.expect_punct(")")
            return inner
        if kind == "punct" and val == "[":
            x = self.parse_expr()
            self.expect_punct(",")
            y = self.parse_expr()
            self.expect_punct("]")
            # commutator desugars to XY - YX right here
            return Sum(((1, Mul((x, y))), (-1, Mul((y, x)))))
        raise ExprSyntaxError(f"unexpected token {val!r}", pos)


def parse(text: str, lam: int) -> OperatorExpr:
    """Parse an operator expression; raises ExprSyntaxError with position."""
    if lam < 2:
        raise ValueError("lambda must be >= 2")
    parser = _Parser(_tokenize(text), lam)
    expr = parser.parse_expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected trailing token {val!r}", pos)
    return expr


# --------------------------------------------------------------------------
# Normal forms
# --------------------------------------------------------------------------

WordKey = tuple[int, int, int]  # (ad power p, a power q, K power s mod lambda)


class NormalForm:
    """Canonical map (p, q, s) -> GammaPolynomial; no zero coefficients stored."""

    __slots__ = ("lam", "words")

    def __init__(self, lam: int, words: dict[WordKey, GammaPolynomial] | None = None):
        self.lam = lam
        clean: dict[WordKey, GammaPolynomial] = {}
        if words:
            for (p, q, s), coeff in words.items():
                if p < 0 or q < 0:
                    raise ValueError("negative ladder power in normal form")
                if not coeff.is_zero():
                    clean[(p, q, s % lam)] = coeff
        self.words = clean

    @classmethod
    def zero(cls, lam: int) -> "NormalForm":
        return cls(lam)

    @classmethod
    def word(cls, lam: int, p: int, q: int, s: int, coeff: GammaPolynomial | None = None) -> "NormalForm":
        if coeff is None:
            coeff = GammaPolynomial.one(lam)
        return cls(lam, {(p, q, s % lam): coeff})

    @classmethod
    def scalar(cls, poly: GammaPolynomial) -> "NormalForm":
        return cls(poly.lam, {(0, 0, 0): poly})

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.lam == other.lam and self.words == other.words

    def __hash__(self):
        return hash((self.lam, frozenset(self.words.keys())))

    def is_zero(self) -> bool:
        return not self.words

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self.words)
        for key, coeff in other.words.items():
            out[key] = out[key] + coeff if key in out else coeff
        return NormalForm(self.lam, out)

    def __neg__(self) -> "NormalForm":
        return NormalForm(self.lam, {k: -c for k, c in self.words.items()})

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + (-other)

    def scale(self, poly: GammaPolynomial) -> "NormalForm":
        return NormalForm(self.lam, {k: c * poly for k, c in self.words.items()})

    def sorted_items(self):
        return sorted(self.words.items(), key=lambda kv: kv[0])

    def to_json_obj(self) -> list[dict]:
        out = []
        for (p, q, s), coeff in self.sorted_items():
            terms = []
            for deg in sorted(coeff.terms):
                cyc = coeff.terms[deg]
                terms.append(
                    {
                        "g": list(deg),
                        "w": [[c.numerator, c.denominator] for c in cyc.coeffs],
                    }
                )
            out.append({"p": p, "q": q, "s": s, "coeff": terms})
        return out

    def render_lines(self) -> list[str]:
        lines = []
        for key, coeff in self.sorted_items():
            cs = coeff.render()
            if " + " in cs:
                cs = f"({cs})"
            lines.append(f"{cs} · {word_to_string(key)}")
        return lines if lines else ["0"]


def word_to_string(key: WordKey) -> str:
    p, q, s = key
    parts = []
    if p:
        parts.append("ad" if p == 1 else f"ad^{p}")
    if q:
        parts.append("a" if q == 1 else f"a^{q}")
    if s:
        parts.append("K" if s == 1 else f"K^{s}")
    return " ".join(parts) if parts else "I"


# sum_{s=0}^{q-1} w^{-2 r s}: coefficient of the pairwise-swap cascade
_FBAR_CACHE: dict[tuple[int, int, int], CyclotomicScalar] = {}


def _fbar(lam: int, r: int, q: int) -> CyclotomicScalar:
    key = (lam, r, q)
    cached = _FBAR_CACHE.get(key)
    if cached is None:
        total = CyclotomicScalar.zero(lam)
        for s in range(q):
            total = total + CyclotomicScalar.zeta_power(lam, -2 * r * s)
        _FBAR_CACHE[key] = cached = total
    return cached


def _append_ad(nf: NormalForm) -> NormalForm:
    """Right-multiply by ad, normal-ordering the result.

    Uses  a^q * ad = ad * a^q + q a^{q-1} + sum_r g_r fbar_r(q) a^{q-1} K^r
    and K^s * ad = w^{2s} ad K^s.
    """
    lam = nf.lam
    out: dict[WordKey, GammaPolynomial] = {}

    def put(key: WordKey, coeff: GammaPolynomial):
        out[key] = out[key] + coeff if key in out else coeff

    for (p, q, s), coeff in nf.words.items():
        base = coeff.scale_zeta(2 * s)
        put((p + 1, q, s), base)
        if q == 0:
            continue
        put((p, q - 1, s), base * q)
        for r in range(1, lam):
            extra = base * _fbar(lam, r, q) * GammaPolynomial.gamma(lam, r)
            put((p, q - 1, (s + r) % lam), extra)
    return NormalForm(lam, out)


def _append_a(nf: NormalForm) -> NormalForm:
    """Right-multiply by a: K^s * a = w^{-2s} a K^s."""
    lam = nf.lam
    out: dict[WordKey, GammaPolynomial] = {}
    for (p, q, s), coeff in nf.words.items():
        key = (p, q + 1, s)
        val = coeff.scale_zeta(-2 * s)
        out[key] = out[key] + val if key in out else val
    return NormalForm(lam, out)


def _append_K(nf: NormalForm, k: int) -> NormalForm:
    lam = nf.lam
    out: dict[WordKey, GammaPolynomial] = {}
    for (p, q, s), coeff in nf.words.items():
        key = (p, q, (s + k) % lam)
        out[key] = out[key] + coeff if key in out else coeff
    return NormalForm(lam, out)


def nf_mul(left: NormalForm, right: NormalForm) -> NormalForm:
    """Product of normal forms, renormalized."""
    if left.lam != right.lam:
        raise ValueError("mixing normal forms of different orders")
    lam = left.lam
    total = NormalForm.zero(lam)
    for (p2, q2, s2), coeff2 in right.words.items():
        piece = left
        for _ in range(p2):
            piece = _append_ad(piece)
        for _ in range(q2):
            piece = _append_a(piece)
        if s2:
            piece = _append_K(piece, s2)
        total = total + piece.scale(coeff2)
    return total


def _expr_to_nf(expr: OperatorExpr, lam: int) -> NormalForm:
    if isinstance(expr, Atom):
        if expr.kind == "a":
            return NormalForm.word(lam, 0, 1, 0)
        if expr.kind == "ad":
            return NormalForm.word(lam, 1, 0, 0)
        if expr.kind == "K":
            return NormalForm.word(lam, 0, 0, 1)
        if expr.kind == "I":
            return NormalForm.word(lam, 0, 0, 0)
        if expr.kind == "w":
            return NormalForm.scalar(GammaPolynomial.constant(CyclotomicScalar.zeta_power(lam, 1)))
        raise ValueError(f"unknown atom {expr.kind!r}")
    if isinstance(expr, RationalLit):
        return NormalForm.scalar(GammaPolynomial.rational(lam, expr.value))
    if isinstance(expr, GammaSym):
        return NormalForm.scalar(GammaPolynomial.gamma(lam, expr.r))
    if isinstance(expr, Sum):
        total = NormalForm.zero(lam)
        for sign, term in expr.terms:
            piece = _expr_to_nf(term, lam)
            total = total + (piece if sign > 0 else -piece)
        return total
    if isinstance(expr, Mul):
        total = None
        for factor in expr.factors:
            piece = _expr_to_nf(factor, lam)
            total = piece if total is None else nf_mul(total, piece)
        return total if total is not None else NormalForm.word(lam, 0, 0, 0)
    if isinstance(expr, Pow):
        return _pow_to_nf(expr, lam)
    raise TypeError(f"unexpected node {type(expr).__name__}")


def _pow_to_nf(expr: Pow, lam: int) -> NormalForm:
    base, n = expr.base, expr.exp
    if n >= 0:
        if isinstance(base, Atom) and base.kind == "K":
            return NormalForm.word(lam, 0, 0, n % lam)
        if isinstance(base, Atom) and base.kind == "w":
            return NormalForm.scalar(GammaPolynomial.constant(CyclotomicScalar.zeta_power(lam, n)))
        out = NormalForm.word(lam, 0, 0, 0)
        piece = _expr_to_nf(base, lam)
        for _ in range(n):
            out = nf_mul(out, piece)
        return out
    # negative exponents: only group-like / invertible scalars
    if isinstance(base, Atom) and base.kind == "K":
        return NormalForm.word(lam, 0, 0, n % lam)
    if isinstance(base, Atom) and base.kind == "w":
        return NormalForm.scalar(GammaPolynomial.constant(CyclotomicScalar.zeta_power(lam, n % (2 * lam))))
    if isinstance(base, RationalLit):
        if base.value == 0:
            raise ValueError("zero to a negative power")
        return NormalForm.scalar(GammaPolynomial.rational(lam, Fraction(1) / base.value ** (-n)))
    raise ValueError("negative power only allowed for K, w and nonzero rationals")


def normal_order(expr: OperatorExpr | str, lam: int) -> NormalForm:
    """Normal-order an expression (or source text) at the given lambda."""
    if isinstance(expr, str):
        expr = parse(expr, lam)
    return _expr_to_nf(expr, lam)


# --------------------------------------------------------------------------
# Identity proving
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofResult:
    """Outcome of a dual equality test.

    status: "exact" (group-ring identity), "field" (identity after numeric
    evaluation of cyclotomic coefficients), or "fail".
    """

    status: str
    residual: float = 0.0
    witness: WordKey | None = None
    witness_coeff: str | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("exact", "field")

    def describe(self) -> str:
        if self.status == "exact":
            return "ExactGroupRing"
        if self.status == "field":
            return f"FieldNumeric(residual={self.residual:.3e})"
        return f"Fail(witness={word_to_string(self.witness)}, coeff={self.witness_coeff})"


def prove_identity(lhs, rhs, lam: int, tol: float = FIELD_TOL) -> ProofResult:
    """Decide lhs == rhs: group-ring equality first, numeric field fallback."""
    nl = normal_order(lhs, lam)
    nr = normal_order(rhs, lam)
    diff = nl - nr
    if diff.is_zero():
        return ProofResult("exact")
    worst = 0.0
    witness = None
    witness_coeff = None
    for key, coeff in diff.sorted_items():
        mag = coeff.max_abs_eval_coeff()
        if mag > tol and witness is None:
            witness = key
            witness_coeff = coeff.render()
        worst = max(worst, mag)
    if witness is None:
        return ProofResult("field", residual=worst)
    return ProofResult("fail", residual=worst, witness=witness, witness_coeff=witness_coeff)


# --------------------------------------------------------------------------
# Evaluation on basis states (bridge to the matrix backends)
# --------------------------------------------------------------------------

def evaluate_on_state(nf: NormalForm, n: int, params: AlgebraParams) -> list[tuple[int, complex]]:
    """Apply a normal form to basis state |n> in module normalization.

    a|k> = F(k)|k-1>, ad|k> = |k+1>, K|k> = exp(2*pi*i*k/lam)|k>.  Valid for
    any integer n (the Fock backend needs n >= 0; the bilateral backend uses
    the same action on negative states).
    """
    lam = params.lam
    if nf.lam != lam:
        raise ValueError("normal form and params disagree on lambda")
    amplitudes: dict[int, complex] = {}
    for (p, q, s), coeff in nf.words.items():
        c = coeff.eval(params.gamma)
        if s:
            c *= complex(np.exp(2j * np.pi * ((n * s) % lam) / lam))
        for j in range(q):
            c *= structure_function(params, n - j)
        if c == 0:
            continue
        target = n - q + p
        amplitudes[target] = amplitudes.get(target, 0j) + c
    return sorted((state, amp) for state, amp in amplitudes.items() if amp != 0)
