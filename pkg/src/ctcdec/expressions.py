"""Expression-constrained decoding (scheme ``dec-ce``).

A deterministic finite automaton over symbol classes restricts the shape
of decoded strings: words are maximal letter runs, punctuation attaches to
word boundaries, digit groups form number expressions, and line-initial
capitalization can be required. No dictionary is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .alphabet import Alphabet
from .ctc import marginal_word_confidences
from .errors import EmptyLanguage, InvalidRule
from .matrix import ConfidenceMatrix
from .search import prefix_beam_search
from .types import Hypothesis

CLASS_UPPER = "uppercase"
CLASS_LOWER = "lowercase"
CLASS_DIGIT = "digit"
CLASS_ATTACH = "punct_attach"
CLASS_INWORD = "punct_inword"
CLASS_STANDALONE = "punct_standalone"
CLASS_SEPARATOR = "separator"

KNOWN_CLASSES = (
    CLASS_UPPER,
    CLASS_LOWER,
    CLASS_DIGIT,
    CLASS_ATTACH,
    CLASS_INWORD,
    CLASS_STANDALONE,
    CLASS_SEPARATOR,
)

_MODES = ("lenient", "strict")


@dataclass(frozen=True)
class ExpressionModel:
    """Deterministic FSA over symbol classes.

    ``transitions`` maps ``(state, class)`` to the next state (absent key =
    dead end); ``symbol_classes`` assigns every printable symbol to exactly
    one class.
    """

    start: str
    transitions: Mapping[tuple[str, str], str]
    accepting: frozenset[str]
    symbol_classes: Mapping[str, str]

    @cached_property
    def states(self) -> frozenset[str]:
        found = {self.start} | set(self.accepting)
        for (src, _), dst in self.transitions.items():
            found.add(src)
            found.add(dst)
        return frozenset(found)

    @cached_property
    def live_states(self) -> frozenset[str]:
        """States from which some accepting state is reachable."""
        inverse: dict[str, set[str]] = {}
        for (src, _), dst in self.transitions.items():
            inverse.setdefault(dst, set()).add(src)
        live = set(self.accepting)
        frontier = list(live)
        while frontier:
            state = frontier.pop()
            for prev in inverse.get(state, ()):
                if prev not in live:
                    live.add(prev)
                    frontier.append(prev)
        return frozenset(live)

    def step(self, state: str, symbol: str) -> str | None:
        cls = self.symbol_classes.get(symbol)
        if cls is None:
            return None
        return self.transitions.get((state, cls))

    def accepts(self, text: str) -> bool:
        state = self.start
        for ch in text:
            state = self.step(state, ch)
            if state is None:
                return False
        return state in self.accepting

    def validate(self, alphabet: Alphabet) -> None:
        """Check the partition and reachability invariants."""
        printable = alphabet.printable_symbols
        assigned = set(self.symbol_classes)
        missing = printable - assigned
        if missing:
            raise InvalidRule(f"symbols not assigned to a class: {sorted(missing)!r}")
        extra = assigned - printable
        if extra:
            raise InvalidRule(f"classes mention symbols outside the alphabet: {sorted(extra)!r}")
        if self.start not in self.live_states:
            raise EmptyLanguage("no accepting state is reachable from the start state")


@dataclass(frozen=True)
class RuleConfig:
    """Declarative rule set compiled into an :class:`ExpressionModel`.

    ``classes`` maps class names to symbol sets (a partition of the
    printable alphabet). ``line_start_capital`` is ``"lenient"`` (a line
    may start with any letter; lines often begin mid-sentence) or
    ``"strict"`` (the first word must start with a capital).
    """

    classes: Mapping[str, frozenset[str]] = field(default_factory=dict)
    line_start_capital: str = "lenient"
    attach_punctuation: bool = True
    digits_form_numbers: bool = True


def default_rule_config(alphabet: Alphabet, line_start_capital: str = "lenient") -> RuleConfig:
    """Classify the alphabet's printable symbols with the stock policy.

    Apostrophe and hyphen act as in-word connectors (contractions,
    compounds); quotes, stops and brackets attach to word boundaries; a
    handful of signs stand alone.
    """
    classes: dict[str, set[str]] = {name: set() for name in KNOWN_CLASSES}
    for sym in sorted(alphabet.printable_symbols):
        if sym == alphabet.separator:
            classes[CLASS_SEPARATOR].add(sym)
        elif sym.isupper():
            classes[CLASS_UPPER].add(sym)
        elif sym.islower():
            classes[CLASS_LOWER].add(sym)
        elif sym.isdigit():
            classes[CLASS_DIGIT].add(sym)
        elif sym in "'-":
            classes[CLASS_INWORD].add(sym)
        elif sym in "&+=/_":
            classes[CLASS_STANDALONE].add(sym)
        else:
            classes[CLASS_ATTACH].add(sym)
    return RuleConfig(
        classes={name: frozenset(syms) for name, syms in classes.items()},
        line_start_capital=line_start_capital,
    )


def compile_rules(config: RuleConfig, alphabet: Alphabet) -> ExpressionModel:
    """Compile a rule set into a deterministic FSA.

    The empty string is always accepted (an empty line is valid). Raises
    :class:`InvalidRule` for unknown classes, symbols outside the
    alphabet, overlapping classes, or uncovered symbols;
    :class:`EmptyLanguage` if no accepting state is reachable.
    """
    if config.line_start_capital not in _MODES:
        raise InvalidRule(f"line_start_capital must be one of {_MODES}, got {config.line_start_capital!r}")
    printable = alphabet.printable_symbols
    symbol_classes: dict[str, str] = {}
    for name, syms in config.classes.items():
        if name not in KNOWN_CLASSES:
            raise InvalidRule(f"unknown symbol class {name!r}")
        for sym in syms:
            if sym not in printable:
                raise InvalidRule(f"class {name!r} lists {sym!r}, which is not a printable alphabet symbol")
            if sym in symbol_classes:
                raise InvalidRule(f"symbol {sym!r} assigned to both {symbol_classes[sym]!r} and {name!r}")
            symbol_classes[sym] = name

    lenient = config.line_start_capital == "lenient"
    t: dict[tuple[str, str], str] = {}

    def arc(src: str, cls: str, dst: str) -> None:
        t[(src, cls)] = dst

    # Line start; "pre_start"/"pre" hold leading attached punctuation.
    for src, first_lower_ok in (("start", lenient), ("pre_start", lenient)):
        arc(src, CLASS_UPPER, "w_cap")
        if first_lower_ok:
            arc(src, CLASS_LOWER, "w_lower")
        if config.digits_form_numbers:
            arc(src, CLASS_DIGIT, "num")
        arc(src, CLASS_ATTACH, "pre_start")
    arc("start", CLASS_STANDALONE, "standalone")

    for src in ("gap", "pre"):
        arc(src, CLASS_UPPER, "w_cap")
        arc(src, CLASS_LOWER, "w_lower")
        if config.digits_form_numbers:
            arc(src, CLASS_DIGIT, "num")
        arc(src, CLASS_ATTACH, "pre")
    arc("gap", CLASS_STANDALONE, "standalone")

    # Word shapes: all-lowercase, Capitalized, ALL-CAPS; connectors restart
    # the shape after a letter follows.
    arc("w_lower", CLASS_LOWER, "w_lower")
    arc("w_cap", CLASS_LOWER, "w_caplow")
    arc("w_cap", CLASS_UPPER, "w_upper")
    arc("w_caplow", CLASS_LOWER, "w_caplow")
    arc("w_upper", CLASS_UPPER, "w_upper")
    for word_state in ("w_lower", "w_cap", "w_caplow", "w_upper"):
        arc(word_state, CLASS_INWORD, "w_conn")
        arc(word_state, CLASS_ATTACH, "post")
        arc(word_state, CLASS_SEPARATOR, "gap")
    arc("w_conn", CLASS_LOWER, "w_lower")
    arc("w_conn", CLASS_UPPER, "w_cap")

    arc("num", CLASS_DIGIT, "num")
    arc("num", CLASS_ATTACH, "post")
    arc("num", CLASS_SEPARATOR, "gap")

    arc("post", CLASS_ATTACH, "post")
    arc("post", CLASS_SEPARATOR, "gap")
    arc("standalone", CLASS_SEPARATOR, "gap")

    if not config.attach_punctuation:
        # Attachment not required: leading punctuation may also stand on its
        # own, so the pre states are replaced by accepting punct-run states
        # that can still open a word (capitalization policy preserved at
        # line start).
        arc("start", CLASS_ATTACH, "punct_run_start")
        arc("gap", CLASS_ATTACH, "punct_run_mid")
        for src, lower_ok in (("punct_run_start", lenient), ("punct_run_mid", True)):
            arc(src, CLASS_ATTACH, src)
            arc(src, CLASS_SEPARATOR, "gap")
            arc(src, CLASS_UPPER, "w_cap")
            if lower_ok:
                arc(src, CLASS_LOWER, "w_lower")
            if config.digits_form_numbers:
                arc(src, CLASS_DIGIT, "num")

    accepting = {"start", "w_lower", "w_cap", "w_caplow", "w_upper", "num", "post", "standalone"}
    if not config.attach_punctuation:
        accepting.update({"punct_run_start", "punct_run_mid"})

    model = ExpressionModel(
        start="start",
        transitions=t,
        accepting=frozenset(accepting),
        symbol_classes=symbol_classes,
    )
    model.validate(alphabet)
    return model


def accept_all_model(alphabet: Alphabet) -> ExpressionModel:
    """FSA accepting every string over the printable alphabet."""
    classes = {sym: "any" for sym in alphabet.printable_symbols}
    return ExpressionModel(
        start="s",
        transitions={("s", "any"): "s"},
        accepting=frozenset({"s"}),
        symbol_classes=classes,
    )


def _unescape_symbols(listed: str) -> str:
    out = []
    i = 0
    while i < len(listed):
        if listed[i] == "\\" and i + 1 < len(listed) and listed[i + 1] in ("s", "\\"):
            out.append(" " if listed[i + 1] == "s" else "\\")
            i += 2
        else:
            out.append(listed[i])
            i += 1
    return "".join(out)


def parse_rules(text: str) -> RuleConfig:
    """Parse the rule file format.

    One directive per line; ``#`` starts a comment. ``class <name>
    <symbols>`` lists a class's symbols with ``\\s`` escaping the space
    symbol and ``\\\\`` a backslash. ``rule line_start_capital
    strict|lenient``, ``rule attach_punctuation on|off`` and ``rule
    digits_form_numbers on|off`` set the named rules.
    """
    classes: dict[str, set[str]] = {}
    line_start = "lenient"
    attach = True
    numbers = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "class" and len(parts) == 3:
            name, syms = parts[1], _unescape_symbols(parts[2])
            classes.setdefault(name, set()).update(syms)
        elif parts[0] == "rule" and len(parts) == 3:
            name, value = parts[1], parts[2]
            if name == "line_start_capital":
                if value not in _MODES:
                    raise InvalidRule(f"line {lineno}: line_start_capital must be strict or lenient")
                line_start = value
            elif name in ("attach_punctuation", "digits_form_numbers"):
                if value not in ("on", "off"):
                    raise InvalidRule(f"line {lineno}: rule {name} takes on or off")
                if name == "attach_punctuation":
                    attach = value == "on"
                else:
                    numbers = value == "on"
            else:
                raise InvalidRule(f"line {lineno}: unknown rule {name!r}")
        else:
            raise InvalidRule(f"line {lineno}: cannot parse {raw!r}")
    return RuleConfig(
        classes={name: frozenset(syms) for name, syms in classes.items()},
        line_start_capital=line_start,
        attach_punctuation=attach,
        digits_form_numbers=numbers,
    )


def format_rules(config: RuleConfig) -> str:
    """Serialize a rule config in the rule file format."""
    lines = []
    for name in KNOWN_CLASSES:
        syms = config.classes.get(name)
        if syms:
            listed = "".join(sorted(syms)).replace("\\", "\\\\").replace(" ", "\\s")
            lines.append(f"class {name} {listed}")
    lines.append(f"rule line_start_capital {config.line_start_capital}")
    lines.append(f"rule attach_punctuation {'on' if config.attach_punctuation else 'off'}")
    lines.append(f"rule digits_form_numbers {'on' if config.digits_form_numbers else 'off'}")
    return "\n".join(lines) + "\n"


class _FsaConstraint:
    """Prefix-search constraint wrapping an ExpressionModel."""

    def __init__(self, model: ExpressionModel, alphabet: Alphabet):
        self.model = model
        self.symbols = alphabet.symbols
        self.live = model.live_states
        self.accepting = model.accepting

    def initial(self):
        return self.model.start

    def extend(self, state, symbol_index: int):
        nxt = self.model.step(state, self.symbols[symbol_index])
        if nxt is None or nxt not in self.live:
            return None
        return nxt

    def rank_bonus(self, state) -> float:
        return 0.0

    def final_bonus(self, state):
        return 0.0 if state in self.accepting else None


def decode_expression(
    matrix: ConfidenceMatrix,
    model: ExpressionModel,
    beam_width: int | None = 64,
    min_symbol_prob: float = 0.0,
) -> Hypothesis:
    """Most confident string accepted by the expression model.

    Scores are string marginals over the explored prefixes; with
    ``beam_width=None`` the result is the exact constrained optimum.
    Raises :class:`NoAcceptedString` when the beam exhausts without an
    accepting completion.
    """
    model.validate(matrix.alphabet)
    constraint = _FsaConstraint(model, matrix.alphabet)
    prefix, mass, _ = prefix_beam_search(
        matrix, constraint, beam_width=beam_width, min_symbol_prob=min_symbol_prob
    )
    text = "".join(matrix.alphabet.symbols[i] for i in prefix)
    confs = marginal_word_confidences(matrix, text, matrix.alphabet.separator) if text else ()
    return Hypothesis(text=text, score=mass, word_confidences=confs)
