import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctcdec import (
    Alphabet,
    ConfidenceMatrix,
    EmptyLanguage,
    ExpressionModel,
    InvalidRule,
    NoAcceptedString,
    RuleConfig,
    accept_all_model,
    compile_rules,
    decode_expression,
    default_alphabet,
    default_rule_config,
    format_rules,
    parse_rules,
)

from oracles import argmax_string, enumerate_string_probs, random_matrix

ALPHA = default_alphabet()
DEFAULT_MODEL = compile_rules(default_rule_config(ALPHA), ALPHA)
AB2 = Alphabet.with_nac("ab")


def random_fsa(rng: np.random.Generator, alphabet: Alphabet) -> ExpressionModel:
    """Random DFA over singleton symbol classes, retried until non-empty."""
    printable = sorted(alphabet.printable_symbols)
    while True:
        n_states = int(rng.integers(1, 5))
        states = [f"q{i}" for i in range(n_states)]
        transitions = {}
        for state in states:
            for sym in printable:
                if rng.random() < 0.75:
                    transitions[(state, sym)] = states[int(rng.integers(0, n_states))]
        accepting = frozenset(s for s in states if rng.random() < 0.4)
        if not accepting:
            continue
        model = ExpressionModel(
            start="q0",
            transitions=transitions,
            accepting=accepting,
            symbol_classes={sym: sym for sym in printable},
        )
        try:
            model.validate(alphabet)
        except EmptyLanguage:
            continue
        return model


class TestCompile:
    def test_default_rules_accept_normal_text(self):
        assert DEFAULT_MODEL.accepts("Hello, world.")
        assert DEFAULT_MODEL.accepts("don't stop")
        assert DEFAULT_MODEL.accepts("An ALL CAPS word")
        assert DEFAULT_MODEL.accepts("In 1842 we went")
        assert DEFAULT_MODEL.accepts("")

    def test_unattached_punctuation_rejected(self):
        assert not DEFAULT_MODEL.accepts(",,,")
        assert not DEFAULT_MODEL.accepts(", and")

    def test_strict_capitalization_rejects_lowercase_start(self):
        strict = compile_rules(default_rule_config(ALPHA, "strict"), ALPHA)
        assert not strict.accepts("hello")
        assert strict.accepts("Hello")
        assert strict.accepts('"Hello there"')
        assert not strict.accepts('"hello there"')

    def test_word_shapes(self):
        assert DEFAULT_MODEL.accepts("USA")
        assert not DEFAULT_MODEL.accepts("hELLO")
        assert not DEFAULT_MODEL.accepts("HTml")

    def test_attach_punctuation_off_allows_punct_runs(self):
        config = default_rule_config(ALPHA)
        loose = compile_rules(
            RuleConfig(
                classes=config.classes,
                line_start_capital=config.line_start_capital,
                attach_punctuation=False,
            ),
            ALPHA,
        )
        assert loose.accepts(",,,")
        assert loose.accepts("well ... yes")

    def test_attach_punctuation_off_only_relaxes(self):
        # Turning the rule off must never reject previously valid text.
        config = default_rule_config(ALPHA)
        loose = compile_rules(
            RuleConfig(classes=config.classes, attach_punctuation=False), ALPHA
        )
        for text in ('"Hello, world."', "don't stop", "(yes) 1842", ""):
            assert DEFAULT_MODEL.accepts(text)
            assert loose.accepts(text)
        strict_loose = compile_rules(
            RuleConfig(
                classes=config.classes,
                line_start_capital="strict",
                attach_punctuation=False,
            ),
            ALPHA,
        )
        assert strict_loose.accepts('"Hello')
        assert not strict_loose.accepts('"hello')

    def test_digits_off_rejects_numbers(self):
        config = default_rule_config(ALPHA)
        no_digits = compile_rules(
            RuleConfig(classes=config.classes, digits_form_numbers=False), ALPHA
        )
        assert not no_digits.accepts("1842")
        assert no_digits.accepts("year")

    def test_unknown_class_rejected(self):
        with pytest.raises(InvalidRule):
            compile_rules(RuleConfig(classes={"emoji": frozenset("ab")}), AB2)

    def test_symbol_outside_alphabet_rejected(self):
        with pytest.raises(InvalidRule):
            compile_rules(RuleConfig(classes={"lowercase": frozenset("az")}), AB2)

    def test_overlapping_classes_rejected(self):
        with pytest.raises(InvalidRule):
            compile_rules(
                RuleConfig(
                    classes={"lowercase": frozenset("ab"), "uppercase": frozenset("a")}
                ),
                AB2,
            )

    def test_uncovered_symbol_rejected(self):
        with pytest.raises(InvalidRule):
            compile_rules(RuleConfig(classes={"lowercase": frozenset("a")}), AB2)

    def test_empty_language_detected(self):
        model = ExpressionModel(
            start="s",
            transitions={("s", "any"): "dead"},
            accepting=frozenset({"unreachable"}),
            symbol_classes={"a": "any", "b": "any"},
        )
        with pytest.raises(EmptyLanguage):
            model.validate(AB2)


class TestRuleFile:
    def test_round_trip(self):
        config = default_rule_config(ALPHA, "strict")
        parsed = parse_rules(format_rules(config))
        assert parsed == config

    def test_space_escape(self):
        config = parse_rules("class separator \\s\nclass lowercase ab\n")
        assert config.classes["separator"] == frozenset(" ")

    def test_backslash_and_s_round_trip(self):
        # A class holding a literal backslash next to the letter s must not
        # collapse into an escaped space.
        config = RuleConfig(classes={"punct_standalone": frozenset("\\s")})
        parsed = parse_rules(format_rules(config))
        assert parsed.classes["punct_standalone"] == frozenset("\\s")

    def test_comments_and_blanks(self):
        config = parse_rules("# comment\n\nclass lowercase ab  # trailing\n")
        assert config.classes["lowercase"] == frozenset("ab")

    def test_bad_directive(self):
        with pytest.raises(InvalidRule):
            parse_rules("wibble lowercase ab\n")

    def test_bad_rule_value(self):
        with pytest.raises(InvalidRule):
            parse_rules("rule line_start_capital maybe\n")
        with pytest.raises(InvalidRule):
            parse_rules("rule attach_punctuation sometimes\n")
        with pytest.raises(InvalidRule):
            parse_rules("rule unknown_rule on\n")


class TestDecode:
    @given(st.integers(0, 10_000), st.integers(1, 6))
    @settings(max_examples=30)
    def test_unconstrained_equals_brute_force(self, seed, n_frames):
        m = random_matrix(np.random.default_rng(seed), AB2, n_frames)
        hyp = decode_expression(m, accept_all_model(AB2), beam_width=None)
        scores = enumerate_string_probs(m)
        assert hyp.text == argmax_string(scores, AB2)
        assert math.exp(hyp.score) == pytest.approx(scores[hyp.text], rel=1e-9)

    def test_constrained_to_a_star(self):
        model = ExpressionModel(
            start="s",
            transitions={("s", "A"): "s"},
            accepting=frozenset({"s"}),
            symbol_classes={"a": "A", "b": "B"},
        )
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = random_matrix(rng, AB2, 5)
            hyp = decode_expression(m, model, beam_width=None)
            assert set(hyp.text) <= {"a"}
            scores = enumerate_string_probs(m)
            accepted = {t: p for t, p in scores.items() if set(t) <= {"a"}}
            assert hyp.text == argmax_string(accepted, AB2)

    def test_epsilon_only_model(self):
        model = ExpressionModel(
            start="s",
            transitions={},
            accepting=frozenset({"s"}),
            symbol_classes={"a": "A", "b": "B"},
        )
        m = ConfidenceMatrix([[0.5, 0.4, 0.1]], AB2)
        assert decode_expression(m, model, beam_width=None).text == ""

    def test_no_accepted_string(self):
        # Only "b...": but b has zero probability everywhere.
        model = ExpressionModel(
            start="s",
            transitions={("s", "B"): "t", ("t", "B"): "t"},
            accepting=frozenset({"t"}),
            symbol_classes={"a": "A", "b": "B"},
        )
        m = ConfidenceMatrix([[0.9, 0.0, 0.1]] * 2, AB2)
        with pytest.raises(NoAcceptedString):
            decode_expression(m, model, beam_width=None)

    @given(st.integers(0, 10_000))
    @settings(max_examples=50)
    def test_beamed_outputs_are_accepted(self, seed):
        rng = np.random.default_rng(seed)
        model = random_fsa(rng, AB2)
        m = random_matrix(rng, AB2, int(rng.integers(1, 7)))
        try:
            hyp = decode_expression(m, model, beam_width=4)
        except NoAcceptedString:
            return
        assert model.accepts(hyp.text)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_beam_width_monotone_score(self, seed):
        rng = np.random.default_rng(seed)
        model = random_fsa(rng, AB2)
        m = random_matrix(rng, AB2, int(rng.integers(1, 7)))
        scores = []
        for beam in (2, 8, None):
            try:
                scores.append(decode_expression(m, model, beam_width=beam).score)
            except NoAcceptedString:
                scores.append(float("-inf"))
        assert scores[0] <= scores[1] + 1e-12
        assert scores[1] <= scores[2] + 1e-12

    @given(st.integers(0, 10_000))
    @settings(max_examples=40)
    def test_exact_beam_matches_brute_force_on_random_fsa(self, seed):
        rng = np.random.default_rng(seed)
        model = random_fsa(rng, AB2)
        m = random_matrix(rng, AB2, int(rng.integers(1, 7)))
        scores = enumerate_string_probs(m)
        accepted = {t: p for t, p in scores.items() if model.accepts(t)}
        if not accepted:
            with pytest.raises(NoAcceptedString):
                decode_expression(m, model, beam_width=None)
            return
        hyp = decode_expression(m, model, beam_width=None)
        assert hyp.text == argmax_string(accepted, AB2)
        assert math.exp(hyp.score) == pytest.approx(accepted[hyp.text], rel=1e-9)

    def test_returned_text_accepted_by_default_model(self):
        rng = np.random.default_rng(123)
        rows = rng.dirichlet(np.ones(len(ALPHA)), size=12)
        m = ConfidenceMatrix(rows, ALPHA)
        hyp = decode_expression(m, DEFAULT_MODEL, beam_width=16)
        assert DEFAULT_MODEL.accepts(hyp.text)
