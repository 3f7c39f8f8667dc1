"""Smoke test: drive the whole pipeline through the Python bindings."""

import pytest

import ltskit

LEXICON = (
    "an\t\tAE1 N\n"
    "and\t\tAE1 N D\n"
    "bad\t\tB AE1 D\n"
    "ban\t\tB AE1 N\n"
    "bat\t\tB AE1 T\n"
    "batt\t\tB AE1 T\n"
    "tab\t\tT AE1 B\n"
    "tan\t\tT AE1 N\n"
)


def aligned_corpus():
    entries, rejects, convention = ltskit.parse_lexicon(LEXICON, format="tsv")
    assert rejects == []
    assert convention == "digits"
    assert len(entries) == 8
    assert entries[0] == ("an", "", ["AE1", "N"])
    aligned, alignments, failed = ltskit.align(entries, convention="digits")
    assert failed == []
    assert len(aligned) == len(alignments) == len(entries)
    for (word, _, _), out in zip(aligned, alignments):
        assert len(out) == len(word)
    return aligned, alignments


def test_parse_rejects_bad_lines():
    entries, rejects, _ = ltskit.parse_lexicon("ok\t\tAE1\nbogus-line\n")
    assert len(entries) == 1
    (line_no, reason, raw) = rejects[0]
    assert line_no == 2
    assert raw == "bogus-line"
    assert reason


def test_train_transcribe_evaluate():
    aligned, alignments = aligned_corpus()
    model = ltskit.train(aligned, alignments, convention="digits")
    assert model.size > 0
    assert "a" in model.alphabet

    assert model.transcribe("bat") == ["B", "AE1", "T"]
    raw = model.transcribe_raw("batt")
    assert len(raw) == 4  # one slot per letter, epsilon still visible
    assert model.transcribe("batt") == ["B", "AE1", "T"]

    metrics = ltskit.evaluate(model, aligned, alignments)
    assert metrics["words"] == 8
    assert metrics["word_acc_stress"] == 100.0
    assert metrics["phone_acc"] == 100.0

    clone = ltskit.Model.deserialize(model.serialize())
    assert clone.serialize() == model.serialize()
    assert clone.transcribe("tan") == model.transcribe("tan")


def test_unknown_letters():
    aligned, alignments = aligned_corpus()
    model = ltskit.train(aligned, alignments, convention="digits")
    with pytest.raises(ltskit.DataError):
        model.transcribe("quiz")
    assert model.transcribe("quiz", skip_unknown=True) == []


def test_bad_arguments_raise_value_error():
    with pytest.raises(ltskit.DataError):
        ltskit.parse_lexicon("x", format="bogus")
    assert issubclass(ltskit.DataError, ValueError)


def test_compress_and_lookup():
    entries = [
        ("an", "", ["AE1", "N"]),
        ("ban", "", ["B", "AE1", "N"]),
        ("zz", "", ["ZH", "ZH"]),  # unalignable: no alignment supplied
    ]
    alignments = [["AE1", "N"], ["B", "AE1", "N"], None]
    lex = ltskit.compress(entries, alignments, convention="digits")

    stats = lex.stats
    assert stats["entry_count"] == 3
    assert stats["unalignable_count"] == 1
    assert stats["exception_count"] == 1
    assert stats["nodes"] == lex.model.size

    assert lex.lookup("an") == [["AE1", "N"]]    # via the trees
    assert lex.lookup("zz") == [["ZH", "ZH"]]    # via the exceptions
    assert "zz" in lex.exceptions_tsv()
