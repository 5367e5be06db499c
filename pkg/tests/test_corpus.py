"""Tokenizers, sample splitting, and manifest validation."""

import json

import pytest

from chunknet.corpus import (CorpusError, SplitSpec, load_manifest,
                             load_test_items, load_training_samples,
                             split_samples, tokenize, tokenize_chess_rows,
                             tokenize_music_frames, tokenize_words)

GOLDEN_WORDS = (
    "the quick brown fox",
    ["the", "quick", "brown", "fox"],
)


class TestWordTokenizer:
    def test_whitespace_split(self):
        assert tokenize_words(GOLDEN_WORDS[0]).tokens == GOLDEN_WORDS[1]

    def test_empty_text(self):
        assert tokenize_words("").tokens == []

    def test_punctuation_and_case_preserved(self):
        # nothing is removed from the raw text
        tokens = tokenize_words("No, Sir! he said.\n  (Twice.)").tokens
        assert tokens == ["No,", "Sir!", "he", "said.", "(Twice.)"]

    def test_determinism_golden(self):
        text = "alpha beta\n gamma\t delta  epsilon"
        assert tokenize_words(text).tokens == tokenize_words(text).tokens == \
            ["alpha", "beta", "gamma", "delta", "epsilon"]


class TestCharTokenizer:
    def test_letters(self):
        assert tokenize("chars", "Liverpool").tokens == list("Liverpool")

    def test_whitespace_dropped(self):
        assert tokenize("logic_bits", "1 0 0 0").tokens == list("1000")
        assert tokenize("logic_bits", "1000").tokens == list("1000")


class TestMusicTokenizer:
    def test_single_notes_in_sequence(self):
        stream = tokenize_music_frames("A3 | C4 | E4")
        assert stream.tokens == ["A3", "C4", "E4"]
        assert len(stream.measure_starts) == 3

    def test_chord_frame_is_one_token(self):
        assert tokenize_music_frames("A3C4E4").tokens == ["A3C4E4"]

    def test_empty_measure_adds_no_tokens(self):
        stream = tokenize_music_frames("|")
        assert stream.tokens == []
        assert len(stream.measure_starts) == 2

    def test_accidentals_and_multi_digit_octaves(self):
        assert tokenize_music_frames("C#4 Bb2 A10").tokens == \
            ["C#4", "Bb2", "A10"]

    def test_malformed_frame_reports_position(self):
        with pytest.raises(CorpusError) as err:
            tokenize_music_frames("A3 C4\nE4 H9")
        assert "line 2" in str(err.value)


class TestChessTokenizer:
    BOARD = "\n".join([
        "rnbqkbnr",
        "pppp.ppp",
        "........",
        "....p...",
        "....P...",
        "........",
        "PPPP.PPP",
        "RNBQKBNR",
    ])

    def test_one_token_per_row(self):
        tokens = tokenize_chess_rows(self.BOARD).tokens
        assert tokens[0] == "rnbqkbnr"
        assert tokens[2] == "........"
        assert len(tokens) == 8

    def test_positions_separated_by_blank_lines(self):
        two = self.BOARD + "\n\n" + self.BOARD
        assert len(tokenize_chess_rows(two).tokens) == 16

    def test_short_row_rejected(self):
        with pytest.raises(CorpusError):
            tokenize_chess_rows("rnbqkbn\n" + "........\n" * 7)

    def test_incomplete_position_rejected(self):
        with pytest.raises(CorpusError):
            tokenize_chess_rows("........\n........")


class TestSplitting:
    def test_word_windows_keep_the_remainder(self):
        stream = tokenize_words(" ".join(f"w{i}" for i in range(45)))
        bodies = split_samples(stream, SplitSpec("words", 20))
        assert [len(b) for b in bodies] == [20, 20, 5]

    def test_measure_windows(self):
        stream = tokenize_music_frames("A3 B3 | C4 | D4 E4")
        bodies = split_samples(stream, SplitSpec("measures", 2))
        assert bodies == [["A3", "B3", "C4"], ["D4", "E4"]]

    def test_whole(self):
        stream = tokenize_words("a b c")
        assert split_samples(stream, SplitSpec("whole")) == [["a", "b", "c"]]

    def test_lossless_concatenation(self):
        stream = tokenize_words(" ".join(f"w{i}" for i in range(53)))
        for size in (1, 7, 20, 60):
            bodies = split_samples(stream, SplitSpec("words", size))
            flat = [t for b in bodies for t in b]
            assert flat == stream.tokens

    def test_bad_split_spec(self):
        with pytest.raises(CorpusError):
            SplitSpec("words", 0)
        with pytest.raises(CorpusError):
            SplitSpec("sentences", 3)


def write_manifest_doc(tmp_path, doc):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def valid_doc(tmp_path):
    (tmp_path / "a.txt").write_text("one two three four", encoding="utf-8")
    (tmp_path / "b.txt").write_text("five six seven eight", encoding="utf-8")
    (tmp_path / "t.txt").write_text("one two", encoding="utf-8")
    return {
        "schema_version": 1,
        "name": "demo",
        "tokenizer": "words",
        "split": {"unit": "words", "size": 2},
        "categories": [
            {"label": "A", "training_files": ["a.txt"],
             "test_files": ["t.txt"]},
            {"label": "B", "training_files": ["b.txt"], "test_files": []},
        ],
    }


class TestManifest:
    def test_load_and_build_samples(self, tmp_path):
        manifest = load_manifest(write_manifest_doc(tmp_path,
                                                    valid_doc(tmp_path)))
        samples = load_training_samples(manifest)
        assert [s.visual.tokens for s in samples] == [
            ("one", "two"), ("three", "four"),
            ("five", "six"), ("seven", "eight")]
        assert [s.label.tokens for s in samples] == [
            ("A",), ("A",), ("B",), ("B",)]
        items = load_test_items(manifest)
        assert len(items) == 1
        assert items[0].true_label == "A"
        assert items[0].stimulus.tokens == ("one", "two")

    def test_duplicate_labels_rejected(self, tmp_path):
        doc = valid_doc(tmp_path)
        doc["categories"][1]["label"] = "A"
        with pytest.raises(CorpusError, match="duplicate"):
            load_manifest(write_manifest_doc(tmp_path, doc))

    def test_missing_file_rejected_before_training(self, tmp_path):
        doc = valid_doc(tmp_path)
        doc["categories"][0]["training_files"] = ["gone.txt"]
        with pytest.raises(CorpusError, match="missing file"):
            load_manifest(write_manifest_doc(tmp_path, doc))

    def test_unknown_schema_version_rejected(self, tmp_path):
        doc = valid_doc(tmp_path)
        doc["schema_version"] = 99
        with pytest.raises(CorpusError, match="schema_version"):
            load_manifest(write_manifest_doc(tmp_path, doc))

    def test_unknown_tokenizer_rejected(self, tmp_path):
        doc = valid_doc(tmp_path)
        doc["tokenizer"] = "phonemes"
        with pytest.raises(CorpusError, match="tokenizer"):
            load_manifest(write_manifest_doc(tmp_path, doc))
