import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirty_encode.errors import ConfigError, DataError
from dirty_encode.text_similarity import (EditWeights, SimilarityMeasure, implicit_kernel,
                                          jaro, levenshtein_distance, ngrams, pairwise_similarity,
                                          sim_jaro_winkler, sim_levenshtein_ratio, sim_ngram,
                                          similarity_histogram)

from oracles import all_strings, edit_search, jaro_reference, lcs_length, ngram_sim_reference

MEASURES = [SimilarityMeasure("levenshtein_ratio"), SimilarityMeasure("jaro_winkler"),
            SimilarityMeasure("ngram", n=3), SimilarityMeasure("ngram", n=2),
            SimilarityMeasure("exact_match")]
text = st.text(alphabet="abcé -.", max_size=12)


class TestNgrams:
    def test_paris(self):
        assert ngrams("Paris", 3) == {"Par", "ari", "ris"}

    def test_short_string(self):
        assert ngrams("", 3) == set()
        assert ngrams("ab", 3) == set()

    def test_set_semantics(self):
        assert ngrams("aaaa", 2) == {"aa"}

    def test_code_points_not_bytes(self):
        assert ngrams("été", 2) == {"ét", "té"}

    def test_bad_n(self):
        with pytest.raises(ConfigError):
            ngrams("abc", 0)


class TestLevenshtein:
    def test_identity(self):
        assert levenshtein_distance("abc", "abc") == 0

    def test_insertions(self):
        assert levenshtein_distance("", "ab") == 2

    def test_kitten_sitting(self):
        assert levenshtein_distance("kitten", "sitting") == 5

    def test_kitten_sitting_by_search(self):
        # any edit path of cost <= 4 splits into a prefix <= 2 and a suffix <= 3
        alphabet = "kitensg"
        near_a = edit_search("kitten", alphabet, 8, radius=2)
        near_b = edit_search("sitting", alphabet, 8, radius=3)
        assert min(near_a[s] + near_b[s] for s in near_a if s in near_b) == 5

    def test_custom_weights(self):
        w = EditWeights(insert=1, delete=1, replace=1)
        assert levenshtein_distance("kitten", "sitting", w) == 3

    def test_negative_weight_rejected(self):
        with pytest.raises(ConfigError):
            EditWeights(replace=-1)

    def test_matches_search_small_alphabet(self):
        strings = all_strings("ab", 4)
        for s in strings:
            dist = edit_search(s, "ab", 4)
            for t in strings:
                assert levenshtein_distance(s, t) == dist[t]

    @pytest.mark.parametrize("w", [(1, 1, 1), (2, 1, 3), (1, 3, 1)])
    def test_weighted_matches_search(self, w):
        strings = all_strings("ab", 3)
        weights = EditWeights(*w)
        for s in strings:
            # room for detours through longer strings under asymmetric weights
            dist = edit_search(s, "ab", 5, *w)
            for t in strings:
                assert levenshtein_distance(s, t, weights) == dist[t]

    @given(text, text)
    def test_lcs_identity(self, a, b):
        assert levenshtein_distance(a, b) == len(a) + len(b) - 2 * lcs_length(a, b)


class TestRatioJaro:
    def test_ratio_examples(self):
        assert sim_levenshtein_ratio("abc", "abc") == 1
        assert sim_levenshtein_ratio("kitten", "sitting") == pytest.approx(8 / 13, abs=0)
        assert sim_levenshtein_ratio("a", "b") == 0
        assert sim_levenshtein_ratio("", "") == 1

    def test_jaro_examples(self):
        assert jaro("abc", "abc") == 1
        assert jaro("MARTHA", "MARHTA") == pytest.approx(17 / 18, rel=1e-15)
        assert jaro("abc", "xyz") == 0
        assert jaro("", "") == 1
        assert jaro("", "a") == 0

    def test_jaro_winkler_examples(self):
        assert sim_jaro_winkler("abc", "abc", 0.1) == 1
        expected = 17 / 18 + 3 * 0.1 * (1 - 17 / 18)
        assert sim_jaro_winkler("MARTHA", "MARHTA", 0.1) == pytest.approx(expected, rel=1e-15)
        assert round(sim_jaro_winkler("MARTHA", "MARHTA", 0.1), 4) == 0.9611
        assert sim_jaro_winkler("abc", "xyz", 0.1) == 0

    def test_jaro_winkler_prefix_cap(self):
        j = jaro("abcdefgh", "abcdefgx")
        assert sim_jaro_winkler("abcdefgh", "abcdefgx", 0.1) == pytest.approx(j + 0.4 * (1 - j))

    def test_jaro_winkler_p_range(self):
        with pytest.raises(ConfigError):
            sim_jaro_winkler("a", "b", 0.3)

    @given(text, text)
    def test_jaro_matches_reference(self, a, b):
        assert jaro(a, b) == pytest.approx(jaro_reference(a, b), abs=1e-15)


class TestNgramSimilarity:
    def test_paris_parisian(self):
        assert sim_ngram("Paris", "Parisian", 3) == 0.5

    def test_identical(self):
        assert sim_ngram("abc", "abc", 3) == 1
        assert sim_ngram("ab", "ab", 3) == 1

    def test_short_fallback(self):
        assert sim_ngram("ab", "ac", 3) == 0
        assert sim_ngram("", "abc", 3) == 0

    @given(text, text, st.integers(1, 4))
    def test_matches_reference(self, a, b, n):
        assert sim_ngram(a, b, n) == ngram_sim_reference(a, b, n)


class TestMeasureObject:
    @pytest.mark.parametrize("name,kind,n", [("ngram3", "ngram", 3), ("3gram", "ngram", 3),
                                             ("ngram2", "ngram", 2), ("lev_ratio", "levenshtein_ratio", 3),
                                             ("jaro_winkler", "jaro_winkler", 3), ("exact", "exact_match", 3)])
    def test_parse(self, name, kind, n):
        m = SimilarityMeasure.parse(name)
        assert (m.kind, m.n) == (kind, n)
        assert SimilarityMeasure.parse(m.name) == m

    def test_parse_unknown(self):
        with pytest.raises(ConfigError):
            SimilarityMeasure.parse("cosine")

    def test_dict_round_trip(self):
        for m in MEASURES:
            assert SimilarityMeasure.from_dict(m.to_dict()) == m


@pytest.mark.parametrize("measure", MEASURES, ids=lambda m: m.name)
class TestAxioms:
    @given(a=text, b=text)
    @settings(max_examples=200)
    def test_symmetry_identity_range(self, measure, a, b):
        s = measure(a, b)
        assert s == measure(b, a)
        assert 0.0 <= s <= 1.0
        assert measure(a, a) == 1.0

    def test_pairwise_matches_scalar(self, measure):
        rng = np.random.default_rng(3)
        words = ["".join(rng.choice(list("abcd "), size=rng.integers(0, 8))) for _ in range(40)]
        M = pairwise_similarity(words[:25], words[15:], measure)
        expected = np.array([[measure(a, b) for b in words[15:]] for a in words[:25]])
        assert np.array_equal(M, expected)

    def test_pairwise_chunking_is_bit_identical(self, measure):
        rng = np.random.default_rng(4)
        words = ["".join(rng.choice(list("xyz."), size=rng.integers(1, 9))) for _ in range(60)]
        full = pairwise_similarity(words, words[:30], measure)
        parts = np.vstack([pairwise_similarity(words[i:i + 7], words[:30], measure)
                           for i in range(0, 60, 7)])
        assert np.array_equal(full, parts)


class TestPairwise:
    def test_examples(self):
        assert pairwise_similarity(["a"], ["a", "b"], SimilarityMeasure("exact_match")).tolist() == [[1, 0]]
        assert pairwise_similarity(["Paris"], ["Paris", "Parisian"],
                                   SimilarityMeasure("ngram", n=3)).tolist() == [[1, 0.5]]
        assert pairwise_similarity(["x"], ["x"], SimilarityMeasure("levenshtein_ratio")).tolist() == [[1]]

    def test_exact_match_is_identity_matrix(self):
        cats = ["a", "b", "c"]
        M = pairwise_similarity(cats, cats, SimilarityMeasure("exact_match"))
        assert np.array_equal(M, np.eye(3))

    def test_empty_cols_rejected(self):
        with pytest.raises(DataError):
            pairwise_similarity(["a"], [], SimilarityMeasure("exact_match"))


class TestImplicitKernel:
    def test_identical_strings_give_squared_norm(self):
        m = SimilarityMeasure("ngram", n=3)
        dom = ["paris", "parisian", "london"]
        row = pairwise_similarity(["parisi"], dom, m)[0]
        assert implicit_kernel("parisi", "parisi", dom, m) == pytest.approx(row @ row, abs=1e-15)

    def test_one_hot_orthogonal(self):
        assert implicit_kernel("a", "b", ["a", "b"], SimilarityMeasure("exact_match")) == 0

    def test_paris_example(self):
        m = SimilarityMeasure("ngram", n=3)
        assert implicit_kernel("Paris", "Parisian", ["Paris", "Parisian"], m) == 1.0

    def test_empty_domain(self):
        with pytest.raises(DataError):
            implicit_kernel("a", "b", [], SimilarityMeasure("exact_match"))


class TestHistogram:
    def test_two_categories_exact(self):
        h = similarity_histogram(["a", "b", "a"], SimilarityMeasure("exact_match"), n_pairs=50)
        assert h.counts.sum() == 50
        assert h.counts[0] == 50
        assert h.median == 0

    def test_never_pairs_with_self(self):
        h = similarity_histogram(["aaa", "bbb"], SimilarityMeasure("levenshtein_ratio"), n_pairs=100)
        assert np.all(h.values == 0)

    def test_degenerate(self):
        with pytest.raises(DataError, match="degenerate"):
            similarity_histogram(["a", "a"], SimilarityMeasure("exact_match"))

    def test_seeded(self):
        cats = [f"w{i}x" for i in range(30)]
        m = SimilarityMeasure("levenshtein_ratio")
        a = similarity_histogram(cats, m, n_pairs=200, seed=5)
        b = similarity_histogram(cats, m, n_pairs=200, seed=5)
        assert np.array_equal(a.values, b.values)

    def test_ngram_median_not_above_levenshtein(self):
        rng = np.random.default_rng(0)
        words = ["".join(rng.choice(list("abcdefghij"), size=rng.integers(4, 12)))
                 for _ in range(300)]
        g = similarity_histogram(words, SimilarityMeasure("ngram", n=3), seed=1)
        lev = similarity_histogram(words, SimilarityMeasure("levenshtein_ratio"), seed=1)
        assert g.median <= lev.median

    def test_tsv(self):
        h = similarity_histogram(["ab", "cd", "ef"], SimilarityMeasure("exact_match"),
                                 n_pairs=10, bins=4)
        lines = h.to_tsv().splitlines()
        assert lines[0] == "bin_left\tbin_right\tcount"
        assert len(lines) == 6
        assert lines[-1] == "median\t0"
