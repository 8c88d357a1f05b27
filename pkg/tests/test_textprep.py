from hypothesis import given, settings
from hypothesis import strategies as st

from debacer.corpus import select_agenda
from debacer.synth import POLITICAL_STATEMENTS
from debacer.textprep import (
    EMPTY_LEMMAS,
    LemmaTable,
    TokenizerConfig,
    default_lemma_table,
    default_stopwords,
    lemmatize,
    preprocess,
    remove_stopwords,
    tokenize,
)


def test_tokenize_sentence():
    assert tokenize("Tem a palavra, Sr. Deputado.") == ["tem", "palavra", "sr", "deputado"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_hyphen_and_digits():
    assert tokenize("guarda-chuva 2021") == ["guarda-chuva", "2021"]


def test_tokenize_min_len():
    assert tokenize("a bc d ef", TokenizerConfig(min_token_len=2)) == ["bc", "ef"]
    assert tokenize("a bc", TokenizerConfig(min_token_len=1)) == ["a", "bc"]


def test_remove_stopwords():
    assert remove_stopwords(["a", "palavra", "de", "ordem"], {"a", "de"}) == ["palavra", "ordem"]
    assert remove_stopwords(["x", "y"], set()) == ["x", "y"]
    assert remove_stopwords(["a", "de"], {"a", "de"}) == []


def test_lemmatize_rule_then_table():
    table = LemmaTable(table={"deputada": "deputado"}, suffix_rules=(("as", "a"),))
    assert lemmatize(["deputadas"], table) == ["deputado"]


def test_lemmatize_identity_fallback():
    table = LemmaTable(table={"x": "y"}, suffix_rules=(("zz", "z"),))
    assert lemmatize(["qwerty"], table) == ["qwerty"]


def test_lemmatize_longest_suffix_wins():
    table = LemmaTable(table={}, suffix_rules=(("s", ""), ("coes", "cao")))
    assert table.lemma("declaracoes") == "declaracao"


def test_lemmatize_never_empties():
    table = LemmaTable(table={}, suffix_rules=(("as", ""),))
    assert table.lemma("as") == "as"  # suffix == token: rule skipped


@given(st.lists(st.sampled_from(["deputadas", "palavra", "leis", "governo", "coisas"]),
                min_size=0, max_size=50))
@settings(max_examples=200)
def test_lemmatize_preserves_length(tokens):
    assert len(lemmatize(tokens, default_lemma_table())) == len(tokens)


def test_preprocess_composition():
    out = preprocess(
        "Tem a palavra, Sr. Deputado.",
        TokenizerConfig(),
        {"tem"},
        LemmaTable(table={"deputado": "deputado"}, suffix_rules=()),
    )
    assert out == ["palavra", "sr", "deputado"]


def test_preprocess_empty():
    assert preprocess("", TokenizerConfig(), default_stopwords(), default_lemma_table()) == []


def test_preprocess_idempotent_on_synthetic(synth_small):
    corpus, _ = synth_small
    cfg = TokenizerConfig()
    stop = default_stopwords()
    lemmas = default_lemma_table()
    for item in select_agenda(corpus, POLITICAL_STATEMENTS):
        for speech in item.speeches:
            once = preprocess(speech.text, cfg, stop, lemmas)
            twice = preprocess(" ".join(once), cfg, stop, lemmas)
            assert twice == once


def test_no_empty_tokens(synth_small):
    corpus, _ = synth_small
    cfg = TokenizerConfig()
    stop = default_stopwords()
    lemmas = default_lemma_table()
    for speech in corpus.iter_speeches():
        assert all(t for t in preprocess(speech.text, cfg, stop, lemmas))


def test_determinism():
    text = "Srs. Deputados, vamos mudar de assunto: declarações políticas!"
    runs = {tuple(preprocess(text, TokenizerConfig(), default_stopwords(), default_lemma_table()))
            for _ in range(5)}
    assert len(runs) == 1


def test_bundled_stopwords_survive_tokenizer():
    for word in default_stopwords():
        assert tokenize(word) == [word]


def test_monotone_shrinkage():
    tokens = tokenize("tem a palavra o senhor deputado para responder")
    filtered = remove_stopwords(tokens, default_stopwords())
    assert len(filtered) <= len(tokens)
    assert len(lemmatize(filtered, EMPTY_LEMMAS)) == len(filtered)
