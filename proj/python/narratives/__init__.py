"""Narrative topology and dynamics toolkit.

Thin wrapper over the C++ core. The heavy lifting (Gibbs sampling, SGNS
training, force layouts, the staged pipeline) happens in `narratives._core`.
"""

from ._core import (
    Embeddings,
    LdaModel,
    bm25_sentence_graph,
    cosine,
    default_lemma_phrases,
    fit_lda,
    fit_regression,
    fruchterman_reingold,
    keyword_cooccurrence,
    lemma_matches,
    narrative_graph,
    radialize,
    run_pipeline,
    split_sentences,
    term_frequency,
    textrank,
    tfidf_weight,
    tokenize_text,
    train_word2vec,
    verlet_layout,
    __version__,
)

__all__ = [
    "Embeddings",
    "LdaModel",
    "bm25_sentence_graph",
    "cosine",
    "default_lemma_phrases",
    "fit_lda",
    "fit_regression",
    "fruchterman_reingold",
    "keyword_cooccurrence",
    "lemma_matches",
    "narrative_graph",
    "radialize",
    "run_pipeline",
    "split_sentences",
    "term_frequency",
    "textrank",
    "tfidf_weight",
    "tokenize_text",
    "train_word2vec",
    "verlet_layout",
    "__version__",
]
