"""Statistical and numerical primitives shared by the summarisation methods."""

from .clustering import KMeansResult, kmeans
from .distributions import TermDistribution, kl_divergence, term_distribution, tf_isf
from .embeddings import EmbeddingProvider, HashedEmbedding, HttpEmbedding, hashed_embedding
from .features import FEATURE_NAMES, raw_sentence_features, sentence_features
from .graph import pagerank
from .lda import LdaModel, lda_fit, lda_token_score
from .rbm import RbmModel, rbm_enhance, rbm_fit, reconstruction_error

__all__ = [
    "EmbeddingProvider",
    "FEATURE_NAMES",
    "HashedEmbedding",
    "HttpEmbedding",
    "KMeansResult",
    "LdaModel",
    "RbmModel",
    "TermDistribution",
    "hashed_embedding",
    "kl_divergence",
    "kmeans",
    "lda_fit",
    "lda_token_score",
    "pagerank",
    "raw_sentence_features",
    "rbm_enhance",
    "rbm_fit",
    "reconstruction_error",
    "sentence_features",
    "term_distribution",
    "tf_isf",
]
