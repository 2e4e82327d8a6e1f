"""Neural representation: skip-gram embeddings of the matched node-type sequence."""

import logging
import time
import zlib
from typing import Literal, Optional, Sequence

import numpy as np
from gensim.models import Word2Vec

from common.errors import EmptyTrainingSet, OutOfVocabularyToken
from cstyle.models import FeatureCounts

from .models import (
    EMBEDDING_DIM,
    MAX_SEQUENCE_LENGTH,
    EmbeddingHyperparameters,
    EmbeddingModel,
    NRVector,
    Pooling,
    RepresentationTiming,
)

logger = logging.getLogger(__name__)

OovPolicy = Literal["error", "zero"]


def _stable_hash(text: str) -> int:
    # builtin str hash is salted per interpreter
    return zlib.crc32(text.encode("utf-8"))


def train_embeddings(
    sequences: Sequence[Sequence[str]],
    seed: int = 42,
    hyperparameters: Optional[EmbeddingHyperparameters] = None,
) -> EmbeddingModel:
    """
    Train a skip-gram, negative-sampling embedding over token sequences.

    A single worker thread keeps the result a pure function of the sequences,
    their order and the seed.

    Args:
        sequences: Token sequences, one per commit (or file).
        seed: Random seed for initialisation, negative sampling and downsampling.
        hyperparameters: Training settings; library defaults apart from dim and min count.

    Returns:
        EmbeddingModel: Vocabulary and its 32-dimensional vectors.
    """
    hp = hyperparameters or EmbeddingHyperparameters()
    corpus = [list(seq) for seq in sequences if len(seq) > 0]
    if not corpus:
        raise EmptyTrainingSet("Embedding training needs at least one non-empty sequence")

    model = Word2Vec(
        sentences=corpus,
        vector_size=hp.dim,
        window=hp.window,
        min_count=1,
        sg=1,
        hs=0,
        negative=hp.negative_samples,
        alpha=hp.learning_rate,
        min_alpha=hp.min_learning_rate,
        sample=hp.sample,
        epochs=hp.epochs,
        seed=seed,
        workers=1,
        hashfxn=_stable_hash,
    )
    vocabulary = {token: int(i) for token, i in model.wv.key_to_index.items()}
    vectors = np.asarray(model.wv.vectors, dtype=np.float64).tolist()
    logger.info(f"Trained embeddings over {len(corpus)} sequences, vocabulary of {len(vocabulary)}")
    return EmbeddingModel(vocabulary=vocabulary, vectors=vectors, seed=seed, hyperparameters=hp)


def represent_nr(counts: FeatureCounts, model: EmbeddingModel, on_oov: OovPolicy = "error") -> NRVector:
    """
    Look up the first 64 tokens of the sequence and zero-pad to a 64 x 32 block.

    Args:
        counts: Selected features; only the token sequence is used.
        model: Trained embeddings.
        on_oov: ``error`` raises on a token missing from the vocabulary,
            ``zero`` leaves its row at zero.

    Returns:
        NRVector: The padded block.
    """
    start = time.perf_counter()
    tokens = counts.token_sequence[:MAX_SEQUENCE_LENGTH]
    block = np.zeros((MAX_SEQUENCE_LENGTH, EMBEDDING_DIM))
    missing = set()
    for row, token in enumerate(tokens):
        if token in model.vocabulary:
            block[row] = model.vector(token)
        elif on_oov == "error":
            raise OutOfVocabularyToken(token)
        else:
            missing.add(token)
    if missing:
        logger.warning(f"{counts.key}: tokens outside the training vocabulary left at zero: {sorted(missing)}")

    # Zero rows for OOV tokens are still inside the populated prefix
    length = len(tokens)
    timing = RepresentationTiming(representation_seconds=time.perf_counter() - start)
    return NRVector(commit=counts.commit, key=counts.key, block=block.tolist(), length=length, timing=timing)


class NeuralPairFeaturizer:
    """
    Re-represent each rolling pair with embeddings trained on its training side only.

    The test commit is looked up in the training commits' model, so its
    representation never influences the model it is encoded with.
    """

    def __init__(
        self,
        counts: Sequence[FeatureCounts],
        seed: int = 42,
        hyperparameters: Optional[EmbeddingHyperparameters] = None,
        pooling: Pooling = "flatten",
    ):
        self.counts = {c.key: c for c in counts}
        self.seed = seed
        self.hyperparameters = hyperparameters
        self.pooling = pooling
        self.seconds = 0.0

    def __call__(self, train_keys: Sequence[str], test_key: str) -> tuple[list[list[float]], list[float]]:
        start = time.perf_counter()
        train_counts = [self.counts[k] for k in train_keys]
        model = train_embeddings([c.token_sequence for c in train_counts], self.seed, self.hyperparameters)
        train_features = [represent_nr(c, model).features(self.pooling) for c in train_counts]
        test_features = represent_nr(self.counts[test_key], model, on_oov="zero").features(self.pooling)
        self.seconds += time.perf_counter() - start
        return train_features, test_features
