import random
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from common.errors import CountExceedsCorpus, EmptyTrainingSet, InvalidCorpus, OutOfVocabularyToken
from cstyle.models import FeatureCounts, FeatureTaxonomy
from cstyle.selector import select_features
from represent.models import EMBEDDING_DIM, MAX_SEQUENCE_LENGTH, FeatureVector, NRVector
from represent.neural import NeuralPairFeaturizer, represent_nr, train_embeddings
from represent.statistical import fe, represent_sr
from snapshot.models import CommitRef, CommitSnapshot
from snapshot.utils import read_source

TAXONOMY = FeatureTaxonomy.load()


def make_counts(sequence: list[str], index: int = 0, corpus_chars: int = 1000) -> FeatureCounts:
    observed = Counter(sequence)
    commit_hash = f"{index % 16:x}" * 40
    return FeatureCounts(
        key=commit_hash,
        commit=CommitRef(hash=commit_hash, index=index),
        corpus_chars=corpus_chars,
        per_type={t: observed.get(t, 0) for t in TAXONOMY.types},
        token_sequence=sequence,
    )


@pytest.fixture(scope="module")
def golden_counts() -> list[FeatureCounts]:
    root = Path(__file__).parent / "fixtures" / "golden"
    counts = []
    for i, source in enumerate(sorted(root.glob("*.java"))):
        text = read_source(source)
        snapshot = CommitSnapshot(
            commit=CommitRef(hash=f"{i % 16:x}" * 40, index=i),
            root=root,
            files=(source.name,),
            total_files=1,
            total_loc=0,
            total_chars=len(text),
        )
        counts.append(select_features(snapshot, TAXONOMY))
    return counts


class TestFE:
    def test_reference_value(self):
        assert fe(10, 1000) == 2.0

    def test_zero_count(self):
        assert fe(0, 1000) == 0.0

    def test_whole_corpus(self):
        assert fe(1000, 1000) == 0.0

    def test_invalid_corpus(self):
        with pytest.raises(InvalidCorpus):
            fe(1, 0)

    def test_count_exceeds_corpus(self):
        with pytest.raises(CountExceedsCorpus):
            fe(11, 10)

    def test_antitone_in_count(self):
        rng = random.Random(7)
        for _ in range(1000):
            n = rng.randint(2, 1_000_000)
            a, b = sorted(rng.sample(range(1, n + 1), 2))
            assert fe(a, n) > fe(b, n)

    def test_ratio_invariance(self):
        rng = random.Random(11)
        for _ in range(1000):
            n = rng.randint(1, 100_000)
            a = rng.randint(0, n)
            k = rng.randint(1, 10_000)
            assert fe(k * a, k * n) == fe(a, n)


class TestStatisticalRepresentation:
    def test_vector(self):
        counts = make_counts(["IfStatement"] * 10 + ["For"] * 100)
        vector = represent_sr(counts, TAXONOMY)
        assert len(vector.values) == 42
        assert vector.values[TAXONOMY.types.index("IfStatement")] == 2.0
        assert vector.values[TAXONOMY.types.index("For")] == pytest.approx(1.0)
        assert sum(1 for v in vector.values if v == 0.0) == 40
        assert set(vector.timing.seconds_per_class) == set(TAXONOMY.classes)

    def test_empty_corpus(self):
        with pytest.raises(InvalidCorpus):
            represent_sr(make_counts([], corpus_chars=0), TAXONOMY)

    def test_families(self):
        vector = represent_sr(make_counts(["MethodInvocation"] * 10), TAXONOMY)
        families = vector.by_family(TAXONOMY)
        assert len(families["syntactic"]) == 20
        assert len(families["lexical"]) == 22
        assert families["lexical"][TAXONOMY.classes["Invocations"].types.index("MethodInvocation")] == 2.0

    def test_feature_vector(self):
        vector = represent_sr(make_counts(["IfStatement"] * 10), TAXONOMY)
        features = FeatureVector.from_sr(vector)
        assert features.mode == "sr"
        assert features.values == vector.values


class TestEmbeddings:
    def test_vocabulary_and_shape(self, golden_counts):
        model = train_embeddings([c.token_sequence for c in golden_counts], seed=42)
        observed = {t for c in golden_counts for t in c.token_sequence}
        assert set(model.vocabulary) == observed
        assert len(model.vocabulary) <= 42
        assert np.asarray(model.vectors).shape == (len(observed), EMBEDDING_DIM)

    def test_seeded_runs_are_identical(self, golden_counts):
        sequences = [c.token_sequence for c in golden_counts]
        first = train_embeddings(sequences, seed=42)
        second = train_embeddings(sequences, seed=42)
        assert first.vocabulary == second.vocabulary
        assert first.vectors == second.vectors

    def test_seed_changes_vectors(self, golden_counts):
        sequences = [c.token_sequence for c in golden_counts]
        assert train_embeddings(sequences, seed=1).vectors != train_embeddings(sequences, seed=2).vectors

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSet):
            train_embeddings([])
        with pytest.raises(EmptyTrainingSet):
            train_embeddings([[], []])

    def test_single_repeated_token(self):
        model = train_embeddings([["IfStatement"] * 8], seed=3)
        assert model.vocabulary == {"IfStatement": 0}
        assert len(model.vector("IfStatement")) == EMBEDDING_DIM


class TestNeuralRepresentation:
    def test_block_shape_and_padding(self, golden_counts):
        model = train_embeddings([c.token_sequence for c in golden_counts], seed=42)
        for counts in golden_counts:
            vector = represent_nr(counts, model)
            block = np.asarray(vector.block)
            assert block.shape == (MAX_SEQUENCE_LENGTH, EMBEDDING_DIM)
            assert vector.length == min(len(counts.token_sequence), MAX_SEQUENCE_LENGTH)
            assert not block[vector.length :].any()

    def test_rows_follow_sequence(self):
        sequence = ["ClassDeclaration", "MethodDeclaration", "ReturnStatement"]
        counts = make_counts(sequence)
        model = train_embeddings([sequence], seed=3)
        vector = represent_nr(counts, model)
        for row, token in enumerate(sequence):
            assert vector.block[row] == model.vector(token)

    def test_truncates_long_sequences(self):
        sequence = ["IfStatement", "BlockStatement"] * 50
        counts = make_counts(sequence)
        vector = represent_nr(counts, train_embeddings([sequence], seed=3))
        assert vector.length == MAX_SEQUENCE_LENGTH
        assert np.asarray(vector.block).any(axis=1).all()

    def test_empty_sequence(self):
        model = train_embeddings([["IfStatement"]], seed=3)
        vector = represent_nr(make_counts([]), model)
        assert vector.length == 0
        assert not np.asarray(vector.block).any()
        assert vector.pooled() == [0.0] * EMBEDDING_DIM

    def test_out_of_vocabulary(self):
        model = train_embeddings([["IfStatement"]], seed=3)
        counts = make_counts(["IfStatement", "For"])
        with pytest.raises(OutOfVocabularyToken):
            represent_nr(counts, model)
        vector = represent_nr(counts, model, on_oov="zero")
        assert vector.length == 2
        assert any(vector.block[0])
        assert not any(vector.block[1])

    def test_padding_must_be_zero(self):
        block = [[0.0] * EMBEDDING_DIM for _ in range(MAX_SEQUENCE_LENGTH)]
        block[5][0] = 1.0
        with pytest.raises(ValueError):
            NRVector(commit=CommitRef(hash="a" * 40, index=0), key="a" * 40, block=block, length=2)

    def test_pooling(self):
        sequence = ["IfStatement", "For"]
        model = train_embeddings([sequence], seed=3)
        vector = represent_nr(make_counts(sequence), model)
        assert len(FeatureVector.from_nr(vector).values) == MAX_SEQUENCE_LENGTH * EMBEDDING_DIM
        pooled = FeatureVector.from_nr(vector, pooling="mean").values
        expected = (np.asarray(model.vector("IfStatement")) + np.asarray(model.vector("For"))) / 2
        assert np.allclose(pooled, expected)


class TestNeuralPairFeaturizer:
    def test_test_side_unseen_tokens_are_zero(self):
        train = make_counts(["ClassDeclaration", "MethodDeclaration"], index=0)
        test = make_counts(["ClassDeclaration", "LambdaExpression"], index=1)
        featurizer = NeuralPairFeaturizer([train, test], seed=5)
        train_rows, test_row = featurizer([train.key], test.key)

        assert len(train_rows) == 1
        assert len(train_rows[0]) == len(test_row) == MAX_SEQUENCE_LENGTH * EMBEDDING_DIM
        assert test_row[:EMBEDDING_DIM] == train_rows[0][:EMBEDDING_DIM]
        assert not any(test_row[EMBEDDING_DIM : 2 * EMBEDDING_DIM])
        assert featurizer.seconds > 0
