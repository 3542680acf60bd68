"""Curriculum learning for sentence sentiment classification, with sample
difficulty derived from SentiWordNet."""

from .corpus import Dataset, Example, load_dataset, load_sst_dir, load_tsv, parse_ptb_tree_line
from .curriculum import CurriculumSchedule, Strategy, phase_iterator, rank, schedule
from .embeddings import EmbeddingTable, embed_sequence, mean_pool, parse_glove
from .experiment import ExperimentConfig, RunReport, run_comparison, run_single
from .features import FeatureVector, extract, fit_normalizer, normalize
from .lexicon import SentimentLexicon, WordScore, lookup, parse_swn_file
from .models import AuxModel, DifficultyRanking, KimCNN, MeanEmbeddingMLP, difficulty_scores, train_aux

__version__ = "0.1.0"
