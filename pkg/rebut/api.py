from rebut.corpus import Tweet, FactArticle, load_tweets, load_articles
from rebut.topics import TopicModel, TopicLabelTable, fit_lda, select_k, assign_all
from rebut.mapping import map_by_distance, map_by_keywords, map_by_tfidf, signatures
from rebut.annotate import Gazetteer, Lexicon, recognize, classify_sentiment
from rebut.similarity import WordVectorScorer, load_word_vectors, pair_score
from rebut.rebuttal import MatchCriteria, recommend_counter_tweets, tiered_recommend
from rebut.evaluate import run_evaluation, map_at_k, mrr_at_k
from rebut.config import PipelineConfig, load_config
from rebut.engine import Engine
