"""Skip-gram graph embeddings with interchangeable repulsion strategies."""

from ._core import (
    ClassifierConfig,
    CollapseResult,
    EdgeClassifier,
    EdgeSplit,
    ExactGradients,
    FrobeniusCheck,
    GradientReport,
    Graph,
    LemmaCheck,
    MetricReport,
    OptimizerKind,
    PairSet,
    RankConfig,
    RepulsionMode,
    SplitRatios,
    TraceRow,
    TrainConfig,
    WalkConfig,
    WeightVectorMode,
    auc_roc,
    average_clustering_coefficient,
    check_frobenius_identity,
    collapse_experiment,
    constriction,
    construct_constricted,
    evaluate_embeddings,
    exact_gradients,
    generate_erdos_renyi,
    generate_sbm,
    generate_walks,
    init_embeddings,
    lemma1_check,
    load_edge_list,
    load_embeddings_binary,
    load_embeddings_text,
    loss_negative,
    loss_negative_all,
    loss_positive,
    loss_regularizer,
    pairs_from_edges,
    pairs_from_walks,
    prop3_sweep,
    prop4_sweep,
    sample_non_edges,
    save_edge_list,
    save_embeddings_binary,
    save_embeddings_text,
    split_edges,
    train,
    train_classifier,
    train_with_trace,
    training_subgraph,
)

__all__ = [name for name in dir() if not name.startswith("_")]
