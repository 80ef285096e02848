import numpy as np
import pytest

from svmelm.dataio import FeatureDataset, generate_synthetic_domains
from svmelm.exceptions import EmptyDataset, InsufficientClassSize, InvalidConfig, LengthMismatch
from svmelm.experiments import (
    FOUR_DA_DOMAINS,
    ExperimentConfig,
    MethodParams,
    Setting,
    accuracy,
    aggregate,
    index_datasets,
    make_split,
    run_cross_source_only,
    run_cross_source_target,
    run_protocol,
    run_single_domain,
    stratified_split,
    task_list,
)
from svmelm.numerics import RngStream

# hyperparameters matched to the synthetic blob scale
SYNTH_PARAMS = MethodParams(svm_sigma=4.0, kelm_sigma=4.0, elm_L=300)


class TestStratifiedSplit:
    def test_amazon_sized(self):
        labels = np.repeat(np.arange(1, 11), 96)[:958]
        tr, te = stratified_split(labels, 20, RngStream(1))
        assert tr.size == 200 and te.size == 758
        assert np.bincount(labels[tr]).tolist()[1:] == [20] * 10

    def test_partition(self):
        labels = np.repeat([1, 2, 3], [5, 7, 9])
        tr, te = stratified_split(labels, 4, RngStream(2))
        assert np.intersect1d(tr, te).size == 0
        assert np.array_equal(np.union1d(tr, te), np.arange(labels.size))

    def test_boundary_empty_test_class(self):
        labels = np.repeat([1, 2], [3, 6])
        tr, te = stratified_split(labels, 3, RngStream(3))
        assert not np.any(labels[te] == 1)

    def test_insufficient_names_class(self):
        labels = np.repeat([1, 2], [3, 6])
        with pytest.raises(InsufficientClassSize, match="class 1") as info:
            stratified_split(labels, 3, RngStream(3), min_test=1)
        assert info.value.label == 1

    def test_determinism(self):
        labels = np.repeat(np.arange(5), 30)
        a = stratified_split(labels, 8, RngStream(4, 1))
        b = stratified_split(labels, 8, RngStream(4, 1))
        c = stratified_split(labels, 8, RngStream(4, 2))
        assert np.array_equal(a[0], b[0])
        assert not np.array_equal(a[0], c[0])

    def test_accepts_dataset(self):
        ds = FeatureDataset("d", "d", "raw", np.zeros((6, 1)), [1, 1, 1, 2, 2, 2])
        tr, te = stratified_split(ds, 1, RngStream(0))
        assert tr.size == 2 and te.size == 4


class TestAccuracyAggregate:
    def test_accuracy(self):
        assert accuracy([1, 2, 3], [1, 2, 3]) == 1.0
        assert accuracy([1, 1], [2, 2]) == 0.0
        assert accuracy([1, 2, 3, 4], [1, 2, 3, 0]) == 0.75

    def test_accuracy_errors(self):
        with pytest.raises(LengthMismatch):
            accuracy([1], [1, 2])
        with pytest.raises(EmptyDataset):
            accuracy([], [])

    def test_aggregate(self):
        c = aggregate([0.9])
        assert (c.mean, c.std, c.runs) == (0.9, 0.0, 1)
        c = aggregate([0.8, 1.0])
        assert c.mean == pytest.approx(0.9) and c.std == pytest.approx(0.1)
        assert aggregate([0.7] * 20).std == 0.0
        with pytest.raises(EmptyDataset):
            aggregate([])


def four_da_like(n_classes=3, per_class=(24, 12, 14, 15), d=4):
    dss = generate_synthetic_domains(4, n_classes, d, list(per_class), 1.0, 5)
    return [
        FeatureDataset(dom, dom, "f6", ds.X, ds.labels) for dom, ds in zip(FOUR_DA_DOMAINS, dss)
    ]


class TestTasks:
    def test_four_da_column_order(self):
        tasks = task_list(2, FOUR_DA_DOMAINS)
        assert [t.label for t in tasks] == "A→D C→D W→D A→C W→C D→C D→A W→A C→A C→W D→W A→W".split()
        assert [t.label for t in task_list(1, FOUR_DA_DOMAINS)] == ["Amazon", "DSLR", "Webcam", "Caltech"]

    def test_synthetic_lexicographic(self):
        tasks = task_list(3, ["b", "a", "c"])
        assert [t.label for t in tasks] == ["a→b", "a→c", "b→a", "b→c", "c→a", "c→b"]

    def test_setting3_target_contribution(self):
        by_name = index_datasets(four_da_like())
        cfg = ExperimentConfig(setting=3, seed=1)
        for task in task_list(3, by_name):
            sp = make_split(cfg, task, by_name, 0)
            tgt = by_name[task.target]
            assert np.bincount(tgt.labels[sp.target_train]).tolist()[1:] == [3, 3, 3]
            assert sp.source_train.size == 3 * cfg.source_count(task.source)
            assert np.intersect1d(sp.target_train, sp.test).size == 0
            assert sp.target_train.size + sp.test.size == tgt.n

    def test_setting2_tests_whole_target(self):
        by_name = index_datasets(four_da_like())
        cfg = ExperimentConfig(setting=2, seed=1)
        task = task_list(2, by_name)[0]
        sp = make_split(cfg, task, by_name, 0)
        assert sp.test.size == by_name[task.target].n and sp.target_train.size == 0

    def test_default_counts_follow_table(self):
        cfg = ExperimentConfig(setting=1)
        assert [cfg.source_count(d) for d in FOUR_DA_DOMAINS] == [20, 8, 8, 8]
        assert cfg.source_count("synth0") == 8
        assert ExperimentConfig(setting=1, source_per_class={"synth0": 5}).source_count("synth0") == 5


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(methods=()), dict(methods=("foo",)), dict(splits=0), dict(threads=0),
         dict(target_per_class=0), dict(source_per_class={"a": 0})],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidConfig):
            ExperimentConfig(setting=1, **kwargs)

    def test_setting_coerced(self):
        assert ExperimentConfig(setting=2).setting is Setting.CROSS_SOURCE_ONLY


@pytest.fixture(scope="module")
def easy_domains():
    return generate_synthetic_domains(4, 4, 6, 20, 0.0, 2, center_spread=6.0)


def test_single_domain_easy_all_methods(easy_domains):
    cfg = ExperimentConfig(setting=1, splits=3, seed=0, layer="raw", params=SYNTH_PARAMS)
    tab = run_single_domain(cfg, easy_domains)
    assert tab.columns == ("synth0", "synth1", "synth2", "synth3")
    assert tab.methods == ("nn", "svm", "lssvm", "elm", "kelm")
    assert tab.complete
    for m in tab.methods:
        for c in tab.columns:
            assert tab.cell(m, c).mean >= 0.99
            assert tab.cell(m, c).runs == 3


def test_cross_settings_shape(easy_domains):
    cfg = ExperimentConfig(setting=1, methods=("nn", "kelm"), splits=2, layer="raw", params=SYNTH_PARAMS)
    assert len(run_cross_source_only(cfg, easy_domains).columns) == 12
    tab = run_cross_source_target(cfg, easy_domains)
    assert len(tab.columns) == 12
    # 8 per class from the source plus 3 per class from the target, 4 classes
    assert all(tr == 44 for tr, _ in tab.train_sizes.values())


def test_threads_do_not_change_results():
    dss = generate_synthetic_domains(3, 4, 6, 15, 2.0, 3)
    base = dict(setting=3, splits=3, seed=9, layer="raw", params=SYNTH_PARAMS)
    a = run_protocol(ExperimentConfig(threads=1, **base), dss)
    b = run_protocol(ExperimentConfig(threads=4, **base), dss)
    assert a.cells == b.cells


def test_failed_cell_does_not_abort():
    dss = generate_synthetic_domains(2, 3, 4, 20, 0.0, 1)
    # class 3 of "tiny" has only 2 rows: too few for an 8-per-class source sample
    X = dss[1].X[dss[1].labels != 3]
    labels = dss[1].labels[dss[1].labels != 3]
    X = np.vstack([X, dss[1].X[dss[1].labels == 3][:2]])
    labels = np.concatenate([labels, [3, 3]])
    tiny = FeatureDataset("tiny", "tiny", "raw", X, labels)
    cfg = ExperimentConfig(setting=2, methods=("nn",), splits=2, layer="raw")
    tab = run_protocol(cfg, [dss[0], tiny])
    assert tab.cell("nn", "synth0→tiny") is not None
    assert tab.cell("nn", "tiny→synth0") is None
    assert not tab.complete
    assert any("InsufficientClassSize" in d for d in tab.diagnostics)


def test_nontrivial_cells_have_positive_std():
    dss = generate_synthetic_domains(3, 5, 8, 20, 3.0, 4)
    cfg = ExperimentConfig(setting=2, methods=("nn", "kelm"), splits=20, seed=2, layer="raw",
                           params=SYNTH_PARAMS)
    tab = run_protocol(cfg, dss)
    for key, cell in tab.cells.items():
        if cell.mean < 1.0:
            assert cell.std > 0, key


def test_paired_splits_across_methods():
    """Every method sees the same partition: adding a method leaves the others unchanged."""
    dss = generate_synthetic_domains(2, 3, 4, 15, 1.0, 6)
    base = dict(setting=1, splits=4, seed=3, layer="raw", params=SYNTH_PARAMS)
    a = run_protocol(ExperimentConfig(methods=("nn",), **base), dss)
    b = run_protocol(ExperimentConfig(methods=("nn", "elm", "kelm"), **base), dss)
    for c in a.columns:
        assert a.cell("nn", c) == b.cell("nn", c)


def test_normalize_flag_runs():
    dss = generate_synthetic_domains(2, 3, 4, 15, 1.0, 6)
    cfg = ExperimentConfig(setting=1, methods=("nn",), splits=2, layer="raw", normalize=True)
    assert run_protocol(cfg, dss).complete
