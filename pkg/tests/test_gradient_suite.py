import pytest

from interface.gradient_suite import LAYER_CASES, MODEL_CASES, run_gradient_suite


@pytest.mark.slow
def test_full_suite_passes():
    reports = run_gradient_suite(seed=0)
    assert len(reports) == len(LAYER_CASES) + len(MODEL_CASES)
    failed = {name: report.to_dict() for name, report in reports.items() if not report.passed}
    assert not failed


def test_every_layer_has_three_shapes():
    counts = {}
    for name, _, _, _ in LAYER_CASES:
        counts[name] = counts.get(name, 0) + 1
    for name in ('conv1d', 'dense', 'rnn', 'lstm', 'gru', 'multi_head_attention',
                 'position_wise_ffn', 'layer_norm', 'global_avg_pool'):
        assert counts[name] >= 3
    assert sum(1 for case in MODEL_CASES if case[0] == 'convlstmtransnet') >= 3
