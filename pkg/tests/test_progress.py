import nrurn.monitor.progress as pr


def test_progress_table_columns(capsys):
    progress = pr.Progress("Picard iteration", index_name="chunk")
    progress.log_progress(1, residual=0.5, replicas=256)
    progress.log_progress(2, residual=0.25, replicas=512)

    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "Picard iteration"
    assert lines[1].split() == ["chunk", "replicas", "residual"]
    assert lines[3].split() == ["2", "512", "0.25"]
    assert progress.optimization_log == {'residual': [0.5, 0.25], 'replicas': [256, 512]}


def test_progress_repeats_header():
    progress = pr.Progress(verbose=False)
    for i in range(2 * pr.HEADER_EVERY + 1):
        progress.log_progress(i, residual=1.0 / (i + 1))
    assert len(progress.optimization_log['residual']) == 2 * pr.HEADER_EVERY + 1


def test_progress_silent(capsys):
    progress = pr.Progress("hidden", verbose=False)
    progress.log_progress(1, residual=1.0)
    assert capsys.readouterr().out == ""
