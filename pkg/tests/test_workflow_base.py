"""Tests for the workflow module."""

import logging
from pathlib import Path

import pandas as pd
import pytest

from pnn.config.main import PipelineConfig
from pnn.logger import get_logger
from pnn.tabular.samples import SignalTable
from pnn.workflows.base import BaseWorkflow

from .conftest import datetime_fixture  # noqa F401


class DummyWorkflow(BaseWorkflow):
    def run_main(self):
        pass


class JsonLike:
    def save(self, fpath):
        Path(fpath).write_text("{}")


@pytest.fixture(params=[get_logger("my_logger"), None], scope="function")
def workflow(request: pytest.FixtureRequest, tmp_path: Path):
    dpath_root = tmp_path / "my_output"
    workflow = DummyWorkflow(
        dpath_root=dpath_root, name="my_workflow", logger=request.param
    )
    workflow.logger.setLevel(logging.DEBUG)  # capture all logs
    return workflow


def test_abstract_class():
    with pytest.raises(TypeError, match="Can't instantiate abstract class"):
        BaseWorkflow(None, None)


def test_init(workflow: BaseWorkflow):
    assert isinstance(workflow.dpath_root, Path)
    assert isinstance(workflow.logger, logging.Logger)
    assert isinstance(workflow.config, PipelineConfig)
    assert workflow.layout.dpath_root == workflow.dpath_root


def test_str(workflow: BaseWorkflow):
    assert str(workflow).startswith("DummyWorkflow(")
    assert "name='my_workflow'" in str(workflow)


def test_generate_fpath_log(workflow: BaseWorkflow, datetime_fixture):  # noqa F811
    fpath_log = workflow.generate_fpath_log()
    assert (
        fpath_log
        == workflow.layout.dpath_logs / "my_workflow/my_workflow-20240404_1234.log"
    )


@pytest.mark.parametrize(
    "dnames_parent,fname_stem,expected",
    [
        ("sub", None, "my_workflow/sub/my_workflow-20240404_1234.log"),
        (["a", "b"], "run", "my_workflow/a/b/run-20240404_1234.log"),
    ],
)
def test_generate_fpath_log_custom(
    workflow: BaseWorkflow,
    dnames_parent,
    fname_stem,
    expected,
    datetime_fixture,  # noqa F811
):
    fpath_log = workflow.generate_fpath_log(
        dnames_parent=dnames_parent, fname_stem=fname_stem
    )
    assert fpath_log == workflow.layout.dpath_logs / expected


def test_stage(workflow: BaseWorkflow, caplog: pytest.LogCaptureFixture):
    with workflow.stage("learning"):
        pass
    assert caplog.records[-1].message == "[STAGE] learning"


def test_stage_failed(workflow: BaseWorkflow, caplog: pytest.LogCaptureFixture):
    with pytest.raises(ValueError, match="boom"):
        with workflow.stage("learning"):
            raise ValueError("boom")
    record = caplog.records[-1]
    assert record.levelno == logging.ERROR
    assert record.message == "Stage 'learning' failed: boom"


@pytest.mark.parametrize("dry_run", [True, False])
def test_save_files(workflow: BaseWorkflow, dry_run, caplog: pytest.LogCaptureFixture):
    workflow.dry_run = dry_run
    fpath_table = workflow.dpath_root / "signals.csv"
    fpath_obj = workflow.dpath_root / "obj.json"
    fpath_lines = workflow.dpath_root / "sub" / "lines.txt"
    workflow.dpath_root.mkdir(parents=True)

    workflow.save_tabular_file(
        SignalTable(pd.DataFrame({"x1": [0.5]})), fpath_table
    )
    workflow.save_file(JsonLike(), fpath_obj)
    workflow.save_lines(["a", "b"], fpath_lines)

    for fpath in (fpath_table, fpath_obj, fpath_lines):
        assert fpath.exists() != dry_run
    if dry_run:
        assert "Not writing" in caplog.text
    else:
        assert fpath_lines.read_text() == "a\nb\n"


@pytest.mark.parametrize("dry_run", [True, False])
def test_mkdir(workflow: BaseWorkflow, dry_run):
    workflow.dry_run = dry_run
    dpath = workflow.dpath_root / "a" / "b"
    workflow.mkdir(dpath)
    assert dpath.exists() != dry_run


def test_mkdir_file_exists(workflow: BaseWorkflow, tmp_path: Path):
    fpath = tmp_path / "file.txt"
    fpath.touch()
    with pytest.raises(FileExistsError, match="not a directory"):
        workflow.mkdir(fpath)


def test_run_setup(workflow: BaseWorkflow, caplog: pytest.LogCaptureFixture):
    workflow.run_setup()
    assert "BEGIN MY_WORKFLOW WORKFLOW" in caplog.text
    assert workflow.dpath_root.exists()


def test_run_setup_dry_run(workflow: BaseWorkflow, caplog: pytest.LogCaptureFixture):
    workflow.dry_run = True
    workflow.run_setup()
    assert "Doing a dry run" in caplog.text
    assert not workflow.dpath_root.exists()


def test_run(workflow: BaseWorkflow):
    assert workflow.run() is None


def test_run_cleanup(workflow: BaseWorkflow, caplog: pytest.LogCaptureFixture):
    workflow.run_cleanup()
    assert "END MY_WORKFLOW WORKFLOW" in caplog.text
