import pytest
from helpers import run_cli


@pytest.fixture(scope="session")
def pipeline_dir(tmp_path_factory):
    """Synthetic corpus plus a lexicon trained on it, built once."""
    out = tmp_path_factory.mktemp("pipeline")
    code, _, err = run_cli("gen-synthetic", "--out-dir", str(out))
    assert code == 0, err
    code, _, err = run_cli(
        "build-lexicon",
        "--posts",
        str(out / "train-posts.jsonl"),
        "--labels",
        str(out / "train-labels.jsonl"),
        "--kind",
        "gender",
        "--out",
        str(out / "lexicon.json"),
    )
    assert code == 0, err
    return out
