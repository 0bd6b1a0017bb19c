import io

import pandas as pd
import pytest

import src.bounds.recurrences as recurrences
from src.cli.main import main
from src.cli.verify import suite_cases, suite_lemma1, suite_oracle, suite_restrictions, suite_roots, suite_ss


def verdicts(out):
    frame = pd.read_csv(io.StringIO(out), comment="#")
    return dict(zip(frame["suite"], frame["verdict"]))


def test_lemma1_suite():
    result = suite_lemma1(trials=500, rng_seed=0, quiet=True)
    assert result.failed == 0
    assert result.passed == 500 + 3 * 5


def test_cases_suite():
    result = suite_cases(trials=300, rng_seed=1, quiet=True)
    assert result.failed == 0
    assert result.passed == 600


def test_ss_suite():
    result = suite_ss(n_max=10, oracle_n_max=8, level_cap=26, state_cap=5_000_000, quiet=True)
    assert result.failed == 0


def test_oracle_suite():
    result = suite_oracle(oracle_n_max=6, level_cap=26, state_cap=5_000_000, quiet=True)
    assert result.failed == 0
    assert result.passed == 6 * 7


def test_restrictions_suite():
    result = suite_restrictions(trials=2_000, rng_seed=0, quiet=True)
    assert result.failed == 0


def test_roots_suite():
    assert suite_roots().failed == 0


def test_cli_selected_suites(capsys):
    code = main(["verify", "--suite", "lemma1", "--suite", "roots", "--trials", "1000", "--quiet"])
    out, _ = capsys.readouterr()
    assert code == 0
    assert verdicts(out) == {"lemma1": "pass", "roots": "pass"}


def test_cli_sandwich_and_oracle(capsys):
    code = main(["verify", "--suite", "sandwich", "--suite", "oracle", "--n", "8", "--quiet"])
    out, _ = capsys.readouterr()
    assert code == 0
    assert set(verdicts(out).values()) == {"pass"}


def test_broken_subtree_sum_is_caught(capsys, monkeypatch):
    # perturb the enumerated subtree sum; the suite has to notice
    original = recurrences.subtree_bottom_sum
    monkeypatch.setattr(recurrences, "subtree_bottom_sum", lambda a, b1, b2: original(a, b1, b2) + 1)
    code = main(["verify", "--suite", "lemma1", "--trials", "200", "--quiet"])
    out, _ = capsys.readouterr()
    assert code == 4
    assert verdicts(out) == {"lemma1": "fail"}


def test_unknown_suite(capsys):
    assert main(["verify", "--suite", "nope", "--quiet"]) == 2


@pytest.mark.slow
def test_all_suites(capsys):
    code = main(["verify", "--trials", "20000", "--quiet"])
    out, _ = capsys.readouterr()
    assert code == 0
    assert len(verdicts(out)) == 7
