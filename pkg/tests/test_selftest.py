from nymanlab import selftest
from nymanlab.cli import main


def test_all_suites_pass():
    rows = selftest.run_selftest()
    assert {r["suite"] for r in rows} == set(selftest.SUITES)
    failed = [r for r in rows if not r["passed"]]
    assert not failed, failed


def test_crashing_suite_is_reported(monkeypatch):
    def broken():
        yield "fine", True
        raise RuntimeError("boom")

    monkeypatch.setattr(selftest, "SUITES", {"broken": broken})
    rows = selftest.run_selftest()
    assert rows[0]["passed"] and not rows[1]["passed"]
    assert rows[1]["error"] == "RuntimeError: boom"


def test_cli_exit_nonzero_on_failure(monkeypatch, capsys):
    monkeypatch.setattr(selftest, "SUITES", {"bad": lambda: iter([("always false", False)])})
    assert main(["selftest"]) == 1
    assert '"fail"' in capsys.readouterr().out
