import pytest

from curribatch.corpus import make_sample, parse_e2e_mr, Corpus
from synth import make_synth_corpus


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance test at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "acceptance" not in nodeid.split("::")[0]:
                continue
            if status != "error" and getattr(report, "when", "call") != "call":
                continue
            rows.append((nodeid.split("::")[-1], status == "passed"))
    if rows:
        terminalreporter.write_sep("=", "acceptance summary")
        for name, ok in sorted(rows):
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def synth_corpus() -> Corpus:
    """1000 varied restaurant-style samples, fixed seed."""
    return make_synth_corpus(1000, seed=13)


@pytest.fixture
def tiny_corpus() -> Corpus:
    rows = [
        ("name[Cocum], eatType[pub]", "Cocum is a family friendly pub."),
        ("name[The Vaults], food[French]", "The Vaults serves French food."),
        ("name[Strada], customer rating[5 out of 5]", "Strada is rated 5 out of 5."),
        ("name[Zizzi], area[riverside], food[Italian]", "Zizzi, on the riverside, is Italian."),
        ("name[The Eagle]", "The Eagle."),
    ]
    samples = [make_sample(i, parse_e2e_mr(mr), ref) for i, (mr, ref) in enumerate(rows)]
    return Corpus(samples=tuple(samples))
