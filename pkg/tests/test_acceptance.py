"""
Acceptance Suite Smoke Tests.

Runs the cheap criteria of the selftest in quick mode and checks the
report contract: one row per selected criterion, reproducible case counts
for a fixed seed, and a PASS/FAIL table.
"""

import pytest

from services.acceptance import CRITERIA, format_table, run_selftest

CHEAP = ["leibniz algebra laws", "commutation identity", "bimodule hom dimensions", "hopf model"]


class TestSelftest:

    def setup_method(self):
        self.report = run_selftest(seed=7, quick=True, only=CHEAP)

    def test_selected_rows_only(self):
        assert [row.name for row in self.report.rows] == CHEAP
        assert self.report.kind == "selftest"
        assert self.report.quick is True

    def test_cheap_criteria_pass(self):
        """ASSERTION: the algebra laws, hom dimensions and Hopf model hold on every sampled case."""
        for row in self.report.rows:
            assert row.passed, f"{row.name}: {row.detail}"
            assert row.cases > 0
            assert row.failures == 0
        assert self.report.passed

    def test_case_counts_reproducible(self):
        """REGRESSION GUARD: a fixed seed gives the same cases, whatever ran before."""
        again = run_selftest(seed=7, quick=True, only=CHEAP[::-1])
        assert {r.name: r.cases for r in again.rows} == {r.name: r.cases for r in self.report.rows}

    def test_table_lists_every_row(self):
        table = format_table(self.report)
        for name in CHEAP:
            assert name in table
        assert "FAIL" not in table

    def test_criteria_names_unique(self):
        names = [name for name, _ in CRITERIA]
        assert len(names) == len(set(names)) == 10


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
